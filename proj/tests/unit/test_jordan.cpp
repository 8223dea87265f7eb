#include "support.hpp"

#include <symcone/cone.hpp>
#include <symcone/errors.hpp>
#include <symcone/jordan.hpp>

#include <doctest.h>

#include <array>
#include <random>

using namespace symcone;
using testsupport::random_cone_point;
using testsupport::random_element;

namespace {

Element lor(std::initializer_list<double> v) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) c[i++] = x;
  return Element(AlgebraKind::lorentz(static_cast<int>(v.size())), c);
}

Element sym2(double a, double b, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, d;
  return Element::from_matrix(m);
}

const std::array<AlgebraKind, 5> kKinds = {AlgebraKind::rank1(), AlgebraKind::lorentz(3), AlgebraKind::lorentz(5),
                                           AlgebraKind::sym(2), AlgebraKind::sym(3)};

}  // namespace

TEST_SUITE("jordan") {

TEST_CASE("algebra descriptors") {
  CHECK(AlgebraKind::lorentz(3).rank() == 2);
  CHECK(AlgebraKind::lorentz(3).dim() == 3);
  CHECK(AlgebraKind::sym(3).dim() == 6);
  CHECK(AlgebraKind::sym(3).rank() == 3);
  CHECK(AlgebraKind::parse("lorentz4") == AlgebraKind::lorentz(4));
  CHECK(AlgebraKind::parse("sym2") == AlgebraKind::sym(2));
  CHECK(AlgebraKind::parse("rank1") == AlgebraKind::rank1());
  CHECK_THROWS(AlgebraKind::parse("lorentz2"));
  CHECK_THROWS(AlgebraKind::parse("banana"));
  CHECK_THROWS_AS(Element(AlgebraKind::lorentz(3), Eigen::VectorXd::Zero(2)), DimensionError);
}

TEST_CASE("frame sums to the identity") {
  for (const auto& kind : kKinds) {
    Element sum = Element::zero(kind);
    for (const auto& c : jordan_frame(kind)) sum = sum + c;
    CHECK((sum - Element::identity(kind)).coeffs().norm() < 1e-15);
  }
  const auto f = jordan_frame(AlgebraKind::lorentz(3));
  CHECK(f[0].coeffs().isApprox(lor({0.5, 0.5, 0}).coeffs()));
}

TEST_CASE("product examples") {
  CHECK(product(lor({1, 0, 0}), lor({2, 1, 0})).coeffs().isApprox(lor({2, 1, 0}).coeffs()));
  CHECK(product(lor({0, 1, 0}), lor({0, 1, 0})).coeffs().isApprox(lor({1, 0, 0}).coeffs()));
  const Element p = product(sym2(1, 0, 2), sym2(3, 0, 4));
  CHECK(p.matrix().isApprox((Eigen::Matrix2d() << 3, 0, 0, 8).finished()));
  CHECK_THROWS_AS(product(lor({1, 0, 0}), sym2(1, 0, 1)), DimensionError);
}

TEST_CASE("product matches matrix and Lorentz oracles") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto kl = AlgebraKind::lorentz(4);
    const Element a = random_element(kl, rng), b = random_element(kl, rng);
    CHECK((product(a, b).coeffs() - testsupport::lorentz_product(a.coeffs(), b.coeffs())).norm() < 1e-13);

    const auto ks = AlgebraKind::sym(3);
    const Element x = random_element(ks, rng), y = random_element(ks, rng);
    const Eigen::MatrixXd X = testsupport::sym_from_upper(3, x.coeffs());
    const Eigen::MatrixXd Y = testsupport::sym_from_upper(3, y.coeffs());
    CHECK((product(x, y).matrix() - 0.5 * (X * Y + Y * X)).norm() < 1e-13);
    CHECK((quadratic_rep(x, y).matrix() - X * Y * X).norm() < 1e-12);
  }
}

TEST_CASE("quadratic representation examples") {
  std::mt19937_64 rng(3);
  for (const auto& kind : kKinds) {
    const Element x = random_element(kind, rng);
    CHECK((quadratic_rep(Element::identity(kind), x) - x).coeffs().norm() < 1e-14);
    CHECK((quadratic_rep(x, Element::identity(kind)) - product(x, x)).coeffs().norm() < 1e-13);
    CHECK((quadratic_matrix(x) * Element::identity(kind).coeffs() - product(x, x).coeffs()).norm() < 1e-13);
  }
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  const Element r = quadratic_rep(sym2(1, 0, 2), Element::from_matrix(x));
  CHECK(r.matrix().isApprox((Eigen::Matrix2d() << 0, 2, 2, 0).finished()));
}

TEST_CASE("spectral examples") {
  for (const auto& kind : kKinds) {
    const Eigen::VectorXd ev = eigenvalues(Element::identity(kind));
    CHECK((ev.array() - 1.0).abs().maxCoeff() < 1e-14);
  }
  const Eigen::VectorXd l = eigenvalues(lor({2, 1, 0}));
  CHECK(l[0] == doctest::Approx(3.0));
  CHECK(l[1] == doctest::Approx(1.0));
  const Eigen::VectorXd m = eigenvalues(sym2(2, 1, 2));
  CHECK(m[0] == doctest::Approx(3.0));
  CHECK(m[1] == doctest::Approx(1.0));
}

TEST_CASE("spectral frame reconstructs and is idempotent") {
  std::mt19937_64 rng(5);
  for (const auto& kind : kKinds) {
    for (int t = 0; t < 20; ++t) {
      const Element x = random_element(kind, rng);
      const Spectrum sp = spectral(x);
      const double tol = 1e-10 * (1.0 + norm(x));
      Element rec = Element::zero(kind);
      for (int k = 0; k < kind.rank(); ++k) rec = rec + sp.eigenvalues[k] * sp.frame[k];
      CHECK((rec - x).coeffs().norm() < tol);
      for (int j = 0; j < kind.rank(); ++j)
        for (int k = 0; k < kind.rank(); ++k) {
          const Element p = product(sp.frame[j], sp.frame[k]);
          const Element expect = j == k ? sp.frame[k] : Element::zero(kind);
          CHECK((p - expect).coeffs().norm() < tol);
        }
      for (int k = 1; k < kind.rank(); ++k) CHECK(sp.eigenvalues[k - 1] >= sp.eigenvalues[k]);
    }
  }
}

TEST_CASE("minors examples") {
  for (const auto& kind : kKinds) {
    CHECK((minors(Element::identity(kind)).array() - 1.0).abs().maxCoeff() < 1e-14);
    CHECK((rotated_minors(Element::identity(kind)).array() - 1.0).abs().maxCoeff() < 1e-14);
  }
  const Eigen::VectorXd a = minors(lor({2, 1, 0}));
  CHECK(a[0] == doctest::Approx(3.0));
  CHECK(a[1] == doctest::Approx(3.0));
  const Eigen::VectorXd b = rotated_minors(lor({2, 1, 0}));
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b[1] == doctest::Approx(3.0));
  const Eigen::VectorXd c = minors(sym2(2, 1, 3));
  CHECK(c[0] == doctest::Approx(2.0));
  CHECK(c[1] == doctest::Approx(5.0));
  const Eigen::VectorXd d = rotated_minors(sym2(2, 1, 3));
  CHECK(d[0] == doctest::Approx(3.0));
  CHECK(d[1] == doctest::Approx(5.0));
}

TEST_CASE("minors match leading and trailing determinants") {
  std::mt19937_64 rng(7);
  const int m = 3;
  for (int t = 0; t < 30; ++t) {
    const Element x = random_element(AlgebraKind::sym(m), rng);
    const Eigen::MatrixXd X = testsupport::sym_from_upper(m, x.coeffs());
    const Eigen::VectorXd mk = minors(x), rk = rotated_minors(x);
    for (int k = 1; k <= m; ++k) {
      CHECK(mk[k - 1] == doctest::Approx(X.topLeftCorner(k, k).determinant()).epsilon(1e-10));
      CHECK(rk[k - 1] == doctest::Approx(X.bottomRightCorner(k, k).determinant()).epsilon(1e-10));
    }
  }
}

TEST_CASE("power function examples") {
  const std::array<double, 2> s{2.0, 1.0};
  CHECK(power_delta(lor({2, 1, 0}), s) == doctest::Approx(9.0));
  const std::array<double, 1> half{0.5};
  CHECK(power_delta(Element(AlgebraKind::rank1(), Eigen::VectorXd::Constant(1, 4.0)), half) ==
        doctest::Approx(2.0));
  const std::array<double, 2> any{-0.7, 3.1};
  CHECK(power_delta(Element::identity(AlgebraKind::lorentz(3)), any) == doctest::Approx(1.0));
  CHECK_THROWS_AS(log_power_delta(lor({1, 2, 0}), s), DomainError);
}

TEST_CASE("inverse and sqrt") {
  for (const auto& kind : kKinds)
    CHECK((inverse(Element::identity(kind)) - Element::identity(kind)).coeffs().norm() < 1e-14);
  CHECK(inverse(lor({2, 1, 0})).coeffs().isApprox(lor({2.0 / 3, -1.0 / 3, 0}).coeffs()));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const Element x = random_cone_point(AlgebraKind::sym(3), rng);
    const Eigen::MatrixXd X = x.matrix();
    CHECK((inverse(x).matrix() - X.inverse()).norm() < 1e-10 * X.inverse().norm());
    const Element r = symcone::sqrt(x);
    CHECK((product(r, r) - x).coeffs().norm() < 1e-11 * (1.0 + norm(x)));
    CHECK((symcone::log(symcone::exp(x)) - x).coeffs().norm() < 1e-10 * (1.0 + norm(x)));
  }
}

TEST_CASE("trace inner product") {
  for (const auto& kind : kKinds) {
    const Element e = Element::identity(kind);
    CHECK(trace_inner(e, e) == doctest::Approx(kind.rank()));
  }
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const Element a = random_element(AlgebraKind::lorentz(4), rng), b = random_element(AlgebraKind::lorentz(4), rng);
    CHECK(trace_inner(a, b) == doctest::Approx(2.0 * a.coeffs().dot(b.coeffs())));
    const Element x = random_element(AlgebraKind::sym(3), rng), y = random_element(AlgebraKind::sym(3), rng);
    CHECK(trace_inner(x, y) == doctest::Approx((x.matrix() * y.matrix()).trace()));
    CHECK(to_orthonormal(x).norm() == doctest::Approx(norm(x)));
    CHECK((from_orthonormal(x.kind(), to_orthonormal(x)) - x).coeffs().norm() < 1e-13);
  }
}

TEST_CASE("Jordan identity, commutativity and bilinearity") {
  std::mt19937_64 rng(17);
  for (const auto& kind : kKinds) {
    for (int t = 0; t < 50; ++t) {
      const Element x = random_element(kind, rng), y = random_element(kind, rng), z = random_element(kind, rng);
      const Element x2 = product(x, x);
      const Element lhs = product(x2, product(x, y)), rhs = product(x, product(x2, y));
      CHECK((lhs - rhs).coeffs().norm() <= 1e-12 * (1.0 + lhs.coeffs().norm()));
      CHECK((product(x, y) - product(y, x)).coeffs().norm() < 1e-14 * (1.0 + norm(x) * norm(y)));
      const Element bl = product(x, 2.0 * y + z) - (2.0 * product(x, y) + product(x, z));
      CHECK(bl.coeffs().norm() < 1e-13 * (1.0 + norm(x) * (norm(y) + norm(z))));
    }
  }
}

TEST_CASE("determinant and minor homogeneity") {
  std::mt19937_64 rng(19);
  for (const auto& kind : kKinds) {
    for (int t = 0; t < 30; ++t) {
      const Element a = random_cone_point(kind, rng), x = random_cone_point(kind, rng);
      const double lhs = determinant(quadratic_rep(a, x));
      const double rhs = determinant(a) * determinant(a) * determinant(x);
      CHECK(testsupport::rel_err(lhs, rhs) < 1e-10);

      std::vector<double> diag(kind.rank());
      std::uniform_real_distribution<double> u(0.3, 3.0);
      for (auto& d : diag) d = u(rng);
      const Element fd = frame_diagonal(kind, diag);
      const Eigen::VectorXd before = minors(x), after = minors(quadratic_rep(fd, x));
      double factor = 1.0;
      for (int k = 0; k < kind.rank(); ++k) {
        factor *= diag[k] * diag[k];
        CHECK(testsupport::rel_err(after[k], factor * before[k]) < 1e-10);
      }
    }
  }
}

TEST_CASE("Sylvester: minors, eigenvalues and membership agree") {
  std::mt19937_64 rng(23);
  for (const auto& kind : kKinds) {
    int inside = 0, outside = 0;
    for (int t = 0; t < 200; ++t) {
      Element x = random_element(kind, rng);
      x = x + 0.8 * Element::identity(kind);
      const bool by_minors = (minors(x).array() > 0).all();
      const bool by_eigen = (eigenvalues(x).array() > 0).all();
      CHECK(by_minors == by_eigen);
      CHECK(contains(x) == by_eigen);
      (by_eigen ? inside : outside)++;
    }
    CHECK(inside > 0);
    CHECK(outside > 0);
  }
}

TEST_CASE("rotated-frame inverse formula") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g(0.0, 1.5);
  for (const auto& kind : kKinds) {
    for (int t = 0; t < 30; ++t) {
      const Element y = random_cone_point(kind, rng);
      std::vector<double> s(kind.rank());
      for (auto& v : s) v = g(rng);
      const SpectralParam sp(kind, s);
      const SpectralParam reversed = sp.reversed();
      const std::vector<double> rev(reversed.values().begin(), reversed.values().end());
      const double lhs = log_power_delta(inverse(y), s);
      const double rhs = -log_rotated_power_delta(y, rev);
      CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
    }
  }
}

}  // TEST_SUITE
