#include "symcone/jordan.hpp"

#include "symcone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace symcone {

AlgebraKind AlgebraKind::rank1() { return {Family::rank1, 1}; }

AlgebraKind AlgebraKind::lorentz(int n) {
  if (n < 3) throw DimensionError("Lorentz algebra needs n >= 3");
  return {Family::lorentz, n};
}

AlgebraKind AlgebraKind::sym(int m) {
  if (m < 1) throw DimensionError("SymMatrices needs m >= 1");
  return {Family::sym, m};
}

AlgebraKind AlgebraKind::parse(const std::string& name) {
  auto tail_int = [&](std::size_t prefix) {
    const std::string tail = name.substr(prefix);
    if (tail.empty() || !std::all_of(tail.begin(), tail.end(), ::isdigit))
      throw DimensionError("unknown cone '" + name + "'");
    return std::stoi(tail);
  };
  if (name == "rank1") return rank1();
  if (name.rfind("lorentz", 0) == 0) return lorentz(tail_int(7));
  if (name.rfind("sym", 0) == 0) return sym(tail_int(3));
  throw DimensionError("unknown cone '" + name + "'");
}

int AlgebraKind::rank() const {
  switch (family_) {
    case Family::rank1: return 1;
    case Family::lorentz: return 2;
    case Family::sym: return param_;
  }
  return 1;
}

int AlgebraKind::dim() const {
  switch (family_) {
    case Family::rank1: return 1;
    case Family::lorentz: return param_;
    case Family::sym: return param_ * (param_ + 1) / 2;
  }
  return 1;
}

int AlgebraKind::peirce_dim() const {
  switch (family_) {
    case Family::rank1: return 0;
    case Family::lorentz: return param_ - 2;
    case Family::sym: return 1;
  }
  return 0;
}

std::string AlgebraKind::name() const {
  switch (family_) {
    case Family::rank1: return "rank1";
    case Family::lorentz: return "lorentz" + std::to_string(param_);
    case Family::sym: return "sym" + std::to_string(param_);
  }
  return "?";
}

Element::Element(AlgebraKind kind, Eigen::VectorXd coeffs) : kind_(kind), c_(std::move(coeffs)) {
  if (c_.size() != kind_.dim())
    throw DimensionError("coefficient vector of length " + std::to_string(c_.size()) + " for " +
                         kind_.name());
}

Element Element::identity(const AlgebraKind& kind) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(kind.dim());
  switch (kind.family()) {
    case Family::rank1:
    case Family::lorentz: c[0] = 1.0; break;
    case Family::sym:
      for (int i = 0; i < kind.param(); ++i) c[sym_index(kind.param(), i, i)] = 1.0;
      break;
  }
  return {kind, c};
}

Element Element::zero(const AlgebraKind& kind) { return {kind, Eigen::VectorXd::Zero(kind.dim())}; }

Element Element::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
  const int k = static_cast<int>(m.rows());
  const AlgebraKind kind = AlgebraKind::sym(k);
  Eigen::VectorXd c(kind.dim());
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) c[sym_index(k, i, j)] = m(i, j);
  return {kind, c};
}

Eigen::MatrixXd Element::matrix() const {
  if (kind_.family() != Family::sym) throw DimensionError("matrix view needs SymMatrices");
  return sym_matrix<double>(kind_.param(), c_);
}

static void require_same(const Element& a, const Element& b) {
  if (!(a.kind() == b.kind()))
    throw DimensionError("kind mismatch: " + a.kind().name() + " vs " + b.kind().name());
}

Element Element::operator+(const Element& o) const {
  require_same(*this, o);
  return {kind_, c_ + o.c_};
}
Element Element::operator-(const Element& o) const {
  require_same(*this, o);
  return {kind_, c_ - o.c_};
}
Element Element::operator*(double a) const { return {kind_, c_ * a}; }

int sym_index(int m, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * m - i * (i - 1) / 2 + (j - i);
}

template <class T>
Mat<T> sym_matrix(int m, const Vec<T>& c) {
  Mat<T> a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) a(i, j) = a(j, i) = c[sym_index(m, i, j)];
  return a;
}

template <class T>
static Vec<T> sym_coeffs(const Mat<T>& a) {
  const int m = static_cast<int>(a.rows());
  Vec<T> c(m * (m + 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) c[sym_index(m, i, j)] = a(i, j);
  return c;
}

Element product(const Element& a, const Element& b) {
  require_same(a, b);
  const AlgebraKind& k = a.kind();
  switch (k.family()) {
    case Family::rank1: return {k, a.coeffs().cwiseProduct(b.coeffs())};
    case Family::lorentz: {
      const int n = k.dim();
      Eigen::VectorXd c(n);
      c[0] = a.coeffs().dot(b.coeffs());
      c.tail(n - 1) = a[0] * b.coeffs().tail(n - 1) + b[0] * a.coeffs().tail(n - 1);
      return {k, c};
    }
    case Family::sym: {
      const Eigen::MatrixXd A = a.matrix(), B = b.matrix();
      const Eigen::MatrixXd P = 0.5 * (A * B + B * A);
      return {k, sym_coeffs<double>(P)};
    }
  }
  return a;
}

Element quadratic_rep(const Element& a, const Element& x) {
  require_same(a, x);
  if (a.kind().family() == Family::sym) {
    const Eigen::MatrixXd A = a.matrix();
    const Eigen::MatrixXd P = A * x.matrix() * A;
    return {a.kind(), sym_coeffs<double>(P)};
  }
  return product(a, product(a, x)) * 2.0 - product(product(a, a), x);
}

Eigen::MatrixXd multiplication_matrix(const Element& a) {
  const int n = a.dim();
  Eigen::MatrixXd L(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd ei = Eigen::VectorXd::Zero(n);
    ei[i] = 1.0;
    L.col(i) = product(a, Element(a.kind(), ei)).coeffs();
  }
  return L;
}

Eigen::MatrixXd quadratic_matrix(const Element& a) {
  const int n = a.dim();
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd ei = Eigen::VectorXd::Zero(n);
    ei[i] = 1.0;
    P.col(i) = quadratic_rep(a, Element(a.kind(), ei)).coeffs();
  }
  return P;
}

Spectrum spectral(const Element& x) {
  const AlgebraKind& k = x.kind();
  Spectrum sp;
  switch (k.family()) {
    case Family::rank1:
      sp.eigenvalues = x.coeffs();
      sp.frame = {Element::identity(k)};
      break;
    case Family::lorentz: {
      const int n = k.dim();
      Eigen::VectorXd u = x.coeffs().tail(n - 1);
      const double len = u.norm();
      if (len > 0.0) {
        u /= len;
      } else {
        u.setZero();
        u[0] = 1.0;
      }
      sp.eigenvalues.resize(2);
      sp.eigenvalues << x[0] + len, x[0] - len;
      Eigen::VectorXd f1(n), f2(n);
      f1[0] = f2[0] = 0.5;
      f1.tail(n - 1) = 0.5 * u;
      f2.tail(n - 1) = -0.5 * u;
      sp.frame = {Element(k, f1), Element(k, f2)};
      break;
    }
    case Family::sym: {
      const int m = k.param();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.matrix());
      sp.eigenvalues.resize(m);
      for (int i = 0; i < m; ++i) {
        const int src = m - 1 - i;
        sp.eigenvalues[i] = es.eigenvalues()[src];
        const Eigen::VectorXd v = es.eigenvectors().col(src);
        const Eigen::MatrixXd proj = v * v.transpose();
        sp.frame.emplace_back(k, sym_coeffs<double>(proj));
      }
      break;
    }
  }
  return sp;
}

Eigen::VectorXd eigenvalues(const Element& x) {
  const AlgebraKind& k = x.kind();
  switch (k.family()) {
    case Family::rank1: return x.coeffs();
    case Family::lorentz: {
      const double len = x.coeffs().tail(k.dim() - 1).norm();
      Eigen::VectorXd ev(2);
      ev << x[0] + len, x[0] - len;
      return ev;
    }
    case Family::sym: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.matrix(), Eigen::EigenvaluesOnly);
      return es.eigenvalues().reverse();
    }
  }
  return x.coeffs();
}

Element spectral_apply(const Element& x, const std::function<double(double)>& f) {
  const Spectrum sp = spectral(x);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(x.dim());
  for (std::size_t k = 0; k < sp.frame.size(); ++k)
    c += f(sp.eigenvalues[static_cast<int>(k)]) * sp.frame[k].coeffs();
  return {x.kind(), c};
}

template <class T>
Vec<T> minors_of(const AlgebraKind& kind, const Vec<T>& c) {
  if (c.size() != kind.dim()) throw DimensionError("coefficient length mismatch in minors");
  Vec<T> d(kind.rank());
  switch (kind.family()) {
    case Family::rank1: d[0] = c[0]; break;
    case Family::lorentz: {
      T q = c[0] * c[0];
      for (int i = 1; i < c.size(); ++i) q -= c[i] * c[i];
      d[0] = c[0] + c[1];
      d[1] = q;
      break;
    }
    case Family::sym: {
      const int m = kind.param();
      const Mat<T> a = sym_matrix<T>(m, c);
      for (int k = 1; k <= m; ++k) d[k - 1] = Mat<T>(a.topLeftCorner(k, k)).determinant();
      break;
    }
  }
  return d;
}

template <class T>
Vec<T> rotated_minors_of(const AlgebraKind& kind, const Vec<T>& c) {
  if (c.size() != kind.dim()) throw DimensionError("coefficient length mismatch in minors");
  switch (kind.family()) {
    case Family::rank1: return minors_of<T>(kind, c);
    case Family::lorentz: {
      Vec<T> d = minors_of<T>(kind, c);
      d[0] = c[0] - c[1];
      return d;
    }
    case Family::sym: {
      const int m = kind.param();
      const Mat<T> a = sym_matrix<T>(m, c);
      Vec<T> d(m);
      for (int k = 1; k <= m; ++k) d[k - 1] = Mat<T>(a.bottomRightCorner(k, k)).determinant();
      return d;
    }
  }
  return c;
}

Eigen::VectorXd minors(const Element& x) { return minors_of<double>(x.kind(), x.coeffs()); }
Eigen::VectorXd rotated_minors(const Element& x) {
  return rotated_minors_of<double>(x.kind(), x.coeffs());
}

double determinant(const Element& x) { return minors(x)[x.kind().rank() - 1]; }

template <class T>
T power_from_log_minors(std::span<const T> log_minors, std::span<const double> s) {
  if (log_minors.size() != s.size()) throw DimensionError("exponent length must equal rank");
  T acc{};
  const std::size_t r = s.size();
  for (std::size_t k = 0; k < r; ++k) {
    const double next = (k + 1 < r) ? s[k + 1] : 0.0;
    acc += (s[k] - next) * log_minors[k];
  }
  return acc;
}

static double log_power(const Eigen::VectorXd& d, std::span<const double> s, const char* what) {
  std::vector<double> logs(static_cast<std::size_t>(d.size()));
  for (int k = 0; k < d.size(); ++k) {
    if (!(d[k] > 0.0)) throw DomainError(std::string(what) + ": point is not in the cone");
    logs[static_cast<std::size_t>(k)] = std::log(d[k]);
  }
  return power_from_log_minors<double>(logs, s);
}

double log_power_delta(const Element& x, std::span<const double> s) {
  return log_power(minors(x), s, "power_delta");
}
double power_delta(const Element& x, std::span<const double> s) {
  return std::exp(log_power_delta(x, s));
}
double log_rotated_power_delta(const Element& x, std::span<const double> s) {
  return log_power(rotated_minors(x), s, "rotated_power_delta");
}
double rotated_power_delta(const Element& x, std::span<const double> s) {
  return std::exp(log_rotated_power_delta(x, s));
}

Element inverse(const Element& x) {
  const Spectrum sp = spectral(x);
  const double scale = sp.eigenvalues.cwiseAbs().maxCoeff();
  for (int k = 0; k < sp.eigenvalues.size(); ++k)
    if (std::abs(sp.eigenvalues[k]) <= 1e-14 * scale || sp.eigenvalues[k] == 0.0)
      throw DomainError("inverse: element is singular");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(x.dim());
  for (std::size_t k = 0; k < sp.frame.size(); ++k)
    c += sp.frame[k].coeffs() / sp.eigenvalues[static_cast<int>(k)];
  return {x.kind(), c};
}

static void require_positive_spectrum(const Element& x, const char* what) {
  if (!(eigenvalues(x).minCoeff() > 0.0)) throw DomainError(std::string(what) + ": point is not in the cone");
}

Element sqrt(const Element& x) {
  require_positive_spectrum(x, "sqrt");
  return spectral_apply(x, [](double l) { return std::sqrt(l); });
}

Element exp(const Element& x) {
  return spectral_apply(x, [](double l) { return std::exp(l); });
}

Element log(const Element& x) {
  require_positive_spectrum(x, "log");
  return spectral_apply(x, [](double l) { return std::log(l); });
}

double trace(const Element& x) {
  const AlgebraKind& k = x.kind();
  switch (k.family()) {
    case Family::rank1: return x[0];
    case Family::lorentz: return 2.0 * x[0];
    case Family::sym: {
      double t = 0.0;
      for (int i = 0; i < k.param(); ++i) t += x[sym_index(k.param(), i, i)];
      return t;
    }
  }
  return 0.0;
}

Eigen::VectorXd trace_gram_diagonal(const AlgebraKind& kind) {
  Eigen::VectorXd g(kind.dim());
  switch (kind.family()) {
    case Family::rank1: g.setOnes(); break;
    case Family::lorentz: g.setConstant(2.0); break;
    case Family::sym: {
      const int m = kind.param();
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) g[sym_index(m, i, j)] = (i == j) ? 1.0 : 2.0;
      break;
    }
  }
  return g;
}

double trace_inner(const Element& a, const Element& b) {
  require_same(a, b);
  return (a.coeffs().array() * b.coeffs().array() * trace_gram_diagonal(a.kind()).array()).sum();
}

double norm(const Element& x) { return std::sqrt(trace_inner(x, x)); }

Eigen::VectorXd to_orthonormal(const Element& x) {
  return x.coeffs().cwiseProduct(trace_gram_diagonal(x.kind()).cwiseSqrt());
}

Element from_orthonormal(const AlgebraKind& kind, const Eigen::VectorXd& u) {
  return {kind, u.cwiseQuotient(trace_gram_diagonal(kind).cwiseSqrt())};
}

double coefficient_volume_factor(const AlgebraKind& kind) {
  return std::sqrt(trace_gram_diagonal(kind).prod());
}

std::vector<Element> jordan_frame(const AlgebraKind& kind) {
  std::vector<Element> f;
  const int n = kind.dim();
  switch (kind.family()) {
    case Family::rank1: f.push_back(Element::identity(kind)); break;
    case Family::lorentz: {
      Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n), c2 = Eigen::VectorXd::Zero(n);
      c1[0] = c2[0] = c1[1] = 0.5;
      c2[1] = -0.5;
      f.emplace_back(kind, c1);
      f.emplace_back(kind, c2);
      break;
    }
    case Family::sym:
      for (int i = 0; i < kind.param(); ++i) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
        c[sym_index(kind.param(), i, i)] = 1.0;
        f.emplace_back(kind, c);
      }
      break;
  }
  return f;
}

Element frame_diagonal(const AlgebraKind& kind, std::span<const double> a) {
  if (static_cast<int>(a.size()) != kind.rank()) throw DimensionError("frame coefficients must have length r");
  const std::vector<Element> f = jordan_frame(kind);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(kind.dim());
  for (std::size_t k = 0; k < f.size(); ++k) c += a[k] * f[k].coeffs();
  return {kind, c};
}

template Mat<double> sym_matrix<double>(int, const Vec<double>&);
template Mat<std::complex<double>> sym_matrix<std::complex<double>>(int, const Vec<std::complex<double>>&);
template Vec<double> minors_of<double>(const AlgebraKind&, const Vec<double>&);
template Vec<std::complex<double>> minors_of<std::complex<double>>(const AlgebraKind&,
                                                                   const Vec<std::complex<double>>&);
template Vec<double> rotated_minors_of<double>(const AlgebraKind&, const Vec<double>&);
template Vec<std::complex<double>> rotated_minors_of<std::complex<double>>(
    const AlgebraKind&, const Vec<std::complex<double>>&);
template double power_from_log_minors<double>(std::span<const double>, std::span<const double>);
template std::complex<double> power_from_log_minors<std::complex<double>>(
    std::span<const std::complex<double>>, std::span<const double>);

}  // namespace symcone
