#include "symcone/cone.hpp"

#include "symcone/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>

namespace symcone {

ConeIndexData index_data(const AlgebraKind& kind) {
  ConeIndexData d;
  d.r = kind.rank();
  d.n = kind.dim();
  d.n_k.assign(static_cast<std::size_t>(d.r), 0.0);
  d.m_k.assign(static_cast<std::size_t>(d.r), 0.0);
  if (d.r >= 2) {
    const double a = 2.0 * (kind.n_over_r() - 1.0) / (d.r - 1);
    for (int k = 1; k <= d.r; ++k) {
      d.n_k[k - 1] = (k - 1) * a;
      d.m_k[k - 1] = (d.r - k) * a;
    }
  }
  return d;
}

SpectralParam::SpectralParam(AlgebraKind kind, std::vector<double> s) : kind_(kind), s_(std::move(s)) {
  if (static_cast<int>(s_.size()) != kind_.rank())
    throw DimensionError("spectral parameter needs " + std::to_string(kind_.rank()) + " components");
}

SpectralParam SpectralParam::constant(const AlgebraKind& kind, double v) {
  return {kind, std::vector<double>(static_cast<std::size_t>(kind.rank()), v)};
}

bool SpectralParam::bergman_ok() const {
  const ConeIndexData d = index_data(kind_);
  for (std::size_t k = 0; k < s_.size(); ++k)
    if (!(s_[k] > d.n_k[k] / 2.0)) return false;
  return true;
}

bool SpectralParam::interp_ok() const {
  const double bound = kind_.n_over_r() - 1.0;
  return std::all_of(s_.begin(), s_.end(), [&](double v) { return v > bound; });
}

SpectralParam SpectralParam::plus(double c) const {
  std::vector<double> t = s_;
  for (double& v : t) v += c;
  return {kind_, t};
}

SpectralParam SpectralParam::plus(const SpectralParam& o) const {
  if (!(o.kind_ == kind_)) throw DimensionError("spectral parameters of different kinds");
  std::vector<double> t = s_;
  for (std::size_t k = 0; k < t.size(); ++k) t[k] += o.s_[k];
  return {kind_, t};
}

SpectralParam SpectralParam::scaled(double c) const {
  std::vector<double> t = s_;
  for (double& v : t) v *= c;
  return {kind_, t};
}

SpectralParam SpectralParam::reversed() const {
  std::vector<double> t(s_.rbegin(), s_.rend());
  return {kind_, t};
}

double SpectralParam::sum() const {
  double acc = 0.0;
  for (double v : s_) acc += v;
  return acc;
}

bool contains(const Element& x) {
  const Eigen::VectorXd d = minors(x);
  for (int k = 0; k < d.size(); ++k)
    if (!(d[k] > 0.0)) return false;
  return true;
}

double invariant_distance(const Element& x, const Element& y) {
  if (!contains(x) || !contains(y)) throw DomainError("invariant_distance: point is not in the cone");
  const Element a = spectral_apply(x, [](double l) { return 1.0 / std::sqrt(l); });
  const Eigen::VectorXd ev = eigenvalues(quadratic_rep(a, y));
  double acc = 0.0;
  for (int k = 0; k < ev.size(); ++k) {
    if (!(ev[k] > 0.0)) throw DomainError("invariant_distance: degenerate spectrum");
    const double l = std::log(ev[k]);
    acc += l * l;
  }
  return std::sqrt(acc);
}

Element ConeTransform::apply(const Element& x) const {
  if (!(x.kind() == kind)) throw DimensionError("transform applied to an element of another algebra");
  return {kind, map * x.coeffs()};
}

ConeTransform transform_to(const Element& y) {
  const Element a = sqrt(y);
  ConeTransform g{y.kind(), quadratic_matrix(a), Eigen::MatrixXd(), 1.0};
  g.inverse_map = g.map.inverse();
  g.det = g.map.determinant();
  return g;
}

double log_gamma_omega(const SpectralParam& s) {
  const ConeIndexData d = index_data(s.kind());
  const double two_pi = 2.0 * boost::math::constants::pi<double>();
  double acc = 0.5 * (d.n - d.r) * std::log(two_pi);
  for (int k = 0; k < d.r; ++k) {
    const double a = s[static_cast<std::size_t>(k)] - d.n_k[k] / 2.0;
    if (!(a > 0.0)) throw DomainError("gamma_omega: s_k must exceed n_k/2");
    acc += std::lgamma(a);
  }
  return acc;
}

double gamma_omega(const SpectralParam& s) { return std::exp(log_gamma_omega(s)); }

double laplace_power_closed(const SpectralParam& s, const Element& y) {
  if (!(y.kind() == s.kind())) throw DimensionError("laplace: kind mismatch");
  if (!contains(y)) throw DomainError("laplace: y is not in the cone");
  const SpectralParam rs = s.reversed();
  return std::exp(log_gamma_omega(s) - log_rotated_power_delta(y, rs.values()));
}

ChartNode chart_node(const AlgebraKind& kind, std::span<const double> ell, std::span<const double> zeta) {
  const int r = kind.rank(), n = kind.dim();
  if (static_cast<int>(ell.size()) != r || static_cast<int>(zeta.size()) != n - r)
    throw DimensionError("chart coordinates have the wrong length");
  const ConeIndexData idx = index_data(kind);
  Eigen::VectorXd c(n);
  switch (kind.family()) {
    case Family::rank1: c[0] = std::exp(ell[0]); break;
    case Family::lorentz: {
      double z2 = 0.0;
      for (double v : zeta) z2 += v * v;
      const double u = std::exp(ell[0]);
      const double w = std::exp(ell[1]) + z2;
      const double root_u = std::exp(0.5 * ell[0]);
      c[0] = 0.5 * (u + w);
      c[1] = 0.5 * (u - w);
      for (int i = 2; i < n; ++i) c[i] = root_u * zeta[static_cast<std::size_t>(i - 2)];
      break;
    }
    case Family::sym: {
      const int m = kind.param();
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
      std::size_t z = 0;
      for (int i = 0; i < m; ++i) {
        L(i, i) = std::exp(0.5 * ell[static_cast<std::size_t>(i)]);
        for (int j = 0; j < i; ++j) L(i, j) = zeta[z++];
      }
      const Eigen::MatrixXd Y = L * L.transpose();
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) c[sym_index(m, i, j)] = Y(i, j);
      break;
    }
  }
  ChartNode node{Element(kind, c), Eigen::VectorXd(r), 0.5 * (n - r) * std::log(2.0)};
  double acc = 0.0;
  for (int k = 0; k < r; ++k) {
    acc += ell[static_cast<std::size_t>(k)];
    node.log_minors[k] = acc;
    node.log_density -= 0.5 * idx.n_k[k] * ell[static_cast<std::size_t>(k)];
  }
  return node;
}

namespace {

bool chart_in_range(std::span<const double> pt, int r) {
  for (std::size_t i = 0; i < pt.size(); ++i) {
    const double lim = (static_cast<int>(i) < r) ? 600.0 : 1e100;
    if (!(std::abs(pt[i]) < lim)) return false;
  }
  return true;
}

}  // namespace

QuadResult integrate_invariant(const AlgebraKind& kind, const std::function<double(const ChartNode&)>& f,
                               double tolerance) {
  const int r = kind.rank(), n = kind.dim();
  auto g = [&](std::span<const double> pt) -> double {
    if (!chart_in_range(pt, r)) return 0.0;
    const ChartNode node = chart_node(kind, pt.subspan(0, static_cast<std::size_t>(r)),
                                      pt.subspan(static_cast<std::size_t>(r)));
    return std::exp(node.log_density) * f(node);
  };
  QuadResult res;
  res.value = integrate_real_nested(n, g, tolerance, &res.error_estimate);
  if (!std::isfinite(res.value)) throw ConvergenceError("invariant integral is not finite");
  return res;
}

QuadResult laplace_power_quadrature(const SpectralParam& s, const Element& y, const QuadratureConfig& cfg) {
  if (!(y.kind() == s.kind())) throw DimensionError("laplace: kind mismatch");
  if (!contains(y)) throw DomainError("laplace: y is not in the cone");
  if (!s.gamma_ok()) throw DomainError("laplace: s_k must exceed n_k/2");
  const AlgebraKind kind = y.kind();
  const int r = kind.rank(), n = kind.dim();
  const double tol = std::clamp(cfg.tolerance * 1e-3, 1e-13, 1e-6);
  auto g = [&](std::span<const double> pt) -> double {
    if (!chart_in_range(pt, r)) return 0.0;
    const ChartNode node = chart_node(kind, pt.subspan(0, static_cast<std::size_t>(r)),
                                      pt.subspan(static_cast<std::size_t>(r)));
    const double inner = trace_inner(node.y, y);
    if (!std::isfinite(inner)) return 0.0;
    const double lp = power_from_log_minors<double>(
        std::span<const double>(node.log_minors.data(), static_cast<std::size_t>(r)), s.values());
    return std::exp(node.log_density + lp - inner);
  };
  QuadResult res;
  res.value = integrate_real_nested(n, g, tol, &res.error_estimate);
  if (!std::isfinite(res.value) || res.error_estimate > cfg.tolerance * std::abs(res.value))
    throw ConvergenceError("laplace quadrature did not converge (value " + std::to_string(res.value) +
                           ", error " + std::to_string(res.error_estimate) + ")");
  return res;
}

double exp_chart_density(const Element& eta) {
  const int d = eta.kind().peirce_dim();
  if (d == 0) return 1.0;
  const Eigen::VectorXd ev = eigenvalues(eta);
  double acc = 0.0;
  for (int j = 0; j < ev.size(); ++j)
    for (int k = j + 1; k < ev.size(); ++k) {
      const double t = 0.5 * (ev[j] - ev[k]);
      if (std::abs(t) > 1e-8) acc += d * std::log(std::sinh(std::abs(t)) / std::abs(t));
    }
  return std::exp(acc);
}

Element ball_point(const Element& center, const Eigen::VectorXd& eta_orthonormal) {
  const Element y = exp(from_orthonormal(center.kind(), eta_orthonormal));
  return transform_to(center).apply(y);
}

std::vector<WeightedPoint> ball_nodes(const Element& center, double radius, int radial_cells, int order,
                                      int angular_order) {
  const AlgebraKind kind = center.kind();
  const int n = kind.dim();
  const ConeTransform g = transform_to(center);
  const SphereRule sph = sphere_rule(n, angular_order);
  const GaussRule& gl = gauss_legendre(order);
  const double h = radius / radial_cells;
  std::vector<WeightedPoint> out;
  out.reserve(static_cast<std::size_t>(radial_cells * order) * sph.weights.size());
  for (int c = 0; c < radial_cells; ++c)
    for (int q = 0; q < order; ++q) {
      const double rho = c * h + 0.5 * h * (gl.nodes[q] + 1.0);
      const double wr = 0.5 * h * gl.weights[q] * std::pow(rho, n - 1);
      for (std::size_t a = 0; a < sph.weights.size(); ++a) {
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) u[i] = rho * sph.directions[a][static_cast<std::size_t>(i)];
        const Element eta = from_orthonormal(kind, u);
        out.push_back({g.apply(exp(eta)), wr * sph.weights[a] * exp_chart_density(eta)});
      }
    }
  return out;
}

Eigen::VectorXd random_unit_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = nd(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

Element random_ball_point(const Element& center, double radius, std::mt19937_64& rng) {
  const int n = center.kind().dim();
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const Eigen::VectorXd dir = random_unit_vector(n, rng);
  const double rho = radius * std::pow(ud(rng), 1.0 / n);
  return ball_point(center, rho * dir);
}

double minor_ratio_constant(const AlgebraKind& kind, double delta, double spread, int samples,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Element e = Element::identity(kind);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Element xi = random_ball_point(e, spread, rng);
    const Element xj = random_ball_point(xi, delta, rng);
    const double d = invariant_distance(xi, xj);
    if (d <= 0.0) continue;
    const Eigen::VectorXd a = minors(xi), b = minors(xj);
    for (int k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(std::log(a[k] / b[k])) / d);
  }
  return worst;
}

double inclusion_gamma(const AlgebraKind& kind, double delta, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Element e = Element::identity(kind);
  std::vector<Element> ys;
  ys.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) ys.push_back(random_ball_point(e, delta, rng));
  auto ok = [&](double gamma) {
    return std::all_of(ys.begin(), ys.end(), [&](const Element& y) { return contains(y - e * gamma); });
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace symcone
