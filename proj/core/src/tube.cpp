#include "symcone/tube.hpp"

#include "symcone/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace symcone {

TubePoint::TubePoint(Eigen::VectorXd x_, Element y_, double margin) : x(std::move(x_)), y(std::move(y_)) {
  if (x.size() != y.kind().dim()) throw DimensionError("tube point: x has the wrong length");
  const Eigen::VectorXd d = minors(y);
  for (int k = 0; k < d.size(); ++k)
    if (!(d[k] > margin)) throw DomainError("tube point: imaginary part is not in the cone");
}

TubePoint TubePoint::base(const AlgebraKind& kind) {
  return {Eigen::VectorXd::Zero(kind.dim()), Element::identity(kind)};
}

TubePoint difference_point(const TubePoint& z, const TubePoint& w) {
  if (!(z.kind() == w.kind())) throw DimensionError("tube points of different kinds");
  return {z.x - w.x, z.y + w.y};
}

static Vec<cplx> zeta_coeffs(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double t) {
  Vec<cplx> c(y.size());
  for (int i = 0; i < y.size(); ++i) c[i] = cplx(y[i], -t * x[i]);
  return c;
}

Vec<cplx> complex_minors(const TubePoint& z) {
  return minors_of<cplx>(z.kind(), zeta_coeffs(z.x, z.y.coeffs(), 1.0));
}

std::vector<cplx> complex_minor_logs_by_continuation(const TubePoint& z) {
  const AlgebraKind& kind = z.kind();
  const int r = kind.rank();
  const Eigen::VectorXd base = minors(z.y);
  std::vector<cplx> logs(static_cast<std::size_t>(r));
  Vec<cplx> prev(r);
  for (int k = 0; k < r; ++k) {
    logs[k] = std::log(base[k]);
    prev[k] = base[k];
  }
  double t = 0.0, h = 0.125;
  const double max_arg = boost::math::constants::pi<double>() / 8.0;
  while (t < 1.0) {
    const double step = std::min(h, 1.0 - t);
    const Vec<cplx> cur = minors_of<cplx>(kind, zeta_coeffs(z.x, z.y.coeffs(), t + step));
    bool accept = true;
    for (int k = 0; k < r && accept; ++k) {
      if (std::abs(cur[k]) <= 1e-300) throw BranchError("complex minor vanishes on the continuation path");
      if (std::abs(std::arg(cur[k] / prev[k])) > max_arg) accept = false;
    }
    if (!accept) {
      h = 0.5 * step;
      if (h < 1e-10) throw BranchError("continuation step underflow: minor close to zero on the path");
      continue;
    }
    for (int k = 0; k < r; ++k) logs[k] += std::log(cur[k] / prev[k]);
    prev = cur;
    t += step;
    h = std::min(2.0 * step, 0.25);
  }
  // Recentre on the directly computed value to remove accumulated rounding.
  for (int k = 0; k < r; ++k) {
    const cplx direct = std::log(prev[k]);
    const double two_pi = 2.0 * boost::math::constants::pi<double>();
    const double wind = std::round((logs[k].imag() - direct.imag()) / two_pi);
    logs[k] = cplx(direct.real(), direct.imag() + wind * two_pi);
  }
  return logs;
}

std::vector<cplx> complex_minor_logs(const TubePoint& z) {
  const Vec<cplx> m = complex_minors(z);
  const int r = static_cast<int>(m.size());
  std::vector<cplx> logs(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    // arg Δ_k(y − ix) lies in (−kπ/2, kπ/2): the principal value is the
    // continuous one for k ≤ 2, and for k = 3 when the real part is positive.
    const int rank_k = k + 1;
    const bool principal = rank_k <= 2 || (rank_k == 3 && m[k].real() > 0.0);
    if (!principal) return complex_minor_logs_by_continuation(z);
    if (std::abs(m[k]) <= 1e-300) throw BranchError("complex minor vanishes");
    logs[k] = std::log(m[k]);
  }
  return logs;
}

cplx log_complex_power(const TubePoint& z, std::span<const double> sigma) {
  const std::vector<cplx> logs = complex_minor_logs(z);
  return power_from_log_minors<cplx>(logs, sigma);
}

KernelSpec KernelSpec::with_constant(const SpectralParam& s, double d) {
  if (!(d > 0.0)) throw DomainError("kernel constant must be positive");
  return {s, d, 0.0};
}

cplx bergman_kernel(const TubePoint& z, const TubePoint& w, const KernelSpec& ks) {
  const SpectralParam sigma = ks.s.plus(z.kind().n_over_r()).scaled(-1.0);
  return ks.d_s * std::exp(log_complex_power(difference_point(z, w), sigma.values()));
}

double bergman_diagonal(const TubePoint& z, const KernelSpec& ks) {
  const SpectralParam sigma = ks.s.plus(z.kind().n_over_r()).scaled(-1.0);
  return ks.d_s * power_delta(z.y * 2.0, sigma.values());
}

double log_plancherel_constant(const SpectralParam& tau_a, const SpectralParam& tau_b) {
  const AlgebraKind& kind = tau_a.kind();
  const ConeIndexData idx = index_data(kind);
  const double nr = kind.n_over_r();
  const double log_two_pi = std::log(2.0 * boost::math::constants::pi<double>());
  double acc = 0.5 * (idx.n + idx.r) * log_two_pi;
  for (int j = 0; j < idx.r; ++j) {
    const double ta = tau_a[static_cast<std::size_t>(j)] - idx.m_k[j] / 2.0;
    const double tb = tau_b[static_cast<std::size_t>(j)] - idx.m_k[j] / 2.0;
    const double tab = tau_a[static_cast<std::size_t>(j)] + tau_b[static_cast<std::size_t>(j)] - nr -
                       idx.m_k[j] / 2.0;
    if (!(ta > 0.0 && tb > 0.0 && tab > 0.0)) throw DomainError("Plancherel constant: exponent out of range");
    acc += std::lgamma(tab) - std::lgamma(ta) - std::lgamma(tb);
  }
  return acc;
}

cplx kernel_product_x_integral(const TubePoint& wa, const SpectralParam& tau_a, const TubePoint& wb,
                               const SpectralParam& tau_b, const Element& y) {
  const double nr = y.kind().n_over_r();
  const SpectralParam sigma = tau_a.plus(tau_b).plus(-nr).scaled(-1.0);
  const TubePoint Z(wb.x - wa.x, y * 2.0 + wa.y + wb.y);
  return std::exp(log_plancherel_constant(tau_a, tau_b) + log_complex_power(Z, sigma.values()));
}

QuadResult integrate_chart_box(const AlgebraKind& kind, const std::function<double(const ChartNode&)>& f,
                               const QuadratureConfig& cfg) {
  cfg.validate();
  const int r = kind.rank(), n = kind.dim();
  auto g = [&](std::span<const double> pt) -> double {
    std::vector<double> zeta(static_cast<std::size_t>(n - r));
    double log_w = 0.0;
    for (int i = r; i < n; ++i) {
      zeta[static_cast<std::size_t>(i - r)] = std::sinh(pt[static_cast<std::size_t>(i)]);
      log_w += std::log(std::cosh(pt[static_cast<std::size_t>(i)]));
    }
    const ChartNode node = chart_node(kind, pt.subspan(0, static_cast<std::size_t>(r)), zeta);
    // Chart images lie in Ω exactly; a DomainError here means the node (or a
    // point derived from it) left Ω in floating point at extreme coordinates.
    try {
      return std::exp(node.log_density + log_w) * f(node);
    } catch (const DomainError&) {
      return 0.0;
    }
  };
  CellRule rule;
  rule.dim = n;
  rule.lo.assign(static_cast<std::size_t>(n), -cfg.omega_radius);
  rule.hi.assign(static_cast<std::size_t>(n), cfg.omega_radius);
  rule.cells = cfg.resolution;
  rule.order = cfg.order;
  rule.permutation_seed = cfg.permutation_seed;

  QuadResult res;
  const double inner = integrate_cells(rule, g);
  CellRule low = rule;
  low.order = cfg.order - 1;
  res.error_estimate = std::abs(inner - integrate_cells(low, g));
  res.value = inner;
  double prev_shell = -1.0;
  CellRule cur = rule;
  for (int depth = 0; depth < cfg.refine_depth; ++depth) {
    CellRule shell = shell_rule(cur);
    const double s = integrate_cells(shell, g);
    res.value += s;
    res.truncation_estimate = std::abs(s);
    if (prev_shell >= 0.0 && std::abs(s) >= prev_shell && std::abs(s) > cfg.tolerance * std::abs(res.value))
      throw ConvergenceError("chart integral: tail does not decay beyond half-width " +
                             std::to_string(shell.hi[0] / 2.0));
    prev_shell = std::abs(s);
    shell.skip = nullptr;
    cur = shell;
  }
  return res;
}

KernelSpec calibrate_kernel_constant(const SpectralParam& s, const QuadratureConfig& cfg, QuadResult* norm_report) {
  if (!s.bergman_ok()) throw DomainError("calibrate_kernel_constant: s is outside the Bergman range");
  const AlgebraKind kind = s.kind();
  const double nr = kind.n_over_r();
  const SpectralParam tau = s.plus(nr);
  const SpectralParam two_tau = tau.scaled(2.0).plus(-nr);
  const double log_c = log_plancherel_constant(tau, tau);
  const Element e = Element::identity(kind);
  const int r = kind.rank();

  auto integrand = [&](const ChartNode& node) {
    const double lp = power_from_log_minors<double>(
        std::span<const double>(node.log_minors.data(), static_cast<std::size_t>(r)), s.values());
    const Element shifted = (node.y + e) * 2.0;
    const SpectralParam neg = two_tau.scaled(-1.0);
    return std::exp(log_c + log_power_delta(shifted, neg.values()) + lp);
  };
  const QuadResult norm = integrate_chart_box(kind, integrand, cfg);
  if (norm_report) *norm_report = norm;

  const SpectralParam neg_tau = tau.scaled(-1.0);
  const double k_ee = power_delta(e * 2.0, neg_tau.values());
  KernelSpec ks{s, k_ee / norm.value, 0.0};

  // Reproducing identity at a second point: <B(·,z1), B(·,ie)> = B(ie, z1).
  Eigen::VectorXd x1 = 0.3 * e.coeffs();
  x1[kind.dim() - 1] += 0.2;
  const TubePoint z1(x1, e * 1.5);
  const TubePoint z0 = TubePoint::base(kind);
  auto cross = [&](const ChartNode& node) {
    const double lp = power_from_log_minors<double>(
        std::span<const double>(node.log_minors.data(), static_cast<std::size_t>(r)), s.values());
    return (kernel_product_x_integral(z1, tau, z0, tau, node.y) * std::exp(lp)).real();
  };
  const double lhs = ks.d_s * ks.d_s * integrate_chart_box(kind, cross, cfg).value;
  const cplx rhs = bergman_kernel(z0, z1, ks);
  ks.calibration_error = std::abs(lhs - rhs.real()) / std::abs(rhs);
  return ks;
}

Eigen::MatrixXd bergman_metric(const TubePoint& z) {
  const AlgebraKind& kind = z.kind();
  const Eigen::MatrixXd P = quadratic_matrix(inverse(z.y));
  const double scale = kind.dim() / (2.0 * kind.rank());
  return scale * trace_gram_diagonal(kind).asDiagonal() * P;
}

double bergman_segment_length(const TubePoint& z1, const TubePoint& z2, int nodes) {
  const GaussRule& g = gauss_legendre(nodes);
  const Eigen::VectorXd dx = z2.x - z1.x;
  const Eigen::VectorXd dy = z2.y.coeffs() - z1.y.coeffs();
  double len = 0.0;
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    const double t = 0.5 * (g.nodes[q] + 1.0);
    const TubePoint zt(z1.x + t * dx, Element(z1.kind(), z1.y.coeffs() + t * dy));
    const Eigen::MatrixXd G = bergman_metric(zt);
    const double h = dx.dot(G * dx) + dy.dot(G * dy);
    len += 0.5 * g.weights[q] * std::sqrt(std::max(h, 0.0));
  }
  return len;
}

double quasi_distance(const TubePoint& z1, const TubePoint& z2) {
  if (!(z1.kind() == z2.kind())) throw DimensionError("quasi_distance: kinds differ");
  const Eigen::VectorXd dx = z1.x - z2.x;
  const double a = norm(Element(z1.kind(), transform_to(z1.y).solve(dx)));
  const double b = norm(Element(z1.kind(), transform_to(z2.y).solve(dx)));
  return std::max({a, b, invariant_distance(z1.y, z2.y)});
}

}  // namespace symcone
