#include "symcone/spaces.hpp"

#include "symcone/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace symcone {

namespace {

bool is_inf(double p) { return std::isinf(p); }

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw DomainError(std::string(what) + " must be >= 1");
}

// F(z) without allocation of per-call exponent vectors.
class Evaluator {
 public:
  explicit Evaluator(const AtomCombo& F)
      : F_(F), sigma_(F.ks.s.plus(F.kind().n_over_r()).scaled(-1.0)) {}

  cplx operator()(const TubePoint& z) const {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < F_.centers.size(); ++m)
      acc += F_.coeffs[m] * std::exp(log_complex_power(difference_point(z, F_.centers[m]), sigma_.values()));
    return F_.ks.d_s * acc;
  }

 private:
  const AtomCombo& F_;
  SpectralParam sigma_;
};

CellRule x_rule(int n, double half, const QuadratureConfig& cfg, int order) {
  CellRule rule;
  rule.dim = n;
  rule.lo.assign(static_cast<std::size_t>(n), -half);
  rule.hi.assign(static_cast<std::size_t>(n), half);
  rule.cells = cfg.resolution;
  rule.order = order;
  rule.permutation_seed = cfg.permutation_seed;
  return rule;
}

// Integrand over x-rule coordinates: the point x and the Jacobian to trace measure.
struct XMap {
  bool stretched;
  double volume_factor;
  double operator()(std::span<const double> u, Eigen::VectorXd& x) const {
    double jac = volume_factor;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (stretched) {
        x[static_cast<Eigen::Index>(i)] = std::sinh(u[i]);
        jac *= std::cosh(u[i]);
      } else {
        x[static_cast<Eigen::Index>(i)] = u[i];
      }
    }
    return jac;
  }
};

struct SlicePower {
  double inner = 0.0;  // ∫ over the base box, or sup for p = ∞
  double total = 0.0;  // including the doubling shells
};

// ∫|F(x+iy)|^p dx (or the node supremum when p = ∞) over the base box and its
// cfg.refine_depth doublings.
SlicePower slice_power(const Evaluator& F, const AlgebraKind& kind, const Element& y, double p,
                       const QuadratureConfig& cfg, int order) {
  const int n = kind.dim();
  const XMap map{cfg.domain == Domain::full, coefficient_volume_factor(kind)};
  Eigen::VectorXd x(n);
  double sup = 0.0;
  auto f = [&](std::span<const double> u) {
    const double jac = map(u, x);
    const double a = std::abs(F(TubePoint(x, y)));
    if (is_inf(p)) {
      sup = std::max(sup, a);
      return 0.0;
    }
    return jac * std::pow(a, p);
  };
  CellRule rule = x_rule(n, cfg.x_half_width, cfg, order);
  SlicePower out;
  out.inner = integrate_cells(rule, f);
  if (is_inf(p)) out.inner = sup;
  out.total = out.inner;
  CellRule cur = rule;
  for (int d = 0; d < cfg.refine_depth; ++d) {
    CellRule shell = shell_rule(cur);
    const double s = integrate_cells(shell, f);
    out.total = is_inf(p) ? sup : out.total + s;
    shell.skip = nullptr;
    cur = shell;
  }
  return out;
}

double root(double v, double p) { return is_inf(p) ? v : std::pow(std::max(v, 0.0), 1.0 / p); }

// Exact ∫|F(x+iy)|² dx by the Plancherel reduction.
double plancherel_slice(const AtomCombo& F, const Element& y) {
  const SpectralParam tau = F.ks.s.plus(F.kind().n_over_r());
  cplx acc = 0.0;
  for (std::size_t a = 0; a < F.size(); ++a)
    for (std::size_t b = 0; b < F.size(); ++b)
      acc += F.coeffs[a] * std::conj(F.coeffs[b]) *
             kernel_product_x_integral(F.centers[a], tau, F.centers[b], tau, y);
  return std::max(0.0, F.ks.d_s * F.ks.d_s * acc.real());
}

bool use_plancherel(double p, const QuadratureConfig& cfg) { return p == 2.0 && cfg.domain == Domain::full; }

// q-th power of the slice norm as used inside y-integrals.
double slice_q(const AtomCombo& F, const Evaluator& ev, const Element& y, double p, double q,
               const QuadratureConfig& cfg, int order) {
  if (use_plancherel(p, cfg)) return std::pow(plancherel_slice(F, y), q / 2.0);
  const SlicePower sp = slice_power(ev, F.kind(), y, p, cfg, order);
  const double v = cfg.domain == Domain::full ? sp.total : sp.inner;
  return is_inf(p) ? std::pow(v, q) : std::pow(std::max(v, 0.0), q / p);
}

// Σ_v w_v f(v) over the d_Ω-ball of the given radius around e.
double ball_sum(const AlgebraKind& kind, double radius, int cells, int order,
                const std::function<double(const Element&)>& f) {
  std::vector<double> terms;
  for (const WeightedPoint& wp : ball_nodes(Element::identity(kind), radius, cells, order, order))
    terms.push_back(wp.weight * f(wp.y));
  return pairwise_sum(std::span<const double>(terms));
}

NormResult from_power(double I, double err, double trunc, double q) {
  NormResult r;
  r.value = std::pow(std::max(I, 0.0), 1.0 / q);
  if (I > 0.0) {
    r.error_estimate = r.value * err / (q * I);
    r.truncation_estimate = r.value * trunc / (q * I);
  }
  return r;
}

}  // namespace

AtomCombo AtomCombo::scaled(cplx a) const {
  AtomCombo out = *this;
  for (cplx& c : out.coeffs) c *= a;
  return out;
}

AtomCombo AtomCombo::operator+(const AtomCombo& o) const {
  if (!(kind() == o.kind())) throw DimensionError("atom combos of different kinds");
  for (std::size_t k = 0; k < ks.s.size(); ++k)
    if (ks.s[k] != o.ks.s[k]) throw DomainError("atom combos with different atom parameters");
  if (ks.d_s != o.ks.d_s) throw DomainError("atom combos with different kernel constants");
  AtomCombo out = *this;
  out.centers.insert(out.centers.end(), o.centers.begin(), o.centers.end());
  out.coeffs.insert(out.coeffs.end(), o.coeffs.begin(), o.coeffs.end());
  return out;
}

SpectralParam default_atom_parameter(const SpectralParam& s) { return s.plus(s.kind().n_over_r() + 2.0); }

cplx eval(const AtomCombo& F, const TubePoint& z) {
  if (F.size() == 0) return 0.0;
  return Evaluator(F)(z);
}

NormResult slice_norm(const AtomCombo& F, const Element& y, double p, const QuadratureConfig& cfg) {
  cfg.validate();
  check_exponent(p, "p");
  if (!contains(y)) throw DomainError("slice_norm: y is not in the cone");
  if (F.size() == 0) return {};
  if (use_plancherel(p, cfg)) return {std::sqrt(plancherel_slice(F, y)), 0.0, 0.0};

  const Evaluator ev(F);
  const SlicePower hi = slice_power(ev, F.kind(), y, p, cfg, cfg.order);
  QuadratureConfig base = cfg;
  base.refine_depth = 0;
  const SlicePower lo = slice_power(ev, F.kind(), y, p, base, cfg.order - 1);

  NormResult r;
  const double inner = root(hi.inner, p);
  const double total = root(hi.total, p);
  r.value = cfg.domain == Domain::full ? total : inner;
  r.error_estimate = std::abs(inner - root(lo.inner, p));
  r.truncation_estimate = std::abs(total - inner);
  if (cfg.domain == Domain::full && cfg.refine_depth > 0 && !is_inf(p) &&
      r.truncation_estimate > std::max(cfg.tolerance, 1e-3) * r.value && r.truncation_estimate > 0.5 * r.value)
    throw ConvergenceError("slice_norm: x-tail does not decay within half-width " +
                           std::to_string(cfg.x_half_width));
  return r;
}

NormResult mixed_norm(const AtomCombo& F, double p, double q, const SpectralParam& s, const QuadratureConfig& cfg) {
  cfg.validate();
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (is_inf(q)) throw DomainError("mixed_norm: q must be finite");
  if (!s.bergman_ok()) throw DomainError("mixed_norm: s is outside the Bergman range");
  if (F.size() == 0) return {};
  const Evaluator ev(F);
  const AlgebraKind& kind = F.kind();

  if (cfg.domain == Domain::full) {
    auto integrand = [&](const ChartNode& node) {
      const double w = std::exp(power_from_log_minors<double>(
          std::span<const double>(node.log_minors.data(), static_cast<std::size_t>(node.log_minors.size())),
          s.values()));
      return w * slice_q(F, ev, node.y, p, q, cfg, cfg.order);
    };
    try {
      const QuadResult I = integrate_chart_box(kind, integrand, cfg);
      return from_power(I.value, I.error_estimate, I.truncation_estimate, q);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string("mixed_norm: ") + e.what());
    }
  }

  auto region = [&](double radius, int cells, int order) {
    return ball_sum(kind, radius, cells, order, [&](const Element& y) {
      return power_delta(y, s.values()) * slice_q(F, ev, y, p, q, cfg, order);
    });
  };
  const double I = region(cfg.omega_radius, cfg.resolution, cfg.order);
  const double I_low = region(cfg.omega_radius, cfg.resolution, cfg.order - 1);
  double trunc = 0.0;
  if (cfg.refine_depth > 0) trunc = std::abs(region(2.0 * cfg.omega_radius, 2 * cfg.resolution, cfg.order) - I);
  return from_power(I, std::abs(I - I_low), trunc, q);
}

PairingResult dual_pairing(const AtomCombo& F, const AtomCombo& G, const SpectralParam& s,
                           const QuadratureConfig& cfg) {
  cfg.validate();
  if (!s.bergman_ok()) throw DomainError("dual_pairing: s is outside the Bergman range");
  if (!(F.kind() == G.kind())) throw DimensionError("dual_pairing: kinds differ");
  PairingResult out{0.0};
  if (F.size() == 0 || G.size() == 0) return out;
  const AlgebraKind& kind = F.kind();
  const double nr = kind.n_over_r();

  if (cfg.domain == Domain::full) {
    const SpectralParam ta = F.ks.s.plus(nr), tb = G.ks.s.plus(nr);
    auto x_integral = [&](const Element& y) {
      cplx acc = 0.0;
      for (std::size_t a = 0; a < F.size(); ++a)
        for (std::size_t b = 0; b < G.size(); ++b)
          acc += F.coeffs[a] * std::conj(G.coeffs[b]) * kernel_product_x_integral(F.centers[a], ta, G.centers[b], tb, y);
      return F.ks.d_s * G.ks.d_s * acc;
    };
    auto part = [&](bool imag) {
      return integrate_chart_box(
          kind,
          [&](const ChartNode& node) {
            const double w = std::exp(power_from_log_minors<double>(
                std::span<const double>(node.log_minors.data(), static_cast<std::size_t>(node.log_minors.size())),
                s.values()));
            const cplx v = x_integral(node.y);
            return w * (imag ? v.imag() : v.real());
          },
          cfg);
    };
    const QuadResult re = part(false), im = part(true);
    out.value = cplx(re.value, im.value);
    out.error_estimate = std::hypot(re.error_estimate, im.error_estimate);
    out.truncation_estimate = std::hypot(re.truncation_estimate, im.truncation_estimate);
    return out;
  }

  const Evaluator ef(F), eg(G);
  const int n = kind.dim();
  const double vf = coefficient_volume_factor(kind);
  auto region = [&](int order, bool imag) {
    return ball_sum(kind, cfg.omega_radius, cfg.resolution, order, [&](const Element& y) {
      Eigen::VectorXd x(n);
      const double inner = integrate_cells(x_rule(n, cfg.x_half_width, cfg, order), [&](std::span<const double> u) {
        for (int i = 0; i < n; ++i) x[i] = u[static_cast<std::size_t>(i)];
        const TubePoint z(x, y);
        const cplx v = ef(z) * std::conj(eg(z));
        return vf * (imag ? v.imag() : v.real());
      });
      return power_delta(y, s.values()) * inner;
    });
  };
  out.value = cplx(region(cfg.order, false), region(cfg.order, true));
  const cplx low(region(cfg.order - 1, false), region(cfg.order - 1, true));
  out.error_estimate = std::abs(out.value - low);
  return out;
}

MeanValueReport mean_value_check(const AtomCombo& F, const TubePoint& z, double delta, double p,
                                 const QuadratureConfig& cfg) {
  cfg.validate();
  check_exponent(p, "p");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("mean_value_check: delta must lie in (0, 1)");
  MeanValueReport rep;
  if (F.size() == 0) return rep;
  const AlgebraKind& kind = F.kind();
  const int n = kind.dim();
  const double nr = kind.n_over_r();
  const Evaluator ev(F);
  rep.lhs = std::pow(std::abs(ev(z)), p);

  // ξ-ball in g_y-coordinates of the x-offset: radial Gauss–Legendre × sphere rule.
  const GaussRule& gl = gauss_legendre(cfg.order);
  const SphereRule sph = sphere_rule(n, cfg.order);
  const ConeTransform gy = transform_to(z.y);
  const double log_det_y = nr * std::log(determinant(z.y));
  const double hcell = delta / cfg.resolution;

  std::vector<double> terms;
  for (const WeightedPoint& wv : ball_nodes(z.y, delta, cfg.resolution, cfg.order, cfg.order)) {
    const ConeTransform gv = transform_to(wv.y);
    const double dv_weight = wv.weight * std::exp(log_det_y - nr * std::log(determinant(wv.y)));
    for (int c = 0; c < cfg.resolution; ++c)
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double r = hcell * (c + 0.5 * (gl.nodes[q] + 1.0));
        const double wr = 0.5 * hcell * gl.weights[q] * std::pow(r, n - 1);
        for (std::size_t k = 0; k < sph.weights.size(); ++k) {
          Eigen::VectorXd xi(n);
          for (int i = 0; i < n; ++i) xi[i] = r * sph.directions[k][static_cast<std::size_t>(i)];
          const Eigen::VectorXd dx = gy.apply(from_orthonormal(kind, xi).coeffs());
          if (norm(Element(kind, gv.solve(dx))) >= delta) continue;
          terms.push_back(dv_weight * wr * sph.weights[k] * std::pow(std::abs(ev(TubePoint(z.x + dx, wv.y))), p));
        }
      }
  }
  rep.rhs = std::pow(delta, -2.0 * n) * pairwise_sum(std::span<const double>(terms));
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

MeanValueReport slice_growth_check(const AtomCombo& F, const Element& y, double delta, double p, double q,
                                   const QuadratureConfig& cfg) {
  cfg.validate();
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("slice_growth_check: delta must lie in (0, 1)");
  MeanValueReport rep;
  if (F.size() == 0) return rep;
  const Evaluator ev(F);
  rep.lhs = slice_q(F, ev, y, p, q, cfg, cfg.order);
  std::vector<double> terms;
  for (const WeightedPoint& wv : ball_nodes(y, delta, cfg.resolution, cfg.order, cfg.order))
    terms.push_back(wv.weight * slice_q(F, ev, wv.y, p, q, cfg, cfg.order));
  rep.rhs = pairwise_sum(std::span<const double>(terms));
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

std::string atoms_to_json(const AtomCombo& F) {
  nlohmann::json j;
  j["kind"] = F.kind().name();
  j["t"] = std::vector<double>(F.ks.s.values().begin(), F.ks.s.values().end());
  j["d"] = F.ks.d_s;
  nlohmann::json centers = nlohmann::json::array();
  for (const TubePoint& w : F.centers) {
    nlohmann::json c;
    c["x"] = std::vector<double>(w.x.data(), w.x.data() + w.x.size());
    c["y"] = std::vector<double>(w.y.coeffs().data(), w.y.coeffs().data() + w.y.coeffs().size());
    centers.push_back(c);
  }
  j["centers"] = centers;
  nlohmann::json coeffs = nlohmann::json::array();
  for (const cplx& c : F.coeffs) coeffs.push_back({c.real(), c.imag()});
  j["coeffs"] = coeffs;
  return j.dump();
}

AtomCombo atoms_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const AlgebraKind kind = AlgebraKind::parse(j.at("kind").get<std::string>());
    const int n = kind.dim();
    const SpectralParam t(kind, j.at("t").get<std::vector<double>>());
    AtomCombo F = AtomCombo::zero(KernelSpec::with_constant(t, j.at("d").get<double>()));
    auto vec = [n](const nlohmann::json& a) {
      const std::vector<double> v = a.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != n) throw DomainError("atom document: coordinate length mismatch");
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), n));
    };
    for (const auto& c : j.at("centers")) F.centers.emplace_back(vec(c.at("x")), Element(kind, vec(c.at("y"))));
    for (const auto& c : j.at("coeffs")) F.coeffs.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    if (F.coeffs.size() != F.centers.size()) throw DomainError("atom document: centers/coeffs mismatch");
    return F;
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("atom document: ") + ex.what());
  }
}

}  // namespace symcone
