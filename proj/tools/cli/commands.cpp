#include "commands.hpp"

#include <symcone/atoms.hpp>
#include <symcone/errors.hpp>
#include <symcone/lattice.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace symcone::cli {

namespace {

using ojson = nlohmann::ordered_json;

/// Neutral remark for parameters outside every implemented criterion.
constexpr const char* kOutsideNote =
    "parameters lie outside the windows covered by the implemented criteria; "
    "this report makes no claim about boundedness or interpolation identities there";

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << content;
  if (!f) throw ConfigError("failed writing output file '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ojson header(const ResolvedConfig& cfg) {
  ojson j;
  j["command"] = cfg.raw.command;
  j["config_hash"] = cfg.hash;
  j["seed"] = cfg.raw.seed;
  ojson c = ojson::object();
  for (const auto& [k, v] : canonical_entries(cfg.raw)) c[k] = v;
  j["config"] = c;
  return j;
}

std::string csv_header(const ResolvedConfig& cfg) {
  std::string h = "# symcone " + cfg.raw.command + "\n# config_hash=" + cfg.hash +
                  "\n# seed=" + std::to_string(cfg.raw.seed) + "\n";
  for (const auto& [k, v] : canonical_entries(cfg.raw)) h += "# " + k + "=" + v + "\n";
  return h;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

TubeLattice make_lattice(const ResolvedConfig& cfg, double delta) {
  LatticeBuildOptions opt;
  opt.seed = cfg.raw.seed;
  const ConeLattice cone = build_cone_lattice(cfg.kind, delta, cfg.raw.radius, opt);
  const double R = cfg.raw.r_policy == "fixed" ? cfg.raw.R : estimate_R(cfg.kind, cfg.raw.r_samples, cfg.raw.seed);
  return build_tube_lattice(cone, R, cfg.raw.xbox, opt);
}

ojson report_json(const WhitneyReport& r) {
  ojson j;
  j["passed"] = r.passed();
  j["delta"] = r.delta;
  j["R"] = r.R;
  j["cone_points"] = r.cone_points;
  j["tube_points"] = r.tube_points;
  j["samples"] = r.samples;
  j["cone_min_separation"] = r.cone_min_separation;
  j["cone_separation_violations"] = r.cone_separation_violations;
  j["cone_coverage_misses"] = r.cone_coverage_misses;
  j["max_overlap"] = r.max_overlap;
  j["overlap_samples"] = r.overlap_samples;
  j["x_separation_violations"] = r.x_separation_violations;
  j["x_coverage_misses"] = r.x_coverage_misses;
  j["x_max_overlap"] = r.x_max_overlap;
  j["coverage_misses"] = r.coverage_misses;
  j["inclusion_violations"] = r.inclusion_violations;
  j["gamma"] = r.gamma;
  j["measure_constant"] = r.measure_constant;
  j["measure_constant_spread"] = r.measure_constant_spread;
  j["N_measured"] = r.constants.N_measured;
  j["eta1"] = r.constants.eta1;
  j["eta2"] = r.constants.eta2;
  return j;
}

WeightMode weight_mode(const ResolvedConfig& cfg) {
  return cfg.raw.weight == "pairing" ? WeightMode::pairing : WeightMode::statement;
}

/// Fixed center (0.1·1, 1.1e); generic with respect to every lattice built here.
AtomCombo offlattice_target(const KernelSpec& ks) {
  const AlgebraKind& kind = ks.s.kind();
  const Element e = Element::identity(kind);
  return AtomCombo::atom(ks, TubePoint(Eigen::VectorXd::Constant(kind.dim(), 0.1), Element(kind, 1.1 * e.coeffs())));
}

double sup_residual(const AtomCombo& F, const AtomCombo& G, const std::vector<TubePoint>& pts) {
  double num = 0.0;
  double den = 0.0;
  for (const TubePoint& z : pts) {
    const cplx f = eval(F, z);
    num = std::max(num, std::abs(f - eval(G, z)));
    den = std::max(den, std::abs(f));
  }
  return den > 0.0 ? num / den : 0.0;
}

ojson window_json(const WindowReport& w) {
  ojson j;
  j["satisfied"] = w.satisfied;
  j["case"] = to_string(w.which);
  j["q_s"] = w.q_s.str();
  j["p_s"] = w.p_s.str();
  j["q_s_p"] = w.q_s_p.str();
  j["q_margin"] = to_string(w.q_margin);
  j["dd1_s_margin"] = to_string(w.dd1_s_margin);
  j["dd1_p_margin"] = to_string(w.dd1_p_margin);
  j["nt_s_margin"] = to_string(w.nt_s_margin);
  return j;
}

RationalParam param_or(const ResolvedConfig& cfg, const std::string& text, const RationalParam& fallback) {
  if (text.empty()) return fallback;
  std::vector<Rational> v;
  for (const std::string& item : split_list(text)) v.push_back(parse_rational(item));
  if (v.size() == 1 && cfg.kind.rank() > 1) v.assign(static_cast<std::size_t>(cfg.kind.rank()), v.front());
  if (static_cast<int>(v.size()) != cfg.kind.rank()) throw ConfigError("parameter list length does not match the rank");
  return {cfg.kind, std::move(v)};
}

}  // namespace

std::string sweep_path(const std::string& out, double delta, bool sweeping) {
  if (out.empty()) return out;
  const std::string tag = format_double(delta);
  if (const auto pos = out.find("{delta}"); pos != std::string::npos) return out.substr(0, pos) + tag + out.substr(pos + 7);
  if (!sweeping) return out;
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + "_d" + tag;
  return out.substr(0, dot) + "_d" + tag + out.substr(dot);
}

int cmd_lattice(const ResolvedConfig& cfg) {
  if (!cfg.raw.verify.empty()) {
    const std::string text = read_file(cfg.raw.verify);
    TubeLattice tl;
    try {
      tl = lattice_from_json(text);
    } catch (const std::exception& e) {
      std::cerr << "lattice verification failed: " << e.what() << "\n";
      return exit_verification;
    }
    const WhitneyReport rep = verify_whitney(tl, cfg.raw.samples, cfg.raw.seed);
    ojson j = header(cfg);
    j["report"] = report_json(rep);
    emit(cfg.raw.out, dump(j));
    return rep.passed() ? exit_ok : exit_verification;
  }

  int rc = exit_ok;
  const bool sweeping = cfg.deltas.size() > 1;
  for (double delta : cfg.deltas) {
    const TubeLattice tl = make_lattice(cfg, delta);
    const WhitneyReport rep = verify_whitney(tl, cfg.raw.samples, cfg.raw.seed);
    ojson j = header(cfg);
    j["report"] = report_json(rep);
    const ojson doc = ojson::parse(lattice_to_json(tl));
    for (const auto& [k, v] : doc.items()) j[k] = v;
    emit(sweep_path(cfg.raw.out, delta, sweeping), dump(j));
    if (!rep.passed()) rc = exit_verification;
  }
  return rc;
}

int cmd_laplace(const ResolvedConfig& cfg) {
  const SpectralParam s = cfg.s_double();
  Element y = Element::identity(cfg.kind);
  if (!cfg.raw.y.empty()) {
    const std::vector<std::string> items = split_list(cfg.raw.y);
    if (static_cast<int>(items.size()) != cfg.kind.dim())
      throw ConfigError("y needs " + std::to_string(cfg.kind.dim()) + " coefficients");
    Eigen::VectorXd c(cfg.kind.dim());
    for (std::size_t i = 0; i < items.size(); ++i) c[static_cast<Eigen::Index>(i)] = static_cast<double>(parse_rational(items[i]));
    y = Element(cfg.kind, c);
  }
  const double closed = laplace_power_closed(s, y);
  const QuadResult quad = laplace_power_quadrature(s, y, cfg.quad);
  ojson j = header(cfg);
  j["closed"] = closed;
  j["quadrature"] = quad.value;
  j["rel_err"] = std::abs(quad.value - closed) / std::abs(closed);
  j["error_estimate"] = quad.error_estimate;
  j["truncation_estimate"] = quad.truncation_estimate;
  emit(cfg.raw.out, dump(j));
  return exit_ok;
}

int cmd_sampling(const ResolvedConfig& cfg) {
  if (cfg.raw.family < 1) throw ConfigError("sampling needs a non-empty atom family");
  const SpectralParam s = cfg.s_double();
  const std::vector<AtomCombo> family = random_atom_family(s, cfg.raw.family, cfg.raw.spread, cfg.raw.seed);
  std::ostringstream os;
  os << csv_header(cfg) << "delta,family_id,ratio,coeff_norm,mixed_norm,band_min,band_max,band_spread\n";
  for (double delta : cfg.deltas) {
    const TubeLattice tl = make_lattice(cfg, delta);
    std::vector<SamplingRatio> rows;
    for (const AtomCombo& F : family) rows.push_back(sampling_ratio(F, tl, cfg.p_double(), cfg.q_double(), s, cfg.quad));
    double lo = rows.front().ratio;
    double hi = lo;
    for (const SamplingRatio& r : rows) {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    for (std::size_t m = 0; m < rows.size(); ++m)
      os << format_double(delta) << ',' << m << ',' << format_double(rows[m].ratio) << ','
         << format_double(rows[m].coeff_norm) << ',' << format_double(rows[m].norm.value) << ',' << format_double(lo)
         << ',' << format_double(hi) << ',' << format_double(hi / lo) << '\n';
  }
  emit(cfg.raw.out, os.str());
  return exit_ok;
}

int cmd_reconstruct(const ResolvedConfig& cfg) {
  const SpectralParam s = cfg.s_double();
  const KernelSpec ks = calibrate_kernel_constant(s, cfg.quad);
  const WeightMode wm = weight_mode(cfg);
  const double p = cfg.p_double();
  const double q = cfg.q_double();
  std::ostringstream os;
  os << csv_header(cfg) << "delta,mode,iter,residual,sup_residual,relaxation_c,condition_number,diverged\n";
  for (double delta : cfg.deltas) {
    const TubeLattice tl = make_lattice(cfg, delta);
    AtomCombo F = AtomCombo::zero(ks);
    if (cfg.raw.target == "manufactured") {
      F = manufactured_target(tl, ks, wm, p, q, cfg.raw.interior, cfg.raw.seed).F;
    } else if (cfg.raw.target == "offlattice") {
      F = offlattice_target(ks);
    }
    const std::vector<TubePoint> validation = interior_points(tl, cfg.raw.validation, cfg.raw.interior, cfg.raw.seed + 1);
    const std::string d = format_double(delta);
    if (cfg.raw.mode == "neumann") {
      const NeumannResult r = reconstruct_neumann(F, tl, ks, cfg.raw.iters, wm, validation, p, q, std::nullopt, cfg.raw.seed);
      for (std::size_t k = 0; k < r.residuals.size(); ++k)
        os << d << ",neumann," << k + 1 << ',' << format_double(r.residuals[k]) << ',' << format_double(r.residuals[k])
           << ',' << format_double(r.relaxation.c) << ",," << (r.diverged ? 1 : 0) << '\n';
    } else {
      const std::vector<TubePoint> colloc = region_points(tl, static_cast<int>(2 * tl.size()), cfg.raw.seed + 2);
      const LsqResult r = reconstruct_lsq(F, tl, ks, wm, colloc, p, q);
      const double sup = sup_residual(F, synthesis(r.lambda, tl, ks, wm, p, q), validation);
      os << d << ",lsq,1," << format_double(r.residual) << ',' << format_double(sup) << ",,"
         << format_double(r.condition_number) << ",0\n";
    }
  }
  emit(cfg.raw.out, os.str());
  return exit_ok;
}

int cmd_params(const ResolvedConfig& cfg) {
  const RationalIndexData d = rational_index_data(cfg.kind);
  std::vector<Rational> tdef;
  for (const Rational& v : cfg.s.s) tdef.push_back(v + d.n_over_r + 2);
  const RationalParam t = param_or(cfg, cfg.raw.t, RationalParam(cfg.kind, tdef));

  ojson j = header(cfg);
  j["cone"] = cfg.kind.name();
  j["s"] = cfg.s.str();
  j["p"] = cfg.p.str();
  j["q"] = to_string(cfg.q);
  const WindowReport w = thm11_window(cfg.p, cfg.q, cfg.s);
  j["projector_window"] = window_json(w);

  const PositiveWindow pw = thm45_window(cfg.s, t, cfg.q);
  ojson pj;
  pj["t"] = t.str();
  pj["lower"] = pw.lower.str();
  pj["upper"] = pw.upper.str();
  pj["t_ok"] = pw.t_ok;
  pj["satisfied"] = pw.satisfied;
  j["positive_operator_window"] = pj;

  bool outside = !w.satisfied;
  std::optional<Rational> theta;
  std::optional<Rational> phi;
  if (!cfg.raw.theta.empty()) theta = parse_rational(cfg.raw.theta);
  if (!cfg.raw.phi.empty()) phi = parse_rational(cfg.raw.phi);
  if (theta && phi) {
    const WolffParams wf = wolff(*theta, *phi);
    j["wolff"] = {{"theta", to_string(*theta)}, {"phi", to_string(*phi)}, {"xi", to_string(wf.xi)}, {"psi", to_string(wf.psi)}};
  }
  const bool endpoints = !cfg.raw.p0.empty() && !cfg.raw.q0.empty() && !cfg.raw.p1.empty() && !cfg.raw.q1.empty();
  if (endpoints) {
    const ExtReal p0 = ExtReal::parse(cfg.raw.p0);
    const ExtReal p1 = ExtReal::parse(cfg.raw.p1);
    const Rational q0 = parse_rational(cfg.raw.q0);
    const Rational q1 = parse_rational(cfg.raw.q1);
    if (theta) {
      const MixedParams m = interpolate(*theta, MixedParams(p0, q0, cfg.s), MixedParams(p1, q1, cfg.s));
      j["interpolation"] = {{"theta", to_string(*theta)}, {"p", m.p.str()}, {"q", to_string(m.q)}, {"s", m.s.str()}};
    }
    if (phi) {
      const ReiterationReport r = thm46_solve(cfg.s, p0, q0, p1, q1, theta, *phi);
      ojson rj;
      rj["admissible"] = r.admissible;
      rj["pre_ok"] = r.pre_ok;
      rj["balance_ok"] = r.balance_ok;
      rj["phi_bound_ok"] = r.phi_bound_ok;
      rj["p1_window_known"] = r.p1_window_known;
      rj["theta"] = to_string(r.theta);
      rj["phi"] = to_string(r.phi);
      rj["balance_residual"] = to_string(r.balance_residual);
      rj["phi_bound"] = r.phi_bound.str();
      rj["q_s"] = r.q_s.str();
      if (r.pre_ok) {
        rj["xi"] = to_string(r.wolff.xi);
        rj["psi"] = to_string(r.wolff.psi);
        rj["p2"] = r.p2.str();
        rj["q2"] = to_string(r.q2);
        rj["p3"] = r.p3.str();
        rj["q3"] = r.q3.str();
      }
      j["reiteration"] = rj;
      outside = outside || !r.admissible;
    }
  }
  if (outside) j["note"] = kOutsideNote;
  emit(cfg.raw.out, dump(j));
  return exit_ok;
}

int run(const RunConfig& raw, std::ostream& err) {
  try {
    const ResolvedConfig cfg(raw);
    if (raw.command == "lattice") return cmd_lattice(cfg);
    if (raw.command == "laplace") return cmd_laplace(cfg);
    if (raw.command == "sampling") return cmd_sampling(cfg);
    if (raw.command == "reconstruct") return cmd_reconstruct(cfg);
    if (raw.command == "params") return cmd_params(cfg);
    throw ConfigError("unknown command '" + raw.command + "'");
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return exit_invalid;
  } catch (const DomainError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return exit_invalid;
  } catch (const DimensionError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return exit_invalid;
  } catch (const ConvergenceError& e) {
    err << "quadrature did not converge: " << e.what() << "\n";
    return exit_quadrature;
  } catch (const BranchError& e) {
    err << "kernel branch failure: " << e.what() << "\n";
    return exit_quadrature;
  }
}

}  // namespace symcone::cli
