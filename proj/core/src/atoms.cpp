#include "symcone/atoms.hpp"

#include "symcone/errors.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace symcone {

namespace {

std::vector<double> site_weights(const TubeLattice& tl, const SpectralParam& s, WeightMode wm, double p, double q) {
  std::vector<double> per_j;
  for (const Element& y : tl.cone.points) per_j.push_back(atom_weight(y, s, wm, p, q));
  std::vector<double> w;
  for (const LatticeSite& site : lattice_sites(tl)) w.push_back(per_j[site.j]);
  return w;
}

std::vector<TubePoint> site_points(const TubeLattice& tl) {
  std::vector<TubePoint> pts;
  for (const LatticeSite& site : lattice_sites(tl)) pts.push_back(tl.point(site.l, site.j));
  return pts;
}

Eigen::MatrixXcd kernel_matrix(const std::vector<TubePoint>& rows, const std::vector<TubePoint>& cols,
                               const KernelSpec& ks) {
  Eigen::MatrixXcd B(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      B(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = bergman_kernel(rows[a], cols[b], ks);
  return B;
}

Eigen::VectorXcd values_at(const AtomCombo& F, const std::vector<TubePoint>& pts) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) v[static_cast<Eigen::Index>(i)] = eval(F, pts[i]);
  return v;
}

}  // namespace

CoeffArray CoeffArray::zeros(const TubeLattice& tl) {
  CoeffArray c;
  for (const auto& g : tl.xgrids) c.values.emplace_back(g.size(), cplx(0.0));
  return c;
}

CoeffArray CoeffArray::from_flat(const TubeLattice& tl, const Eigen::VectorXcd& v) {
  if (static_cast<std::size_t>(v.size()) != tl.size()) throw DimensionError("coefficient vector does not match lattice");
  CoeffArray c = zeros(tl);
  Eigen::Index k = 0;
  for (auto& row : c.values)
    for (cplx& x : row) x = v[k++];
  return c;
}

Eigen::VectorXcd CoeffArray::flat() const {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(size()));
  Eigen::Index k = 0;
  for (const auto& row : values)
    for (const cplx& x : row) v[k++] = x;
  return v;
}

std::size_t CoeffArray::size() const {
  std::size_t n = 0;
  for (const auto& row : values) n += row.size();
  return n;
}

bool CoeffArray::matches(const TubeLattice& tl) const {
  if (values.size() != tl.xgrids.size()) return false;
  for (std::size_t j = 0; j < values.size(); ++j)
    if (values[j].size() != tl.xgrids[j].size()) return false;
  return true;
}

double atom_weight(const Element& y, const SpectralParam& s, WeightMode wm, double p, double q) {
  const double nr = y.kind().n_over_r();
  const double shift = wm == WeightMode::pairing ? nr : (std::isinf(p) ? 0.0 : nr * q / p);
  const SpectralParam e = s.plus(shift);
  return power_delta(y, e.values());
}

CoeffArray analysis(const AtomCombo& F, const TubeLattice& tl) {
  CoeffArray c = CoeffArray::zeros(tl);
  for (std::size_t j = 0; j < tl.xgrids.size(); ++j)
    for (std::size_t l = 0; l < tl.xgrids[j].size(); ++l) c.values[j][l] = eval(F, tl.point(l, j));
  return c;
}

double coeff_norm(const CoeffArray& lambda, const TubeLattice& tl, double p, double q, const SpectralParam& s) {
  if (!lambda.matches(tl)) throw DimensionError("coefficient array does not match lattice");
  if (!(p >= 1.0 && q >= 1.0) || std::isinf(q)) throw DomainError("coeff_norm: need 1 <= p and 1 <= q < inf");
  std::vector<double> terms;
  for (std::size_t j = 0; j < lambda.values.size(); ++j) {
    double inner = 0.0;
    if (std::isinf(p)) {
      for (const cplx& v : lambda.values[j]) inner = std::max(inner, std::abs(v));
      inner = std::pow(inner, q);
    } else {
      std::vector<double> row;
      for (const cplx& v : lambda.values[j]) row.push_back(std::pow(std::abs(v), p));
      inner = std::pow(pairwise_sum(std::span<const double>(row)), q / p);
    }
    terms.push_back(inner * atom_weight(tl.cone.points[j], s, WeightMode::statement, p, q));
  }
  return std::pow(pairwise_sum(std::span<const double>(terms)), 1.0 / q);
}

SamplingRatio sampling_ratio(const AtomCombo& F, const TubeLattice& tl, double p, double q, const SpectralParam& s,
                             const QuadratureConfig& cfg) {
  SamplingRatio r;
  r.norm = mixed_norm(F, p, q, s, cfg);
  if (!(r.norm.value > 0.0)) throw DomainError("sampling_ratio: F has zero mixed norm");
  r.coeff_norm = coeff_norm(analysis(F, tl), tl, p, q, s);
  r.ratio = std::pow(r.coeff_norm / r.norm.value, q);
  return r;
}

AtomCombo synthesis(const CoeffArray& lambda, const TubeLattice& tl, const KernelSpec& ks, WeightMode wm, double p,
                    double q) {
  if (!lambda.matches(tl)) throw DimensionError("coefficient array does not match lattice");
  AtomCombo F = AtomCombo::zero(ks);
  for (std::size_t j = 0; j < tl.xgrids.size(); ++j) {
    const double w = atom_weight(tl.cone.points[j], ks.s, wm, p, q);
    for (std::size_t l = 0; l < tl.xgrids[j].size(); ++l) {
      if (lambda.values[j][l] == cplx(0.0)) continue;
      F.centers.push_back(tl.point(l, j));
      F.coeffs.push_back(lambda.values[j][l] * w);
    }
  }
  return F;
}

AtomCombo frame_apply(const AtomCombo& F, const TubeLattice& tl, const KernelSpec& ks, double c, WeightMode wm,
                      double p, double q) {
  if (!(c > 0.0)) throw DomainError("frame_apply: relaxation constant must be positive");
  return synthesis(analysis(F, tl), tl, ks, wm, p, q).scaled(c);
}

FrameSystem frame_system(const TubeLattice& tl, const KernelSpec& ks, WeightMode wm, double p, double q) {
  const std::vector<TubePoint> pts = site_points(tl);
  const std::vector<double> w = site_weights(tl, ks.s, wm, p, q);
  FrameSystem sys;
  const Eigen::Index M = static_cast<Eigen::Index>(pts.size());
  sys.K.resize(M, M);
  for (Eigen::Index a = 0; a < M; ++a) {
    sys.K(a, a) = bergman_diagonal(pts[static_cast<std::size_t>(a)], ks);
    for (Eigen::Index b = a + 1; b < M; ++b) {
      sys.K(a, b) = bergman_kernel(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)], ks);
      sys.K(b, a) = std::conj(sys.K(a, b));
    }
  }
  sys.w = Eigen::Map<const Eigen::VectorXd>(w.data(), M);
  return sys;
}

Relaxation calibrate_relaxation(const FrameSystem& sys, int steps, std::uint64_t seed, const Eigen::VectorXcd* values) {
  if (steps < 1) throw DomainError("calibrate_relaxation: steps must be >= 1");
  const Eigen::VectorXd sw = sys.w.cwiseSqrt();
  const Eigen::MatrixXcd A = sw.asDiagonal() * sys.K * sw.asDiagonal();
  const Eigen::Index M = A.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  auto random_vec = [&] {
    Eigen::VectorXcd v(M);
    for (Eigen::Index i = 0; i < M; ++i) v[i] = cplx(nd(rng), nd(rng));
    return v;
  };

  Relaxation r;
  Eigen::VectorXcd v = random_vec().normalized();
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXcd Av = A * v;
    const double mu = v.dot(Av).real();
    const double nrm = Av.norm();
    if (!(nrm > 0.0)) break;
    v = Av / nrm;
    if (std::abs(mu - r.mu_max) <= 1e-10 * std::abs(mu)) {
      r.mu_max = mu;
      break;
    }
    r.mu_max = mu;
  }
  r.mu_max = std::max(r.mu_max, (A * v).norm());
  if (!(r.mu_max > 0.0)) throw DomainError("calibrate_relaxation: degenerate frame system");

  // Probe in the range of A, so null directions do not mask contraction. With
  // lattice values g of a target, the probe is W^{1/2} g and the iteration is
  // exactly the Neumann recursion in the weighted norm.
  const bool use_values = values != nullptr && values->norm() > 0.0;
  const Eigen::VectorXcd probe =
      use_values ? Eigen::VectorXcd(sw.asDiagonal() * (*values)) : Eigen::VectorXcd(A * random_vec());
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 19; ++k) {
    const double theta = 0.1 * k;
    const double c = theta / r.mu_max;
    Eigen::VectorXcd e = probe;
    for (int s = 0; s < steps; ++s) e -= c * (A * e);
    const double factor = std::pow(e.norm() / probe.norm(), 1.0 / steps);
    if (factor < best) {
      best = factor;
      r.theta = theta;
      r.c = c;
      r.contraction = factor;
    }
  }
  return r;
}

NeumannResult reconstruct_neumann(const AtomCombo& F, const TubeLattice& tl, const KernelSpec& ks, int iters,
                                  WeightMode wm, const std::vector<TubePoint>& validation, double p, double q,
                                  std::optional<double> c, std::uint64_t seed) {
  if (iters < 1) throw DomainError("reconstruct_neumann: iters must be >= 1");
  if (validation.empty()) throw DomainError("reconstruct_neumann: empty validation set");
  const FrameSystem sys = frame_system(tl, ks, wm, p, q);
  const std::vector<TubePoint> pts = site_points(tl);
  Eigen::VectorXcd g = values_at(F, pts);
  NeumannResult out;
  if (c) {
    if (!(*c > 0.0)) throw DomainError("reconstruct_neumann: relaxation constant must be positive");
    out.relaxation.c = *c;
  } else {
    out.relaxation = calibrate_relaxation(sys, iters, seed, &g);
  }
  const double cc = out.relaxation.c;

  const Eigen::MatrixXcd V = kernel_matrix(validation, pts, ks) * sys.w.asDiagonal();
  const Eigen::VectorXcd f_val = values_at(F, validation);
  const double f_sup = f_val.cwiseAbs().maxCoeff();

  Eigen::VectorXcd lambda = Eigen::VectorXcd::Zero(g.size());
  int growth = 0;
  for (int k = 0; k < iters; ++k) {
    const Eigen::VectorXcd step = cc * g;
    lambda += step;
    g -= sys.K * (sys.w.asDiagonal() * step);
    const double res = f_sup > 0.0 ? (f_val - V * lambda).cwiseAbs().maxCoeff() / f_sup : 0.0;
    if (!out.residuals.empty() && res > out.residuals.back()) {
      if (++growth >= 2) out.diverged = true;
    } else {
      growth = 0;
    }
    out.residuals.push_back(res);
  }
  out.lambda = CoeffArray::from_flat(tl, lambda);
  return out;
}

LsqResult reconstruct_lsq(const AtomCombo& F, const TubeLattice& tl, const KernelSpec& ks, WeightMode wm,
                          const std::vector<TubePoint>& collocation, double p, double q) {
  if (collocation.size() < tl.size()) throw DomainError("reconstruct_lsq: fewer collocation points than lattice points");
  const std::vector<TubePoint> pts = site_points(tl);
  const std::vector<double> w = site_weights(tl, ks.s, wm, p, q);
  const Eigen::MatrixXcd V =
      kernel_matrix(collocation, pts, ks) * Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())).asDiagonal();
  const Eigen::VectorXcd f = values_at(F, collocation);

  LsqResult out;
  Eigen::MatrixXcd N = V.adjoint() * V;
  const Eigen::Index M = N.rows();
  out.ridge = 1e-10 * N.trace().real() / static_cast<double>(M);
  N.diagonal().array() += out.ridge;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(N, Eigen::EigenvaluesOnly);
  out.condition_number = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
  const Eigen::VectorXcd lambda = N.ldlt().solve(V.adjoint() * f);
  const double fn = f.norm();
  out.residual = fn > 0.0 ? (f - V * lambda).norm() / fn : 0.0;
  out.lambda = CoeffArray::from_flat(tl, fn > 0.0 ? lambda : Eigen::VectorXcd::Zero(M));
  return out;
}

std::vector<TubePoint> region_points(const TubeLattice& tl, int count, std::uint64_t seed) {
  const AlgebraKind& kind = tl.cone.kind;
  const int n = kind.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-tl.xbox, tl.xbox);
  std::vector<TubePoint> out;
  for (int i = 0; i < count; ++i) {
    const Element y = random_ball_point(Element::identity(kind), tl.cone.D, rng);
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = ux(rng);
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<TubePoint> interior_points(const TubeLattice& tl, int count, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("interior_points: fraction must lie in (0, 1]");
  const AlgebraKind& kind = tl.cone.kind;
  const int n = kind.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-fraction * tl.xbox, fraction * tl.xbox);
  std::vector<TubePoint> out;
  for (int i = 0; i < count; ++i) {
    const Element y = random_ball_point(Element::identity(kind), fraction * tl.cone.D, rng);
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = ux(rng);
    out.emplace_back(x, y);
  }
  return out;
}

bool interior_site(const TubeLattice& tl, const LatticeSite& site, double fraction) {
  const Element& y = tl.cone.points.at(site.j);
  if (invariant_distance(Element::identity(y.kind()), y) > fraction * tl.cone.D) return false;
  return tl.xgrids.at(site.j).at(site.l).cwiseAbs().maxCoeff() <= fraction * tl.xbox;
}

ManufacturedTarget manufactured_target(const TubeLattice& tl, const KernelSpec& ks, WeightMode wm, double p, double q,
                                       double fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const std::vector<LatticeSite> sites = lattice_sites(tl);
  Eigen::VectorXcd l0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sites.size()));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    // Draw for every site so the stream does not depend on the interior test.
    const cplx v(nd(rng), nd(rng));
    if (interior_site(tl, sites[i], fraction)) l0[static_cast<Eigen::Index>(i)] = v;
  }
  CoeffArray lambda0 = CoeffArray::from_flat(tl, l0);
  AtomCombo F = synthesis(lambda0, tl, ks, wm, p, q);
  return {std::move(lambda0), std::move(F)};
}

std::vector<AtomCombo> random_atom_family(const SpectralParam& s, int count, double spread, std::uint64_t seed) {
  if (count < 0) throw DomainError("random_atom_family: negative count");
  const KernelSpec ks = KernelSpec::with_constant(default_atom_parameter(s), 1.0);
  const AlgebraKind& kind = s.kind();
  const int n = kind.dim();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> natoms(1, 3);
  std::uniform_real_distribution<double> ux(-spread, spread);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<AtomCombo> family;
  for (int m = 0; m < count; ++m) {
    AtomCombo F = AtomCombo::zero(ks);
    const int k = natoms(rng);
    for (int a = 0; a < k; ++a) {
      const Element v = random_ball_point(Element::identity(kind), spread, rng);
      Eigen::VectorXd u(n);
      for (int i = 0; i < n; ++i) u[i] = ux(rng);
      F.centers.emplace_back(u, v);
      F.coeffs.emplace_back(nd(rng), nd(rng));
    }
    family.push_back(std::move(F));
  }
  return family;
}

std::string coeffs_to_json(const CoeffArray& lambda) {
  nlohmann::json j;
  std::vector<std::size_t> shape;
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& row : lambda.values) {
    shape.push_back(row.size());
    for (const cplx& v : row) vals.push_back({v.real(), v.imag()});
  }
  j["shape"] = shape;
  j["values"] = vals;
  return j.dump();
}

CoeffArray coeffs_from_json(const std::string& text, const TubeLattice& tl) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const auto shape = j.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != tl.xgrids.size()) throw DimensionError("coefficient document does not match lattice");
    for (std::size_t k = 0; k < shape.size(); ++k)
      if (shape[k] != tl.xgrids[k].size()) throw DimensionError("coefficient document does not match lattice");
    const auto& vals = j.at("values");
    if (vals.size() != tl.size()) throw DimensionError("coefficient document does not match lattice");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = cplx(vals[i].at(0).get<double>(), vals[i].at(1).get<double>());
    return CoeffArray::from_flat(tl, v);
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("coefficient document: ") + ex.what());
  }
}

}  // namespace symcone
