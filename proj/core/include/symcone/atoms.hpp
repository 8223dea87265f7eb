/** @file
 *  @brief Sampling (analysis) and synthesis operators on a tube lattice,
 *         l^{p,q}_s coefficient norms, sampling ratios, and reconstruction by
 *         relaxed Neumann iteration and by ridge-regularized least squares.
 */
#pragma once

#include "symcone/lattice.hpp"
#include "symcone/spaces.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symcone {

/// λ_{l,j}, stored as values[j][l] to mirror TubeLattice::xgrids.
struct CoeffArray {
  std::vector<std::vector<cplx>> values;

  static CoeffArray zeros(const TubeLattice& tl);
  /// Flat j-major order, matching lattice_sites().
  static CoeffArray from_flat(const TubeLattice& tl, const Eigen::VectorXcd& v);
  Eigen::VectorXcd flat() const;
  std::size_t size() const;
  bool matches(const TubeLattice& tl) const;
};

/// Statement: Δ_{s + nq/(rp)}(y_j). Pairing: Δ_{s + n/r}(y_j).
enum class WeightMode { statement, pairing };

double atom_weight(const Element& y, const SpectralParam& s, WeightMode wm, double p, double q);

/// λ_{l,j} = F(z_{l,j}).
CoeffArray analysis(const AtomCombo& F, const TubeLattice& tl);
/// (Σ_j (Σ_l |λ_{l,j}|^p)^{q/p} Δ_{s+nq/(rp)}(y_j))^{1/q}.
double coeff_norm(const CoeffArray& lambda, const TubeLattice& tl, double p, double q, const SpectralParam& s);

struct SamplingRatio {
  double ratio = 0.0;  ///< coeff_norm^q / mixed_norm^q
  double coeff_norm = 0.0;
  NormResult norm;
};
SamplingRatio sampling_ratio(const AtomCombo& F, const TubeLattice& tl, double p, double q, const SpectralParam& s,
                             const QuadratureConfig& cfg);

/// Σ λ_{l,j} weight(y_j) B_s(·, z_{l,j}) with s = ks.s.
AtomCombo synthesis(const CoeffArray& lambda, const TubeLattice& tl, const KernelSpec& ks, WeightMode wm, double p,
                    double q);
/// S_c F = c · synthesis(analysis(F)).
AtomCombo frame_apply(const AtomCombo& F, const TubeLattice& tl, const KernelSpec& ks, double c, WeightMode wm,
                      double p, double q);

/// B_s(z_a, z_b) over lattice sites and the synthesis weights.
struct FrameSystem {
  Eigen::MatrixXcd K;
  Eigen::VectorXd w;
};
FrameSystem frame_system(const TubeLattice& tl, const KernelSpec& ks, WeightMode wm, double p, double q);

struct Relaxation {
  double c = 0.0;
  double theta = 0.0;        ///< c = θ / μ_max
  double mu_max = 0.0;       ///< top eigenvalue of W^{1/2} K W^{1/2} (power iteration)
  double contraction = 0.0;  ///< per-step factor of (I − cA) on the probe
};
/// Picks θ on a grid in (0, 2) minimizing the `steps`-step contraction of the
/// Neumann recursion started from `values` (lattice values of the target), or
/// from a seeded random range vector when `values` is null or zero.
Relaxation calibrate_relaxation(const FrameSystem& sys, int steps, std::uint64_t seed,
                                const Eigen::VectorXcd* values = nullptr);

struct NeumannResult {
  CoeffArray lambda;
  std::vector<double> residuals;  ///< sup_v |F − synthesis(λ)| / sup_v |F| after each step
  bool diverged = false;          ///< residual grew in two consecutive steps
  Relaxation relaxation;
};
NeumannResult reconstruct_neumann(const AtomCombo& F, const TubeLattice& tl, const KernelSpec& ks, int iters,
                                  WeightMode wm, const std::vector<TubePoint>& validation, double p = 2.0,
                                  double q = 2.0, std::optional<double> c = std::nullopt, std::uint64_t seed = 1);

struct LsqResult {
  CoeffArray lambda;
  double residual = 0.0;  ///< ‖F − synthesis(λ)‖₂ / ‖F‖₂ over the collocation points
  double condition_number = 0.0;
  double ridge = 0.0;
};
/// Normal equations with ridge 1e-10 · trace / dimension.
LsqResult reconstruct_lsq(const AtomCombo& F, const TubeLattice& tl, const KernelSpec& ks, WeightMode wm,
                          const std::vector<TubePoint>& collocation, double p = 2.0, double q = 2.0);

/// Random points of the lattice region: y in B_D(e), x in the box.
std::vector<TubePoint> region_points(const TubeLattice& tl, int count, std::uint64_t seed);
/// Random points of the shrunken region: y in B_{fD}(e), x in the box scaled by f.
std::vector<TubePoint> interior_points(const TubeLattice& tl, int count, double fraction, std::uint64_t seed);
/// Lattice sites with d_Ω(y_j, e) ≤ fD and every |x_i| ≤ f·xbox.
bool interior_site(const TubeLattice& tl, const LatticeSite& site, double fraction);

/// F = synthesis(λ₀) with complex Gaussian λ₀ on the interior sites and zero
/// elsewhere, so F lives where the truncated lattice resolves it.
struct ManufacturedTarget {
  CoeffArray lambda0;
  AtomCombo F;
};
ManufacturedTarget manufactured_target(const TubeLattice& tl, const KernelSpec& ks, WeightMode wm, double p, double q,
                                       double fraction, std::uint64_t seed);

/// Random test functions: each member has 1–3 atoms B_t(·, w) with t =
/// default_atom_parameter(s), unit constant, complex Gaussian coefficients and
/// centers with d_Ω(v, e) ≤ spread, |u_i| ≤ spread.
std::vector<AtomCombo> random_atom_family(const SpectralParam& s, int count, double spread, std::uint64_t seed);

/// {"shape": [n_0, …], "values": [[re, im], …]} in flat j-major order.
std::string coeffs_to_json(const CoeffArray& lambda);
CoeffArray coeffs_from_json(const std::string& text, const TubeLattice& tl);

}  // namespace symcone
