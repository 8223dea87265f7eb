/** @file
 *  @brief Tube domain T_Ω = V + iΩ: points, holomorphic power functions,
 *         weighted Bergman kernels, the Bergman metric and the quasi-distance.
 */
#pragma once

#include "symcone/cone.hpp"

#include <complex>
#include <vector>

namespace symcone {

using cplx = std::complex<double>;

struct TubePoint {
  Eigen::VectorXd x;
  Element y;

  /// Requires every minor of y to exceed `margin`.
  TubePoint(Eigen::VectorXd x, Element y, double margin = 0.0);
  /// The base point ie.
  static TubePoint base(const AlgebraKind& kind);

  const AlgebraKind& kind() const { return y.kind(); }
};

/// (z − w̄) = (x_z − x_w) + i(y_z + y_w).
TubePoint difference_point(const TubePoint& z, const TubePoint& w);

/// Minors of the complexified element z/i = y − ix.
Vec<cplx> complex_minors(const TubePoint& z);
/// Holomorphic logarithms of the minors of z/i, continuous along the segment
/// from iy (where they are real) to z. Throws BranchError if a minor vanishes.
std::vector<cplx> complex_minor_logs(const TubePoint& z);
/// Same, forced through path continuation (no principal-branch fast path).
std::vector<cplx> complex_minor_logs_by_continuation(const TubePoint& z);
/// log Δ_σ(z/i).
cplx log_complex_power(const TubePoint& z, std::span<const double> sigma);

struct KernelSpec {
  SpectralParam s;
  double d_s = 1.0;
  double calibration_error = 0.0;

  /// Kernel with a prescribed constant (d = 1 gives the unnormalized kernel).
  static KernelSpec with_constant(const SpectralParam& s, double d);
};

/// B_s(z, w) = d_s Δ_{−s−n/r}((z − w̄)/i).
cplx bergman_kernel(const TubePoint& z, const TubePoint& w, const KernelSpec& ks);
/// B_s(z, z) through the real reduction d_s Δ_{−s−n/r}(2y).
double bergman_diagonal(const TubePoint& z, const KernelSpec& ks);

/// log of the constant C with
/// ∫_V k_{τa}((x+iy−w̄_a)/i) conj(k_{τb}((x+iy−w̄_b)/i)) dx
///   = C · Δ_{−(τa+τb−n/r)}(((u_b − u_a) + i(2y + v_a + v_b))/i),
/// where k_τ(ζ) = Δ_{−τ}(ζ).
double log_plancherel_constant(const SpectralParam& tau_a, const SpectralParam& tau_b);
/// The x-integral above (unnormalized kernels, trace measure on V).
cplx kernel_product_x_integral(const TubePoint& wa, const SpectralParam& tau_a, const TubePoint& wb,
                               const SpectralParam& tau_b, const Element& y);

/// Calibrates d_s so that B_s reproduces itself at ie; the Ω-integral runs
/// over the triangular chart box of half-width cfg.omega_radius (ζ in sinh
/// coordinates), with a doubled box for the truncation estimate.
KernelSpec calibrate_kernel_constant(const SpectralParam& s, const QuadratureConfig& cfg,
                                     QuadResult* norm_report = nullptr);

/// Chart-box integral ∫ f(y) dμ(y) over [−L, L]^n in (ℓ, asinh ζ) coordinates,
/// with the shell of the doubled box as truncation estimate. Nodes where f
/// throws DomainError (floating-point exits from Ω) contribute zero.
QuadResult integrate_chart_box(const AlgebraKind& kind, const std::function<double(const ChartNode&)>& f,
                               const QuadratureConfig& cfg);

/// g_{jk} = ∂²/∂z_j∂z̄_k log B(z, z) for the unweighted kernel, in coefficient
/// coordinates: (n/(2r)) · Gram · P(y^{-1}).
Eigen::MatrixXd bergman_metric(const TubePoint& z);
/// Bergman length of the straight segment from z1 to z2.
double bergman_segment_length(const TubePoint& z1, const TubePoint& z2, int nodes = 32);
/// ρ(z1, z2) = max(‖g_{y1}^{-1}Δx‖, ‖g_{y2}^{-1}Δx‖, d_Ω(y1, y2)).
double quasi_distance(const TubePoint& z1, const TubePoint& z2);

}  // namespace symcone
