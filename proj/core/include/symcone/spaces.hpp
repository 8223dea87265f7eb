/** @file
 *  @brief Test functions built from kernel atoms, mixed-norm quadrature on
 *         T_Ω, the weighted pairing, and mean-value / slice-growth checks.
 */
#pragma once

#include "symcone/tube.hpp"

#include <string>
#include <vector>

namespace symcone {

/// F(z) = Σ_m c_m B_t(z, w_m) with t = ks.s.
struct AtomCombo {
  KernelSpec ks;
  std::vector<TubePoint> centers;
  std::vector<cplx> coeffs;

  static AtomCombo zero(const KernelSpec& ks) { return {ks, {}, {}}; }
  static AtomCombo atom(const KernelSpec& ks, const TubePoint& w, cplx c = 1.0) { return {ks, {w}, {c}}; }

  std::size_t size() const { return centers.size(); }
  const AlgebraKind& kind() const { return ks.s.kind(); }
  AtomCombo scaled(cplx a) const;
  /// Concatenation; both operands must share the atom parameter and constant.
  AtomCombo operator+(const AtomCombo& o) const;
};

using NormResult = QuadResult;

/// Membership default for atoms used as test functions: t = s + n/r + 2.
SpectralParam default_atom_parameter(const SpectralParam& s);

cplx eval(const AtomCombo& F, const TubePoint& z);

/// (∫ |F(x + iy)|^p dx)^{1/p} in the trace measure on V; p = ∞ gives the
/// supremum over the quadrature nodes. Full domain with p = 2 uses the exact
/// Plancherel reduction; otherwise x runs over the box (region) or over
/// sinh-stretched coordinates (full).
NormResult slice_norm(const AtomCombo& F, const Element& y, double p, const QuadratureConfig& cfg);

/// (∫_Ω slice_norm(F, y, p)^q Δ_{s−n/r}(y) dy)^{1/q}. Region: y in the d_Ω-ball
/// of radius cfg.omega_radius around e; full: the chart box of half-width
/// cfg.omega_radius with a doubled-box truncation estimate.
NormResult mixed_norm(const AtomCombo& F, double p, double q, const SpectralParam& s, const QuadratureConfig& cfg);

struct PairingResult {
  cplx value;
  double error_estimate = 0.0;
  double truncation_estimate = 0.0;
};
/// ∫ F conj(G) Δ_{s−n/r}(y) dx dy over the configured domain.
PairingResult dual_pairing(const AtomCombo& F, const AtomCombo& G, const SpectralParam& s,
                           const QuadratureConfig& cfg);

struct MeanValueReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  ///< lhs / rhs (0 when both vanish)
};
/// lhs = |F(z)|^p; rhs = δ^{−2n} ∫_{ρ(w,z)<δ} |F(w)|^p Δ^{−2n/r}(v) du dv.
MeanValueReport mean_value_check(const AtomCombo& F, const TubePoint& z, double delta, double p,
                                 const QuadratureConfig& cfg);
/// lhs = slice_norm(F, y, p)^q; rhs = ∫_{B_δ(y)} slice_norm(F, v, p)^q Δ^{−n/r}(v) dv.
MeanValueReport slice_growth_check(const AtomCombo& F, const Element& y, double delta, double p, double q,
                                   const QuadratureConfig& cfg);

/// {"kind", "t", "d", "centers": [{"x", "y"}], "coeffs": [[re, im]]}.
std::string atoms_to_json(const AtomCombo& F);
AtomCombo atoms_from_json(const std::string& text);

}  // namespace symcone
