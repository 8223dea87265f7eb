/** @file
 *  @brief Symmetric-cone geometry and special functions: membership, the
 *         invariant distance, transforms to the base point, Γ_Ω, Laplace
 *         transforms of generalized powers, and invariant-measure charts.
 */
#pragma once

#include "symcone/jordan.hpp"
#include "symcone/quadrature.hpp"

#include <random>
#include <span>
#include <vector>

namespace symcone {

struct ConeIndexData {
  int r = 1;
  int n = 1;
  std::vector<double> n_k;
  std::vector<double> m_k;
};

ConeIndexData index_data(const AlgebraKind& kind);

/// Weight exponents s ∈ R^r.
class SpectralParam {
 public:
  SpectralParam(AlgebraKind kind, std::vector<double> s);
  static SpectralParam constant(const AlgebraKind& kind, double v);

  const AlgebraKind& kind() const { return kind_; }
  std::span<const double> values() const { return s_; }
  double operator[](std::size_t k) const { return s_[k]; }
  std::size_t size() const { return s_.size(); }

  /// s_k > n_k/2 for all k.
  bool bergman_ok() const;
  bool gamma_ok() const { return bergman_ok(); }
  /// s_k > n/r − 1 for all k.
  bool interp_ok() const;

  SpectralParam plus(double c) const;
  SpectralParam plus(const SpectralParam& o) const;
  SpectralParam scaled(double c) const;
  /// s* = (s_r, …, s_1).
  SpectralParam reversed() const;
  double sum() const;

 private:
  AlgebraKind kind_;
  std::vector<double> s_;
};

bool contains(const Element& x);
/// d_Ω(x, y) = ‖log spec P(x^{-1/2}) y‖₂.
double invariant_distance(const Element& x, const Element& y);

/// Linear automorphism of Ω in coefficient coordinates.
struct ConeTransform {
  AlgebraKind kind;
  Eigen::MatrixXd map;
  Eigen::MatrixXd inverse_map;
  double det = 1.0;

  Element apply(const Element& x) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& c) const { return map * c; }
  /// Coefficients u with apply(u) = c.
  Eigen::VectorXd solve(const Eigen::VectorXd& c) const { return inverse_map * c; }
};

/// g_y = P(√y): g_y(e) = y, det g_y = Δ(y)^{n/r}.
ConeTransform transform_to(const Element& y);

double log_gamma_omega(const SpectralParam& s);
double gamma_omega(const SpectralParam& s);
/// Γ_Ω(s)·Δ_s(y^{-1}), evaluated as Γ_Ω(s)/Δ*_{s*}(y).
double laplace_power_closed(const SpectralParam& s, const Element& y);
/// Numeric ∫_Ω e^{−(ξ|y)} Δ_s(ξ) Δ^{−n/r}(ξ) dξ in triangular chart coordinates.
QuadResult laplace_power_quadrature(const SpectralParam& s, const Element& y, const QuadratureConfig& cfg);

/// Triangular chart of Ω: coordinates (ℓ ∈ R^r, ζ ∈ R^{n−r}) with
/// log Δ_k(y) = ℓ_1 + … + ℓ_k and invariant density
/// Δ^{−n/r}(y) dy = 2^{(n−r)/2} exp(−Σ n_k ℓ_k / 2) dℓ dζ.
struct ChartNode {
  Element y;
  Eigen::VectorXd log_minors;
  double log_density = 0.0;  ///< log of dμ / (dℓ dζ)
};
ChartNode chart_node(const AlgebraKind& kind, std::span<const double> ell, std::span<const double> zeta);

/// ∫_Ω f dμ with dμ = Δ^{−n/r}(ξ) dξ, by nested double-exponential rules in
/// chart coordinates.
QuadResult integrate_invariant(const AlgebraKind& kind, const std::function<double(const ChartNode&)>& f,
                               double tolerance);

/// Density of dμ in exponential coordinates y = exp(η), η trace-orthonormal:
/// Π_{j<k} (sinh(t_jk)/t_jk)^d with t_jk = (λ_j − λ_k)/2.
double exp_chart_density(const Element& eta);

/// Quadrature nodes for ∫_{B_D(center)} f dμ in exponential polar coordinates.
struct WeightedPoint {
  Element y;
  double weight = 0.0;
};
std::vector<WeightedPoint> ball_nodes(const Element& center, double radius, int radial_cells, int order,
                                      int angular_order);

/// exp(η) pushed to the ball around `center`: g_center(exp η).
Element ball_point(const Element& center, const Eigen::VectorXd& eta_orthonormal);
/// Point of B_radius(center) with η uniform in the Euclidean ball.
Element random_ball_point(const Element& center, double radius, std::mt19937_64& rng);
/// Direction uniformly distributed on S^{d-1}.
Eigen::VectorXd random_unit_vector(int d, std::mt19937_64& rng);

/// max_k |log Δ_k(ξ)/Δ_k(ξ′)| / d_Ω(ξ, ξ′) over sampled pairs with
/// 0 < d_Ω ≤ delta and ξ drawn from B_spread(e).
double minor_ratio_constant(const AlgebraKind& kind, double delta, double spread, int samples,
                            std::uint64_t seed);
/// Largest γ (bisection, 40 steps) with y − γe ∈ Ω for all sampled y ∈ B_δ(e).
double inclusion_gamma(const AlgebraKind& kind, double delta, int samples, std::uint64_t seed);

}  // namespace symcone
