/** @file
 *  @brief Quadrature building blocks: Gauss–Legendre cells on tensor boxes
 *         with a fixed pairwise reduction, sphere product rules, and nested
 *         double-exponential integration over R^d.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace symcone {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double truncation_estimate = 0.0;
};

/// Region: x in a Euclidean box, y in a d_Ω-ball around e.
/// Full: x over all of V, y over all of Ω (truncation by doubling in chart
/// coordinates).
enum class Domain { region, full };

struct QuadratureConfig {
  double x_half_width = 4.0;   ///< box half-width (region) or sinh-coordinate half-width (full)
  double omega_radius = 1.0;   ///< d_Ω-ball radius (region) or chart half-width (full)
  int resolution = 4;          ///< cells per axis
  int order = 6;               ///< Gauss–Legendre nodes per cell
  int refine_depth = 1;        ///< domain doublings used for the truncation estimate
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
  Domain domain = Domain::full;
  /// When set, cell contributions are summed in a shuffled order.
  std::optional<std::uint64_t> permutation_seed;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct GaussRule {
  std::vector<double> nodes;    ///< on [-1, 1], ascending
  std::vector<double> weights;
};

/// Gauss–Legendre rule of the given order (cached, thread-safe).
const GaussRule& gauss_legendre(int order);

double pairwise_sum(std::span<const double> v);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> v);

/// Tensor-product Gauss–Legendre over [lo, hi]^d split into `cells` equal
/// cells per axis. Cells whose multi-index satisfies `skip` are omitted.
/// Cell totals are reduced pairwise in lexicographic cell order (or in the
/// order given by `permutation_seed`).
struct CellRule {
  int dim = 1;
  std::vector<double> lo, hi;
  int cells = 1;
  int order = 4;
  std::function<bool(std::span<const int>)> skip;
  std::optional<std::uint64_t> permutation_seed;
};

double integrate_cells(const CellRule& rule, const std::function<double(std::span<const double>)>& f);

/// Cells of the doubled box [2lo, 2hi] lying outside [lo, hi]; `cells` must
/// be even so the inner box is a union of outer cells.
CellRule shell_rule(const CellRule& inner);

/// Product rule on the unit sphere S^{d-1} in hyperspherical coordinates.
struct SphereRule {
  std::vector<std::vector<double>> directions;
  std::vector<double> weights;  ///< sums to the sphere area
};
SphereRule sphere_rule(int d, int order);

/// ∫_{R^d} f by nested tanh–sinh on R (sinh–sinh). Non-finite integrand
/// values are treated as zero; `error` receives the outer error estimate.
double integrate_real_nested(int d, const std::function<double(std::span<const double>)>& f,
                             double tolerance, double* error = nullptr);

/// ∫_a^b f by adaptive Gauss–Kronrod (used by oracles and 1-D paths).
double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          double tolerance, double* error = nullptr);

}  // namespace symcone
