/** @file
 *  @brief Constructive δ-lattices: greedy Whitney packings of a d_Ω-ball in Ω,
 *         per-height x-grids, the tube lattice, and Monte-Carlo verification of
 *         separation, covering and overlap.
 */
#pragma once

#include "symcone/tube.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace symcone {

struct ConeLattice {
  AlgebraKind kind = AlgebraKind::rank1();
  double delta = 0.5;
  double D = 1.0;                        ///< region {y : d_Ω(y, e) ≤ D}
  std::vector<Element> points;
  std::vector<ConeTransform> transforms;  ///< g_j = transform_to(points[j])
};

struct LatticeConstants {
  int N_measured = 0;  ///< largest tube overlap count seen by verify_whitney
  double eta1 = 0.0;   ///< max ρ(z, z_{l,j})/δ over sampled z ∈ I_{l,j} + iB_{δ/R}(y_j)
  double eta2 = 0.0;   ///< largest γ with y − γe ∈ Ω on B_δ(e)
};

struct TubeLattice {
  ConeLattice cone;
  double R = 2.0;
  double xbox = 1.0;                              ///< x-box half-width, coefficient coordinates
  std::vector<std::vector<Eigen::VectorXd>> xgrids;  ///< xgrids[j][l] = x_{l,j}
  LatticeConstants constants;

  std::size_t size() const;
  /// Lattice point z_{l,j}.
  TubePoint point(std::size_t l, std::size_t j) const;
};

/// Flat (j-major, l-minor) enumeration of a tube lattice.
struct LatticeSite {
  std::size_t l = 0;
  std::size_t j = 0;
};
std::vector<LatticeSite> lattice_sites(const TubeLattice& tl);

struct LatticeBuildOptions {
  std::uint64_t seed = 1;
  int repair_samples = 50000;  ///< random region points added when uncovered
};

/// Greedy maximal δ-separated subset of exp(h·Z^n) (h = δ/4, trace-orthonormal
/// coordinates, lexicographic order) inside the d_Ω-ball of radius D, followed
/// by a seeded repair pass over random region points.
ConeLattice build_cone_lattice(const AlgebraKind& kind, double delta, double D,
                               const LatticeBuildOptions& opt = {});
/// Per j, greedy maximal (δ/R)-separated subset of g_j(h·Z^n) with h = δ/(4R),
/// separation measured in the trace norm of g_j^{-1}(x − x′). Candidates cover
/// the box plus a δ/R margin so that the box itself is covered.
TubeLattice build_tube_lattice(const ConeLattice& cone, double R, double xbox,
                               const LatticeBuildOptions& opt = {});

/// Smallest R on the ladder √2^k (k ≥ 1) bounding max(L/ρ, ρ/L) over random
/// pairs in B_1(ie), where L is the Bergman length of the straight segment and
/// ρ the quasi-distance. Returns 4.0 when samples < 16.
double estimate_R(const AlgebraKind& kind, int samples, std::uint64_t seed = 1);

/// Euclidean unit-ball volume in dimension n.
double unit_ball_volume(int n);
/// Trace-measure volume of I_{l,j} = {x : ‖g_j^{-1}(x − x_{l,j})‖ < δ/R}:
/// ω_n (δ/R)^n Δ^{n/r}(y_j).
double box_measure(const TubeLattice& tl, std::size_t l, std::size_t j);

struct WhitneyReport {
  double delta = 0.0;
  double R = 0.0;
  std::size_t cone_points = 0;
  std::size_t tube_points = 0;
  int samples = 0;

  double cone_min_separation = 0.0;
  int cone_separation_violations = 0;
  int cone_coverage_misses = 0;
  int max_overlap = 0;  ///< max #{j : d_Ω(y, y_j) < δ} over samples with d_Ω(y, e) ≤ D − δ
  int overlap_samples = 0;

  int x_separation_violations = 0;
  int x_coverage_misses = 0;
  int x_max_overlap = 0;  ///< max #{l : x ∈ I_{l,j}} over samples

  int coverage_misses = 0;  ///< cone + x
  int inclusion_violations = 0;  ///< sampled z ∈ I_{l,j} + iB_{δ/R}(y_j) with ρ(z, z_{l,j}) > δ
  double gamma = 0.0;
  double measure_constant = 0.0;  ///< box_measure / Δ^{n/r}(y_j), identical for all (l, j)
  double measure_constant_spread = 0.0;
  LatticeConstants constants;

  bool passed() const;
};

/// Exhaustive pair checks plus `samples` Monte-Carlo points per property.
WhitneyReport verify_whitney(const TubeLattice& tl, int samples, std::uint64_t seed = 2);

std::string lattice_to_json(const TubeLattice& tl);
/// Inverse of lattice_to_json; rebuilds the transforms. Throws DomainError on
/// malformed documents.
TubeLattice lattice_from_json(const std::string& text);

}  // namespace symcone
