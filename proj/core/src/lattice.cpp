#include "symcone/lattice.hpp"

#include "symcone/errors.hpp"

#include <json.hpp>

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <random>

namespace symcone {

namespace {

// Rounding slack for re-verified separations; greedy selection itself is exact.
constexpr double kSeparationSlack = 1e-9;

using CellKey = std::vector<long long>;

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
    return h;
  }
};

CellKey cell_of(const Eigen::VectorXd& v, double size) {
  CellKey k(static_cast<std::size_t>(v.size()));
  for (int i = 0; i < v.size(); ++i) k[static_cast<std::size_t>(i)] = static_cast<long long>(std::floor(v[i] / size));
  return k;
}

// Buckets of point indices keyed by a cubic cell; neighbour queries visit the
// 3^d surrounding cells, so any point within `size` of the query is found.
class SpatialHash {
 public:
  explicit SpatialHash(double size) : size_(size) {}

  void insert(const Eigen::VectorXd& v, int idx) { cells_[cell_of(v, size_)].push_back(idx); }

  template <class Visit>
  void for_neighbours(const Eigen::VectorXd& v, Visit&& visit) const {
    const CellKey c = cell_of(v, size_);
    CellKey k = c;
    const std::size_t d = c.size();
    std::vector<int> off(d, -1);
    while (true) {
      for (std::size_t i = 0; i < d; ++i) k[i] = c[i] + off[i];
      auto it = cells_.find(k);
      if (it != cells_.end())
        for (int idx : it->second) visit(idx);
      std::size_t a = 0;
      while (a < d && ++off[a] == 2) off[a++] = -1;
      if (a == d) break;
    }
  }

 private:
  double size_;
  std::unordered_map<CellKey, std::vector<int>, CellKeyHash> cells_;
};

Eigen::VectorXd log_coords(const Element& y) { return to_orthonormal(log(y)); }

// Lexicographic enumeration of integer vectors k with lo ≤ k ≤ hi and
// accept_prefix(k[0..i]) true at every level.
void enumerate_lex(const std::vector<long long>& lo, const std::vector<long long>& hi,
                   const std::function<bool(const std::vector<long long>&, std::size_t)>& accept_prefix,
                   const std::function<void(const std::vector<long long>&)>& visit) {
  const std::size_t d = lo.size();
  std::vector<long long> k(d);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      visit(k);
      return;
    }
    for (long long v = lo[i]; v <= hi[i]; ++v) {
      k[i] = v;
      if (accept_prefix(k, i + 1)) rec(i + 1);
    }
  };
  rec(0);
}

Eigen::MatrixXd xi_map(const ConeTransform& g) {
  return trace_gram_diagonal(g.kind).cwiseSqrt().asDiagonal() * g.inverse_map;
}

Eigen::VectorXd random_box_point(int n, double half, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-half, half);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

Eigen::VectorXd random_ball_vector(int n, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const Eigen::VectorXd dir = random_unit_vector(n, rng);
  return radius * std::pow(ud(rng), 1.0 / n) * dir;
}

struct XGridIndex {
  Eigen::MatrixXd M;  // x ↦ ξ
  std::vector<Eigen::VectorXd> xi;
  SpatialHash hash;
  XGridIndex(const ConeTransform& g, double sep) : M(xi_map(g)), hash(sep) {}
};

}  // namespace

std::size_t TubeLattice::size() const {
  std::size_t n = 0;
  for (const auto& g : xgrids) n += g.size();
  return n;
}

TubePoint TubeLattice::point(std::size_t l, std::size_t j) const {
  if (j >= xgrids.size() || l >= xgrids[j].size()) throw IndexError("tube lattice index out of range");
  return {xgrids[j][l], cone.points[j]};
}

std::vector<LatticeSite> lattice_sites(const TubeLattice& tl) {
  std::vector<LatticeSite> out;
  out.reserve(tl.size());
  for (std::size_t j = 0; j < tl.xgrids.size(); ++j)
    for (std::size_t l = 0; l < tl.xgrids[j].size(); ++l) out.push_back({l, j});
  return out;
}

ConeLattice build_cone_lattice(const AlgebraKind& kind, double delta, double D, const LatticeBuildOptions& opt) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("cone lattice: delta must lie in (0, 1)");
  if (!(D > 0.0)) throw DomainError("cone lattice: empty region");
  const int n = kind.dim();
  const double h = delta / 4.0;
  const long long K = static_cast<long long>(std::floor(D / h));

  ConeLattice cl{kind, delta, D, {}, {}};
  std::vector<Eigen::VectorXd> etas;
  SpatialHash hash(delta);

  auto try_add = [&](const Eigen::VectorXd& eta, const Element& y) {
    bool separated = true;
    hash.for_neighbours(eta, [&](int idx) {
      if (!separated) return;
      if ((etas[static_cast<std::size_t>(idx)] - eta).norm() >= delta) return;
      if (invariant_distance(cl.points[static_cast<std::size_t>(idx)], y) < delta) separated = false;
    });
    if (!separated) return false;
    hash.insert(eta, static_cast<int>(etas.size()));
    etas.push_back(eta);
    cl.points.push_back(y);
    return true;
  };

  std::vector<long long> lo(static_cast<std::size_t>(n), -K), hi(static_cast<std::size_t>(n), K);
  enumerate_lex(
      lo, hi,
      [&](const std::vector<long long>& k, std::size_t len) {
        double acc = 0.0;
        for (std::size_t i = 0; i < len; ++i) acc += static_cast<double>(k[i] * k[i]);
        return h * std::sqrt(acc) <= D;
      },
      [&](const std::vector<long long>& k) {
        Eigen::VectorXd eta(n);
        for (int i = 0; i < n; ++i) eta[i] = h * static_cast<double>(k[static_cast<std::size_t>(i)]);
        try_add(eta, exp(from_orthonormal(kind, eta)));
      });

  std::mt19937_64 rng(opt.seed);
  for (int i = 0; i < opt.repair_samples; ++i) {
    const Eigen::VectorXd eta = random_ball_vector(n, D, rng);
    try_add(eta, exp(from_orthonormal(kind, eta)));
  }
  if (cl.points.empty()) throw DomainError("cone lattice: empty region");
  for (const Element& y : cl.points) cl.transforms.push_back(transform_to(y));
  return cl;
}

TubeLattice build_tube_lattice(const ConeLattice& cone, double R, double xbox, const LatticeBuildOptions& opt) {
  if (!(R > 1.0)) throw DomainError("tube lattice: R must exceed 1");
  if (!(xbox > 0.0)) throw DomainError("tube lattice: x-box half-width must be positive");
  const AlgebraKind& kind = cone.kind;
  const int n = kind.dim();
  const double sep = cone.delta / R;
  const double h = sep / 4.0;
  const Eigen::VectorXd sqrt_gram = trace_gram_diagonal(kind).cwiseSqrt();

  TubeLattice tl;
  tl.cone = cone;
  tl.R = R;
  tl.xbox = xbox;
  tl.xgrids.resize(cone.points.size());

  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  const int repair_per_j =
      std::max(200, opt.repair_samples / std::max<int>(1, static_cast<int>(cone.points.size())));

  for (std::size_t j = 0; j < cone.points.size(); ++j) {
    const ConeTransform& g = cone.transforms[j];
    XGridIndex idx(g, sep);
    // map from ξ (orthonormal coordinates of g^{-1}x) back to x
    const Eigen::MatrixXd Minv = g.map * sqrt_gram.cwiseInverse().asDiagonal();
    // Candidates extend past the box far enough that every box point has its
    // full δ/R-ball of candidates; coordinate i moves by at most ‖row_i(M⁻¹)‖·‖Δξ‖.
    Eigen::VectorXd reach(n);
    for (int i = 0; i < n; ++i) reach[i] = xbox + sep * Minv.row(i).norm();
    auto in_box = [&](const Eigen::VectorXd& x) { return (x.cwiseAbs() - reach).maxCoeff() <= 0.0; };

    std::vector<long long> hi(static_cast<std::size_t>(n));
    std::vector<std::size_t> stride(static_cast<std::size_t>(n));
    std::size_t cells = 1;
    for (int i = n - 1; i >= 0; --i) {
      const double bound = idx.M.row(i).cwiseAbs().dot(reach);
      hi[static_cast<std::size_t>(i)] = static_cast<long long>(std::floor(bound / h));
      stride[static_cast<std::size_t>(i)] = cells;
      cells *= static_cast<std::size_t>(2 * hi[static_cast<std::size_t>(i)] + 1);
    }
    auto& grid = tl.xgrids[j];

    // Greedy in lexicographic order on the integer grid: a candidate k is
    // accepted iff ‖k − k′‖² ≥ 16 (‖Δξ‖ ≥ 4h = δ/R) for every accepted k′.
    // Accepting k blocks its radius-4 neighbourhood in a dense flag array.
    std::vector<std::uint8_t> blocked(cells, 0);
    std::vector<std::vector<int>> ball;
    {
      std::vector<int> off(static_cast<std::size_t>(n), -3);
      while (true) {
        int acc = 0;
        for (int v : off) acc += v * v;
        if (acc < 16) ball.push_back(off);
        std::size_t a = 0;
        while (a < off.size() && ++off[a] == 4) off[a++] = -3;
        if (a == off.size()) break;
      }
    }
    std::vector<long long> k(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = -hi[static_cast<std::size_t>(i)];
    Eigen::VectorXd xi(n), x(n);
    for (std::size_t flat = 0; flat < cells; ++flat) {
      // flat enumerates k lexicographically (first coordinate slowest).
      if (!blocked[flat]) {
        for (int i = 0; i < n; ++i) xi[i] = h * static_cast<double>(k[static_cast<std::size_t>(i)]);
        x.noalias() = Minv * xi;
        if (in_box(x)) {
          idx.hash.insert(xi, static_cast<int>(idx.xi.size()));
          idx.xi.push_back(xi);
          grid.push_back(x);
          for (const std::vector<int>& off : ball) {
            std::size_t target = flat;
            bool inside = true;
            for (int i = 0; i < n && inside; ++i) {
              const long long v = k[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)];
              if (v < -hi[static_cast<std::size_t>(i)] || v > hi[static_cast<std::size_t>(i)]) inside = false;
              target += static_cast<std::size_t>(off[static_cast<std::size_t>(i)]) * stride[static_cast<std::size_t>(i)];
            }
            if (inside) blocked[target] = 1;
          }
        }
      }
      for (int i = n - 1; i >= 0; --i) {
        if (++k[static_cast<std::size_t>(i)] <= hi[static_cast<std::size_t>(i)]) break;
        k[static_cast<std::size_t>(i)] = -hi[static_cast<std::size_t>(i)];
      }
    }

    for (int s = 0; s < repair_per_j; ++s) {
      const Eigen::VectorXd x = random_box_point(n, xbox, rng);
      const Eigen::VectorXd xi = idx.M * x;
      bool covered = false;
      idx.hash.for_neighbours(xi, [&](int m) {
        if ((idx.xi[static_cast<std::size_t>(m)] - xi).norm() <= sep) covered = true;
      });
      if (covered) continue;
      idx.hash.insert(xi, static_cast<int>(idx.xi.size()));
      idx.xi.push_back(xi);
      grid.push_back(x);
    }
  }
  return tl;
}

double estimate_R(const AlgebraKind& kind, int samples, std::uint64_t seed) {
  if (samples < 16) return 4.0;
  const int n = kind.dim();
  const Element e = Element::identity(kind);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  double worst = 1.0;
  for (int i = 0; i < samples; ++i) {
    const Element y1 = random_ball_point(e, 1.0, rng);
    const ConeTransform g1 = transform_to(y1);
    const Eigen::VectorXd x1 = g1.apply(from_orthonormal(kind, random_ball_vector(n, 1.0, rng)).coeffs());
    const double t = std::exp(std::log(0.05) * ud(rng));
    const Element y2 = ball_point(y1, t * ud(rng) * random_unit_vector(n, rng));
    const Eigen::VectorXd x2 =
        x1 + g1.apply(from_orthonormal(kind, t * ud(rng) * random_unit_vector(n, rng)).coeffs());
    const TubePoint z1(x1, y1), z2(x2, y2);
    const double rho = quasi_distance(z1, z2);
    if (!(rho > 1e-12)) continue;
    const double L = bergman_segment_length(z1, z2);
    worst = std::max(worst, std::max(L / rho, rho / L));
  }
  double R = std::sqrt(2.0);
  while (R < worst) R *= std::sqrt(2.0);
  return R;
}

double unit_ball_volume(int n) {
  const double pi = boost::math::constants::pi<double>();
  return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double box_measure(const TubeLattice& tl, std::size_t l, std::size_t j) {
  if (j >= tl.xgrids.size() || l >= tl.xgrids[j].size()) throw IndexError("box_measure: index out of range");
  const AlgebraKind& kind = tl.cone.kind;
  const int n = kind.dim();
  const double log_det = kind.n_over_r() * std::log(determinant(tl.cone.points[j]));
  return unit_ball_volume(n) * std::pow(tl.cone.delta / tl.R, n) * std::exp(log_det);
}

bool WhitneyReport::passed() const {
  return cone_separation_violations == 0 && cone_coverage_misses == 0 && x_separation_violations == 0 &&
         x_coverage_misses == 0 && inclusion_violations == 0;
}

WhitneyReport verify_whitney(const TubeLattice& tl, int samples, std::uint64_t seed) {
  const ConeLattice& cone = tl.cone;
  const AlgebraKind& kind = cone.kind;
  const int n = kind.dim();
  const double delta = cone.delta;
  const double sep = delta / tl.R;

  WhitneyReport rep;
  rep.delta = delta;
  rep.R = tl.R;
  rep.cone_points = cone.points.size();
  rep.tube_points = tl.size();
  rep.samples = samples;

  // Cone separation over all pairs with ‖Δη‖ < 2δ; other pairs are ≥ 2δ apart
  // because exp is distance non-decreasing from e.
  std::vector<Eigen::VectorXd> etas;
  SpatialHash chash(2.0 * delta);
  for (std::size_t j = 0; j < cone.points.size(); ++j) {
    etas.push_back(log_coords(cone.points[j]));
    chash.insert(etas.back(), static_cast<int>(j));
  }
  rep.cone_min_separation = 2.0 * delta;
  for (std::size_t j = 0; j < cone.points.size(); ++j) {
    chash.for_neighbours(etas[j], [&](int m) {
      if (static_cast<std::size_t>(m) <= j) return;
      const double d = invariant_distance(cone.points[j], cone.points[static_cast<std::size_t>(m)]);
      rep.cone_min_separation = std::min(rep.cone_min_separation, d);
      if (d < delta * (1.0 - kSeparationSlack)) ++rep.cone_separation_violations;
    });
  }

  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd eta = random_ball_vector(n, cone.D, rng);
    const Element y = exp(from_orthonormal(kind, eta));
    int count = 0;
    bool covered = false;
    chash.for_neighbours(eta, [&](int m) {
      if ((etas[static_cast<std::size_t>(m)] - eta).norm() > delta) return;
      const double d = invariant_distance(cone.points[static_cast<std::size_t>(m)], y);
      if (d <= delta) covered = true;
      if (d < delta) ++count;
    });
    if (!covered) ++rep.cone_coverage_misses;
    // Balls reaching past the region boundary undercount; only interior samples count.
    if (eta.norm() <= cone.D - delta) {
      ++rep.overlap_samples;
      rep.max_overlap = std::max(rep.max_overlap, count);
    }
  }

  // x-grids: separation by exhaustive neighbour pairs, then sampled coverage and overlap.
  std::vector<XGridIndex> xidx;
  xidx.reserve(cone.points.size());
  for (std::size_t j = 0; j < cone.points.size(); ++j) {
    xidx.emplace_back(cone.transforms[j], sep);
    XGridIndex& ix = xidx.back();
    for (std::size_t l = 0; l < tl.xgrids[j].size(); ++l) {
      ix.xi.push_back(ix.M * tl.xgrids[j][l]);
      ix.hash.insert(ix.xi.back(), static_cast<int>(l));
    }
    for (std::size_t l = 0; l < ix.xi.size(); ++l) {
      ix.hash.for_neighbours(ix.xi[l], [&](int m) {
        if (static_cast<std::size_t>(m) <= l) return;
        if ((ix.xi[l] - ix.xi[static_cast<std::size_t>(m)]).norm() < sep * (1.0 - kSeparationSlack))
          ++rep.x_separation_violations;
      });
    }
  }

  std::uniform_int_distribution<std::size_t> pick_j(0, cone.points.size() - 1);
  for (int s = 0; s < samples; ++s) {
    const std::size_t j = pick_j(rng);
    const Eigen::VectorXd x = random_box_point(n, tl.xbox, rng);
    const XGridIndex& ix = xidx[j];
    const Eigen::VectorXd xi = ix.M * x;
    int count = 0;
    bool covered = false;
    ix.hash.for_neighbours(xi, [&](int m) {
      const double d = (ix.xi[static_cast<std::size_t>(m)] - xi).norm();
      if (d <= sep) covered = true;
      if (d < sep) ++count;
    });
    if (!covered) ++rep.x_coverage_misses;
    rep.x_max_overlap = std::max(rep.x_max_overlap, count);
  }
  rep.coverage_misses = rep.cone_coverage_misses + rep.x_coverage_misses;

  // Points of I_{l,j} + iB_{δ/R}(y_j) stay within quasi-distance δ of z_{l,j}.
  const std::vector<LatticeSite> sites = lattice_sites(tl);
  if (!sites.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
    const int inclusion_samples = std::max(1, samples / 10);
    for (int s = 0; s < inclusion_samples; ++s) {
      const LatticeSite site = sites[pick(rng)];
      const ConeTransform& g = cone.transforms[site.j];
      const Eigen::VectorXd dx = g.apply(from_orthonormal(kind, random_ball_vector(n, sep, rng)).coeffs());
      const Element y = ball_point(cone.points[site.j], random_ball_vector(n, sep, rng));
      const TubePoint z(tl.xgrids[site.j][site.l] + dx, y);
      const double rho = quasi_distance(z, tl.point(site.l, site.j));
      rep.constants.eta1 = std::max(rep.constants.eta1, rho / delta);
      if (rho > delta) ++rep.inclusion_violations;
    }
  }

  rep.gamma = inclusion_gamma(kind, delta, 200, seed);
  rep.constants.eta2 = rep.gamma;
  rep.constants.N_measured = rep.x_max_overlap;

  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const LatticeSite& site : sites) {
    const double c = box_measure(tl, site.l, site.j) /
                     std::pow(determinant(cone.points[site.j]), kind.n_over_r());
    lo = first ? c : std::min(lo, c);
    hi = first ? c : std::max(hi, c);
    first = false;
  }
  rep.measure_constant = hi;
  rep.measure_constant_spread = first ? 0.0 : (hi - lo) / hi;
  return rep;
}

std::string lattice_to_json(const TubeLattice& tl) {
  nlohmann::json j;
  j["version"] = 1;
  j["kind"] = tl.cone.kind.name();
  j["delta"] = tl.cone.delta;
  j["R"] = tl.R;
  j["D"] = tl.cone.D;
  j["xbox"] = tl.xbox;
  nlohmann::json pts = nlohmann::json::array();
  for (const Element& y : tl.cone.points)
    pts.push_back(std::vector<double>(y.coeffs().data(), y.coeffs().data() + y.coeffs().size()));
  j["points"] = pts;
  nlohmann::json grids = nlohmann::json::array();
  for (const auto& g : tl.xgrids) {
    nlohmann::json row = nlohmann::json::array();
    for (const Eigen::VectorXd& x : g) row.push_back(std::vector<double>(x.data(), x.data() + x.size()));
    grids.push_back(row);
  }
  j["xgrids"] = grids;
  return j.dump();
}

TubeLattice lattice_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) throw DomainError("lattice document: unsupported version");
    const AlgebraKind kind = AlgebraKind::parse(j.at("kind").get<std::string>());
    const int n = kind.dim();
    auto to_vec = [n](const nlohmann::json& a) {
      const std::vector<double> v = a.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != n) throw DomainError("lattice document: coordinate length mismatch");
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), n));
    };
    TubeLattice tl;
    tl.cone.kind = kind;
    tl.cone.delta = j.at("delta").get<double>();
    tl.cone.D = j.at("D").get<double>();
    tl.R = j.at("R").get<double>();
    tl.xbox = j.at("xbox").get<double>();
    for (const auto& p : j.at("points")) {
      Element y(kind, to_vec(p));
      if (!contains(y)) throw DomainError("lattice document: point outside the cone");
      tl.cone.transforms.push_back(transform_to(y));
      tl.cone.points.push_back(std::move(y));
    }
    const auto& grids = j.at("xgrids");
    if (grids.size() != tl.cone.points.size()) throw DomainError("lattice document: xgrids/points mismatch");
    for (const auto& row : grids) {
      std::vector<Eigen::VectorXd> g;
      for (const auto& x : row) g.push_back(to_vec(x));
      tl.xgrids.push_back(std::move(g));
    }
    if (tl.cone.points.empty()) throw DomainError("lattice document: no points");
    return tl;
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("lattice document: ") + ex.what());
  }
}

}  // namespace symcone
