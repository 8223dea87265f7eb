#include "symcone/quadrature.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

namespace symcone {

void QuadratureConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (resolution < 2) throw std::invalid_argument("quadrature resolution must be >= 2");
  if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  if (refine_depth < 0) throw std::invalid_argument("refine_depth must be >= 0");
  if (!(x_half_width > 0.0)) throw std::invalid_argument("x half-width must be positive");
  if (!(omega_radius > 0.0)) throw std::invalid_argument("omega radius must be positive");
}

static GaussRule compute_gauss_legendre(int n) {
  GaussRule g;
  g.nodes.resize(static_cast<std::size_t>(n));
  g.weights.resize(static_cast<std::size_t>(n));
  const double pi = boost::math::constants::pi<double>();
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    g.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss–Legendre order must be >= 1");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

template <class T>
static T pairwise(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 8) {
    T acc{};
    for (const T& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.subspan(0, half)) + pairwise(v.subspan(half));
}

double pairwise_sum(std::span<const double> v) { return pairwise(v); }
std::complex<double> pairwise_sum(std::span<const std::complex<double>> v) { return pairwise(v); }

double integrate_cells(const CellRule& rule, const std::function<double(std::span<const double>)>& f) {
  const int d = rule.dim;
  if (d < 1 || static_cast<int>(rule.lo.size()) != d || static_cast<int>(rule.hi.size()) != d)
    throw std::invalid_argument("cell rule bounds do not match its dimension");
  const GaussRule& g = gauss_legendre(rule.order);
  const int q = rule.order;

  std::vector<double> width(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) width[a] = (rule.hi[a] - rule.lo[a]) / rule.cells;

  std::vector<double> totals;
  std::vector<int> cell(static_cast<std::size_t>(d), 0);
  std::vector<int> node(static_cast<std::size_t>(d), 0);
  std::vector<double> pt(static_cast<std::size_t>(d));
  std::vector<double> node_vals;

  bool more_cells = true;
  while (more_cells) {
    if (!rule.skip || !rule.skip(cell)) {
      double jac = 1.0;
      for (int a = 0; a < d; ++a) jac *= 0.5 * width[a];
      node_vals.clear();
      std::fill(node.begin(), node.end(), 0);
      bool more_nodes = true;
      while (more_nodes) {
        double w = jac;
        for (int a = 0; a < d; ++a) {
          const double left = rule.lo[a] + cell[a] * width[a];
          pt[a] = left + 0.5 * width[a] * (g.nodes[node[a]] + 1.0);
          w *= g.weights[node[a]];
        }
        node_vals.push_back(w * f(pt));
        int a = d - 1;
        while (a >= 0 && ++node[a] == q) node[a--] = 0;
        more_nodes = a >= 0;
      }
      totals.push_back(pairwise_sum(std::span<const double>(node_vals)));
    }
    int a = d - 1;
    while (a >= 0 && ++cell[a] == rule.cells) cell[a--] = 0;
    more_cells = a >= 0;
  }

  if (rule.permutation_seed) {
    std::mt19937_64 rng(*rule.permutation_seed);
    std::shuffle(totals.begin(), totals.end(), rng);
  }
  return pairwise_sum(std::span<const double>(totals));
}

CellRule shell_rule(const CellRule& inner) {
  CellRule out = inner;
  const int factor = (inner.cells % 2 == 0) ? 2 : 4;
  out.cells = inner.cells * factor;
  for (int a = 0; a < inner.dim; ++a) {
    const double mid = 0.5 * (inner.lo[a] + inner.hi[a]);
    const double half = inner.hi[a] - mid;
    out.lo[a] = mid - 2.0 * half;
    out.hi[a] = mid + 2.0 * half;
  }
  const int first = out.cells / 4;
  const int last = 3 * out.cells / 4;
  out.skip = [first, last](std::span<const int> idx) {
    for (int i : idx)
      if (i < first || i >= last) return false;
    return true;
  };
  return out;
}

SphereRule sphere_rule(int d, int order) {
  SphereRule s;
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  if (d == 1) {
    s.directions = {{1.0}, {-1.0}};
    s.weights = {1.0, 1.0};
    return s;
  }
  const double pi = boost::math::constants::pi<double>();
  const GaussRule& g = gauss_legendre(order);
  const int nphi = 2 * order;
  const int nth = d - 2;
  std::vector<int> idx(static_cast<std::size_t>(nth), 0);
  bool more = true;
  while (more) {
    double w = 1.0;
    double sin_prod = 1.0;
    std::vector<double> head;
    for (int i = 0; i < nth; ++i) {
      const double th = 0.5 * pi * (g.nodes[idx[i]] + 1.0);
      w *= 0.5 * pi * g.weights[idx[i]] * std::pow(std::sin(th), d - 2 - i);
      head.push_back(sin_prod * std::cos(th));
      sin_prod *= std::sin(th);
    }
    for (int k = 0; k < nphi; ++k) {
      const double phi = 2.0 * pi * (k + 0.5) / nphi;
      std::vector<double> dir = head;
      dir.push_back(sin_prod * std::cos(phi));
      dir.push_back(sin_prod * std::sin(phi));
      s.directions.push_back(std::move(dir));
      s.weights.push_back(w * 2.0 * pi / nphi);
    }
    int a = nth - 1;
    while (a >= 0 && ++idx[a] == order) idx[a--] = 0;
    more = a >= 0;
  }
  return s;
}

namespace {

boost::math::quadrature::sinh_sinh<double>& sinh_sinh_integrator() {
  static boost::math::quadrature::sinh_sinh<double> integrator(12);
  return integrator;
}

double nested_level(int level, int d, std::vector<double>& pt,
                    const std::function<double(std::span<const double>)>& f, double tol,
                    double* error) {
  auto g = [&](double t) -> double {
    pt[level] = t;
    double v;
    if (level + 1 == d) {
      v = f(pt);
    } else {
      std::vector<double> inner_pt = pt;
      v = nested_level(level + 1, d, inner_pt, f, tol, nullptr);
    }
    return std::isfinite(v) ? v : 0.0;
  };
  double err = 0.0;
  const double val = sinh_sinh_integrator().integrate(g, tol, &err);
  if (error) *error = err;
  return val;
}

}  // namespace

double integrate_real_nested(int d, const std::function<double(std::span<const double>)>& f,
                             double tolerance, double* error) {
  if (d < 1) throw std::invalid_argument("nested integration needs d >= 1");
  std::vector<double> pt(static_cast<std::size_t>(d), 0.0);
  return nested_level(0, d, pt, f, tolerance, error);
}

double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          double tolerance, double* error) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tolerance, &err);
  if (error) *error = err;
  return v;
}

}  // namespace symcone
