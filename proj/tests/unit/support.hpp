// Shared generators and independent oracles for the unit suites. Oracles here
// use plain matrix algebra or closed forms and never call the code under test
// for the quantity being checked.
#pragma once

#include <symcone/jordan.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace testsupport {

inline symcone::Element random_element(const symcone::AlgebraKind& kind, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd c(kind.dim());
  for (int i = 0; i < c.size(); ++i) c[i] = g(rng);
  return symcone::Element(kind, c);
}

/// exp of a random element: always in Ω, condition controlled by `scale`.
inline symcone::Element random_cone_point(const symcone::AlgebraKind& kind, std::mt19937_64& rng,
                                          double scale = 0.5) {
  return symcone::exp(random_element(kind, rng, scale));
}

/// Lorentz product (x0 y0 + x̄·ȳ, x0 ȳ + y0 x̄).
inline Eigen::VectorXd lorentz_product(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd out(n);
  out[0] = x.dot(y);
  out.tail(n - 1) = x[0] * y.tail(n - 1) + y[0] * x.tail(n - 1);
  return out;
}

inline Eigen::MatrixXd sym_from_upper(int m, const Eigen::VectorXd& c) {
  Eigen::MatrixXd a(m, m);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) a(i, j) = a(j, i) = c[k++];
  return a;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testsupport
