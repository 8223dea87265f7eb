/** @file
 *  @brief Euclidean Jordan algebras for the half-line, Lorentz and real
 *         symmetric-matrix families: products, spectra, principal minors
 *         and generalized power functions.
 */
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace symcone {

enum class Family { rank1, lorentz, sym };

/// Algebra descriptor. Lorentz(n) has rank 2 and dimension n; SymMatrices(m)
/// has rank m and dimension m(m+1)/2.
class AlgebraKind {
 public:
  static AlgebraKind rank1();
  static AlgebraKind lorentz(int n);
  static AlgebraKind sym(int m);
  /// Accepts "rank1", "lorentzN" and "symM".
  static AlgebraKind parse(const std::string& name);

  Family family() const { return family_; }
  int param() const { return param_; }
  int rank() const;
  int dim() const;
  double n_over_r() const { return static_cast<double>(dim()) / rank(); }
  /// Common dimension of the off-diagonal Peirce spaces (0 when r = 1).
  int peirce_dim() const;
  std::string name() const;

  bool operator==(const AlgebraKind&) const = default;

 private:
  AlgebraKind(Family f, int p) : family_(f), param_(p) {}
  Family family_;
  int param_;
};

/// Point of V. SymMatrices coefficients list the upper triangle row by row,
/// off-diagonal entries stored once.
class Element {
 public:
  Element(AlgebraKind kind, Eigen::VectorXd coeffs);

  static Element identity(const AlgebraKind& kind);
  static Element zero(const AlgebraKind& kind);
  /// SymMatrices(m) element from a symmetric m×m matrix (upper triangle read).
  static Element from_matrix(const Eigen::MatrixXd& m);

  const AlgebraKind& kind() const { return kind_; }
  const Eigen::VectorXd& coeffs() const { return c_; }
  double operator[](int i) const { return c_[i]; }
  int dim() const { return static_cast<int>(c_.size()); }
  /// Symmetric matrix view; SymMatrices only.
  Eigen::MatrixXd matrix() const;

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(double a) const;
  friend Element operator*(double a, const Element& x) { return x * a; }

 private:
  AlgebraKind kind_;
  Eigen::VectorXd c_;
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;  ///< descending, length r
  std::vector<Element> frame;   ///< orthogonal idempotents summing to e
};

/// Index of entry (i, j), i <= j, in the SymMatrices(m) coefficient list.
int sym_index(int m, int i, int j);

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Symmetric matrix assembled from a coefficient vector of SymMatrices(m).
template <class T>
Mat<T> sym_matrix(int m, const Vec<T>& c);

Element product(const Element& a, const Element& b);
Element quadratic_rep(const Element& a, const Element& x);
/// Coefficient matrix of x ↦ a∘x.
Eigen::MatrixXd multiplication_matrix(const Element& a);
/// Coefficient matrix of P(a) = 2L(a)² − L(a²).
Eigen::MatrixXd quadratic_matrix(const Element& a);

Spectrum spectral(const Element& x);
/// Eigenvalues only, descending.
Eigen::VectorXd eigenvalues(const Element& x);
/// Σ f(λ_k) f_k.
Element spectral_apply(const Element& x, const std::function<double(double)>& f);

Eigen::VectorXd minors(const Element& x);
Eigen::VectorXd rotated_minors(const Element& x);
/// Minors of a real or complexified coefficient vector (polynomial formulas).
template <class T>
Vec<T> minors_of(const AlgebraKind& kind, const Vec<T>& c);
template <class T>
Vec<T> rotated_minors_of(const AlgebraKind& kind, const Vec<T>& c);

double determinant(const Element& x);
/// log Δ_s(x) = Σ_k (s_k − s_{k+1}) log Δ_k(x), s_{r+1} = 0. Throws DomainError off Ω.
double log_power_delta(const Element& x, std::span<const double> s);
double power_delta(const Element& x, std::span<const double> s);
/// Same with respect to the rotated frame {c_r, …, c_1}.
double log_rotated_power_delta(const Element& x, std::span<const double> s);
double rotated_power_delta(const Element& x, std::span<const double> s);
/// Σ_k (s_k − s_{k+1}) L_k for precomputed log-minors L (real or complex).
template <class T>
T power_from_log_minors(std::span<const T> log_minors, std::span<const double> s);

Element inverse(const Element& x);
Element sqrt(const Element& x);
Element exp(const Element& x);
Element log(const Element& x);

double trace(const Element& x);
double trace_inner(const Element& a, const Element& b);
double norm(const Element& x);

/// Diagonal of the Gram matrix of (·|·) in coefficient coordinates.
Eigen::VectorXd trace_gram_diagonal(const AlgebraKind& kind);
/// Coordinates in a trace-orthonormal basis, and back.
Eigen::VectorXd to_orthonormal(const Element& x);
Element from_orthonormal(const AlgebraKind& kind, const Eigen::VectorXd& u);
/// Lebesgue measure of the unit coefficient cube in trace measure.
double coefficient_volume_factor(const AlgebraKind& kind);

/// Fixed frame c_1, …, c_r.
std::vector<Element> jordan_frame(const AlgebraKind& kind);
/// Σ a_k c_k.
Element frame_diagonal(const AlgebraKind& kind, std::span<const double> a);

}  // namespace symcone
