/** @file
 *  @brief Exact parameter calculus for mixed-norm Bergman spaces: q_s, p_s,
 *         q_s(p), projector boundedness windows, complex-interpolation
 *         arithmetic, Wolff reiteration and the reiteration equation system.
 *
 *  Everything is rational. Doubles convert exactly (they are dyadic), so a
 *  strict inequality evaluated at its boundary is false with no rounding fuzz.
 *  Terms with a zero denominator are +∞ and 1/∞ = 0.
 */
#pragma once

#include "symcone/cone.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace symcone {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a double.
Rational to_rational(double v);
/// Accepts "7", "-3/2", "0.125" (decimal taken literally), "1e-3".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& v);

/// Rational or +∞.
class ExtReal {
 public:
  ExtReal(Rational v) : v_(std::move(v)) {}
  ExtReal(long long v) : v_(v) {}
  static ExtReal infinity() { return ExtReal(Rational(0), true); }
  /// "inf" / "infinity" or a rational.
  static ExtReal parse(const std::string& text);

  bool is_inf() const { return inf_; }
  /// Throws DomainError on +∞.
  const Rational& value() const;
  double to_double() const;
  std::string str() const;

  /// 1/x for x ≥ 0 with 1/0 = ∞ and 1/∞ = 0.
  ExtReal reciprocal() const;
  /// Hölder conjugate x/(x − 1) for x ≥ 1: 1 ↦ ∞, ∞ ↦ 1.
  ExtReal conjugate() const;

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.inf_) return false;
    return b.inf_ || a.v_ < b.v_;
  }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }
  /// Products with a positive rational keep ∞.
  friend ExtReal operator*(const ExtReal& a, const Rational& c);
  friend ExtReal operator+(const ExtReal& a, const Rational& c);

 private:
  ExtReal(Rational v, bool inf) : v_(std::move(v)), inf_(inf) {}
  Rational v_;
  bool inf_ = false;
};

ExtReal min(const ExtReal& a, const ExtReal& b);
ExtReal max(const ExtReal& a, const ExtReal& b);

/// n/r, n_k and m_k as rationals.
struct RationalIndexData {
  int r = 1;
  int n = 1;
  Rational n_over_r;
  std::vector<Rational> n_k;
  std::vector<Rational> m_k;
};
RationalIndexData rational_index_data(const AlgebraKind& kind);

/// Exact weight exponents; size must equal the rank.
struct RationalParam {
  AlgebraKind kind = AlgebraKind::rank1();
  std::vector<Rational> s;

  RationalParam() = default;
  RationalParam(AlgebraKind kind, std::vector<Rational> s);
  static RationalParam from(const SpectralParam& s);
  SpectralParam to_spectral() const;
  std::string str() const;
};

/// L^{p,q}_s exponents: 1 ≤ p ≤ ∞, 1 ≤ q < ∞.
struct MixedParams {
  ExtReal p = 2;
  Rational q = 2;
  RationalParam s;

  MixedParams() = default;
  MixedParams(ExtReal p, Rational q, RationalParam s);
};

/// min_k 1 + (s_k − n_k/2)/(m_k/2).
ExtReal q_s(const RationalParam& s);
/// 1 + min_k (s_k + n/r)/(m_k − s_k)₊.
ExtReal p_s(const RationalParam& s);
/// min(p, p′)·q_s.
ExtReal q_s_p(const RationalParam& s, const ExtReal& p);

/// DD1: s_k > n_k/2 ∀k and p < p_s. NT: s_k > n/r − 1 ∀k (any p). NT is
/// reported when both branches hold.
enum class WindowCase { DD1, NT, none };
std::string to_string(WindowCase c);

struct WindowReport {
  ExtReal q_s = 0;
  ExtReal p_s = 0;
  ExtReal q_s_p = 0;
  /// Branch whose s/p hypotheses hold, independent of q.
  WindowCase which = WindowCase::none;
  bool satisfied = false;
  /// min(1/q − 1/q_s(p), 1 − 1/q_s(p) − 1/q); positive inside the q-window.
  Rational q_margin;
  /// min_k (s_k − n_k/2) and 1/p − 1/p_s; both positive iff DD1 holds.
  Rational dd1_s_margin;
  Rational dd1_p_margin;
  /// min_k (s_k − n/r + 1); positive iff NT holds.
  Rational nt_s_margin;
};
/// satisfied ⇔ q_margin > 0 and which ≠ none.
WindowReport thm11_window(const ExtReal& p, const Rational& q, const RationalParam& s);

struct PositiveWindow {
  ExtReal lower = 0;  ///< open bounds of the q-window (q > 1 branch)
  ExtReal upper = 0;
  bool t_ok = false;  ///< t_k > n/r − 1 ∀k
  bool satisfied = false;
};
/// Window for the positive operator with kernel |B_t| on L^q_s.
PositiveWindow thm45_window(const RationalParam& s, const RationalParam& t, const Rational& q);

/// 1/p, 1/q and s/q interpolate linearly. Throws DomainError unless 0 < θ < 1
/// and the two parameter sets share a cone.
MixedParams interpolate(const Rational& theta, const MixedParams& P0, const MixedParams& P1);

struct WolffParams {
  Rational xi;
  Rational psi;
};
/// ξ = θφ/(1−θ+θφ), ψ = φ/(1−θ+θφ). Throws DomainError outside (0,1)².
WolffParams wolff(const Rational& theta, const Rational& phi);

/// θ solving (1/2) = (1−θ)/q0 + θ((1−φ)/2 + φ/q1); empty when the equation is
/// degenerate.
std::optional<Rational> solve_theta(const Rational& q0, const Rational& q1, const Rational& phi);

struct ReiterationReport {
  bool admissible = false;
  bool pre_ok = false;         ///< s_k > n/r − 1, 1 ≤ q0 < q_s ≤ q1 < ∞, 1 ≤ p_i, 0 < θ, φ < 1
  bool balance_ok = false;     ///< the θ–φ balance equation holds exactly
  bool phi_bound_ok = false;   ///< φ < (1/2 − 1/q_s)/(1/2 − 1/q1)
  bool p1_window_known = false;  ///< L^{p1,q1}_s lies in the thm11 window (informational)
  Rational theta;
  Rational phi;
  Rational balance_residual;   ///< 1/2 − right-hand side
  ExtReal phi_bound = 0;
  ExtReal q_s = 0;
  WolffParams wolff;
  ExtReal p2 = 0;
  Rational q2 = 2;
  ExtReal p3 = 0;
  ExtReal q3 = 0;
};
/// Checks the reiteration hypotheses and derives (p2, 2) at ξ and (p3, q3) at
/// ψ. Without θ, θ is solved from φ.
ReiterationReport thm46_solve(const RationalParam& s, const ExtReal& p0, const Rational& q0, const ExtReal& p1,
                              const Rational& q1, std::optional<Rational> theta, const Rational& phi);

}  // namespace symcone
