#include "symcone/interp.hpp"

#include "symcone/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace symcone {

namespace {

using boost::multiprecision::cpp_int;

const Rational kHalf(1, 2);

Rational rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }

bool in_open_unit(const Rational& v) { return v > 0 && v < 1; }

cpp_int parse_digits(const std::string& digits, const std::string& text) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw DomainError("not a rational number: '" + text + "'");
  // cpp_int reads a leading 0 as an octal prefix.
  const auto first = digits.find_first_not_of('0');
  return first == std::string::npos ? cpp_int(0) : cpp_int(digits.substr(first));
}

cpp_int pow10(long n) {
  cpp_int p = 1;
  for (long i = 0; i < n; ++i) p *= 10;
  return p;
}

Rational parse_decimal(const std::string& body, const std::string& text) {
  std::string mant = body;
  long exp10 = 0;
  if (const auto e = mant.find_first_of("eE"); e != std::string::npos) {
    const std::string ex = mant.substr(e + 1);
    mant = mant.substr(0, e);
    std::size_t used = 0;
    try {
      exp10 = std::stol(ex, &used);
    } catch (const std::exception&) {
      throw DomainError("not a rational number: '" + text + "'");
    }
    if (used != ex.size() || std::labs(exp10) > 4000) throw DomainError("not a rational number: '" + text + "'");
  }
  std::string intpart = mant;
  std::string frac;
  if (const auto dot = mant.find('.'); dot != std::string::npos) {
    intpart = mant.substr(0, dot);
    frac = mant.substr(dot + 1);
  }
  if (intpart.empty() && frac.empty()) throw DomainError("not a rational number: '" + text + "'");
  const cpp_int whole = parse_digits(intpart + frac, text);
  exp10 -= static_cast<long>(frac.size());
  return exp10 >= 0 ? Rational(whole * pow10(exp10)) : Rational(whole, pow10(-exp10));
}

/// 1/x with 1/0 = ∞, for x ≥ 0 rational.
ExtReal inv(const Rational& x) { return x == 0 ? ExtReal::infinity() : ExtReal(Rational(1) / x); }

/// 1/x as a rational with 1/∞ = 0; x must be positive.
Rational recip(const ExtReal& x) {
  if (x.is_inf()) return 0;
  if (x.value() <= 0) throw DomainError("reciprocal of a non-positive exponent");
  return Rational(1) / x.value();
}

bool exponent_ok(const ExtReal& p) { return p.is_inf() || p.value() >= 1; }

void require_same_kind(const RationalParam& a, const RationalParam& b) {
  if (!(a.kind == b.kind)) throw DimensionError("parameters belong to different cones");
}

}  // namespace

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw DomainError("to_rational: non-finite value");
  int e = 0;
  const double m = std::frexp(v, &e);
  // m·2^53 is an integer since |m| < 1 has a 53-bit significand.
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational out(mant);
  if (e >= 0) {
    out *= Rational(cpp_int(1) << e);
  } else {
    out /= Rational(cpp_int(1) << -e);
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t.erase(0, 1);
  }
  if (t.empty()) throw DomainError("not a rational number: '" + text + "'");
  Rational v;
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    const cpp_int num = parse_digits(t.substr(0, slash), text);
    const cpp_int den = parse_digits(t.substr(slash + 1), text);
    if (den == 0) throw DomainError("zero denominator in '" + text + "'");
    v = Rational(num, den);
  } else {
    v = parse_decimal(t, text);
  }
  return neg ? Rational(-v) : v;
}

std::string to_string(const Rational& v) {
  std::ostringstream os;
  os << numerator(v);
  if (denominator(v) != 1) os << '/' << denominator(v);
  return os.str();
}

ExtReal ExtReal::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") return infinity();
  return ExtReal(parse_rational(text));
}

const Rational& ExtReal::value() const {
  if (inf_) throw DomainError("ExtReal: value of +inf");
  return v_;
}

double ExtReal::to_double() const {
  return inf_ ? std::numeric_limits<double>::infinity() : static_cast<double>(v_);
}

std::string ExtReal::str() const { return inf_ ? "inf" : to_string(v_); }

ExtReal ExtReal::reciprocal() const {
  if (inf_) return ExtReal(0);
  if (v_ < 0) throw DomainError("ExtReal: reciprocal of a negative value");
  return inv(v_);
}

ExtReal ExtReal::conjugate() const {
  if (inf_) return ExtReal(1);
  if (v_ < 1) throw DomainError("ExtReal: Hölder conjugate needs x >= 1");
  if (v_ == 1) return infinity();
  return ExtReal(v_ / (v_ - 1));
}

ExtReal operator*(const ExtReal& a, const Rational& c) {
  if (!(c > 0)) throw DomainError("ExtReal: scaling by a non-positive factor");
  return a.inf_ ? a : ExtReal(a.v_ * c);
}

ExtReal operator+(const ExtReal& a, const Rational& c) { return a.inf_ ? a : ExtReal(a.v_ + c); }

ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }
ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

RationalIndexData rational_index_data(const AlgebraKind& kind) {
  RationalIndexData d;
  d.r = kind.rank();
  d.n = kind.dim();
  d.n_over_r = Rational(d.n, d.r);
  for (int k = 1; k <= d.r; ++k) {
    if (d.r == 1) {
      d.n_k.emplace_back(0);
      d.m_k.emplace_back(0);
    } else {
      const Rational base = 2 * (d.n_over_r - 1) / (d.r - 1);
      d.n_k.push_back(base * (k - 1));
      d.m_k.push_back(base * (d.r - k));
    }
  }
  return d;
}

RationalParam::RationalParam(AlgebraKind kind_, std::vector<Rational> s_) : kind(kind_), s(std::move(s_)) {
  if (static_cast<int>(s.size()) != kind.rank()) throw DimensionError("RationalParam: length must equal the rank");
}

RationalParam RationalParam::from(const SpectralParam& sp) {
  std::vector<Rational> v;
  for (double x : sp.values()) v.push_back(to_rational(x));
  return {sp.kind(), std::move(v)};
}

SpectralParam RationalParam::to_spectral() const {
  std::vector<double> v;
  for (const Rational& x : s) v.push_back(static_cast<double>(x));
  return {kind, std::move(v)};
}

std::string RationalParam::str() const {
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + to_string(s[k]);
  return out;
}

MixedParams::MixedParams(ExtReal p_, Rational q_, RationalParam s_) : p(std::move(p_)), q(std::move(q_)), s(std::move(s_)) {
  if (!exponent_ok(p) || q < 1) throw DomainError("MixedParams: need 1 <= p <= inf and 1 <= q < inf");
}

ExtReal q_s(const RationalParam& s) {
  const RationalIndexData d = rational_index_data(s.kind);
  ExtReal best = ExtReal::infinity();
  for (int k = 0; k < d.r; ++k) {
    if (d.m_k[k] == 0) continue;
    best = min(best, ExtReal(1 + (s.s[k] - d.n_k[k] / 2) / (d.m_k[k] / 2)));
  }
  return best;
}

ExtReal p_s(const RationalParam& s) {
  const RationalIndexData d = rational_index_data(s.kind);
  ExtReal best = ExtReal::infinity();
  for (int k = 0; k < d.r; ++k) {
    const Rational gap = d.m_k[k] - s.s[k];
    if (gap <= 0) continue;
    best = min(best, ExtReal((s.s[k] + d.n_over_r) / gap));
  }
  return best + Rational(1);
}

ExtReal q_s_p(const RationalParam& s, const ExtReal& p) {
  if (!exponent_ok(p)) throw DomainError("q_s_p: need p >= 1");
  return q_s(s) * min(p, p.conjugate()).value();
}

std::string to_string(WindowCase c) {
  switch (c) {
    case WindowCase::DD1:
      return "DD1";
    case WindowCase::NT:
      return "NT";
    case WindowCase::none:
      break;
  }
  return "none";
}

WindowReport thm11_window(const ExtReal& p, const Rational& q, const RationalParam& s) {
  if (!exponent_ok(p) || q < 1) throw DomainError("thm11_window: need 1 <= p <= inf and 1 <= q < inf");
  const RationalIndexData d = rational_index_data(s.kind);
  WindowReport w;
  w.q_s = q_s(s);
  w.p_s = p_s(s);
  w.q_s_p = q_s_p(s, p);
  const Rational iq = Rational(1) / q;
  const Rational iqs = recip(w.q_s_p);
  w.q_margin = rmin(iq - iqs, 1 - iqs - iq);

  w.dd1_s_margin = s.s[0] - d.n_k[0] / 2;
  w.nt_s_margin = s.s[0] - d.n_over_r + 1;
  for (int k = 1; k < d.r; ++k) {
    w.dd1_s_margin = rmin(w.dd1_s_margin, s.s[k] - d.n_k[k] / 2);
    w.nt_s_margin = rmin(w.nt_s_margin, s.s[k] - d.n_over_r + 1);
  }
  w.dd1_p_margin = recip(p) - recip(w.p_s);

  if (w.nt_s_margin > 0) {
    w.which = WindowCase::NT;
  } else if (w.dd1_s_margin > 0 && w.dd1_p_margin > 0) {
    w.which = WindowCase::DD1;
  }
  w.satisfied = w.q_margin > 0 && w.which != WindowCase::none;
  return w;
}

PositiveWindow thm45_window(const RationalParam& s, const RationalParam& t, const Rational& q) {
  require_same_kind(s, t);
  if (q < 1) throw DomainError("thm45_window: need q >= 1");
  const RationalIndexData d = rational_index_data(s.kind);
  PositiveWindow w;
  w.t_ok = true;
  for (int k = 0; k < d.r; ++k) w.t_ok = w.t_ok && t.s[k] > d.n_over_r - 1;

  ExtReal lower = 1;
  ExtReal upper_min = 1;
  bool q1_ok = true;
  for (int k = 0; k < d.r; ++k) {
    const Rational sk = s.s[k] - d.n_k[k] / 2;
    const Rational tk = t.s[k] - d.n_k[k] / 2;
    // t_k > n/r − 1 ≥ n_k/2 keeps tk positive once t_ok holds.
    if (tk > 0) lower = max(lower, ExtReal((sk + d.m_k[k] / 2) / tk));
    if (d.m_k[k] != 0) upper_min = min(upper_min, ExtReal(sk / (d.m_k[k] / 2)));
    q1_ok = q1_ok && sk > 0 && t.s[k] - s.s[k] > d.m_k[k] / 2;
  }
  w.lower = lower;
  w.upper = upper_min + Rational(1);
  if (!w.t_ok) return w;
  w.satisfied = q == 1 ? q1_ok : (w.lower < ExtReal(q) && ExtReal(q) < w.upper);
  return w;
}

MixedParams interpolate(const Rational& theta, const MixedParams& P0, const MixedParams& P1) {
  if (!in_open_unit(theta)) throw DomainError("interpolate: need 0 < theta < 1");
  require_same_kind(P0.s, P1.s);
  const Rational a = 1 - theta;
  const Rational ip = a * recip(P0.p) + theta * recip(P1.p);
  const Rational iq = a / P0.q + theta / P1.q;
  const Rational q = Rational(1) / iq;
  std::vector<Rational> s;
  for (std::size_t k = 0; k < P0.s.s.size(); ++k) s.push_back(q * (a * P0.s.s[k] / P0.q + theta * P1.s.s[k] / P1.q));
  return {inv(ip), q, RationalParam(P0.s.kind, std::move(s))};
}

WolffParams wolff(const Rational& theta, const Rational& phi) {
  if (!in_open_unit(theta) || !in_open_unit(phi)) throw DomainError("wolff: need theta, phi in (0,1)");
  const Rational den = 1 - theta + theta * phi;
  return {theta * phi / den, phi / den};
}

std::optional<Rational> solve_theta(const Rational& q0, const Rational& q1, const Rational& phi) {
  const Rational a = (1 - phi) / 2 + phi / q1;
  const Rational den = a - Rational(1) / q0;
  if (den == 0) return std::nullopt;
  return (kHalf - Rational(1) / q0) / den;
}

ReiterationReport thm46_solve(const RationalParam& s, const ExtReal& p0, const Rational& q0, const ExtReal& p1,
                              const Rational& q1, std::optional<Rational> theta, const Rational& phi) {
  ReiterationReport rep;
  rep.phi = phi;
  rep.q_s = q_s(s);
  const RationalIndexData d = rational_index_data(s.kind);

  if (!theta) theta = solve_theta(q0, q1, phi);
  rep.pre_ok = theta.has_value() && exponent_ok(p0) && exponent_ok(p1) && q0 >= 1 && ExtReal(q0) < rep.q_s &&
               rep.q_s <= ExtReal(q1) && in_open_unit(phi);
  for (int k = 0; k < d.r; ++k) rep.pre_ok = rep.pre_ok && s.s[k] > d.n_over_r - 1;
  if (!theta) return rep;
  rep.theta = *theta;
  rep.pre_ok = rep.pre_ok && in_open_unit(rep.theta);

  rep.balance_residual = kHalf - ((1 - rep.theta) / q0 + rep.theta * ((1 - phi) / 2 + phi / q1));
  rep.balance_ok = rep.balance_residual == 0;

  // (1/2 − 1/q_s)/(1/2 − 1/q1); q1 = 2 leaves φ unconstrained.
  const Rational num = kHalf - recip(rep.q_s);
  const Rational den = kHalf - Rational(1) / q1;
  rep.phi_bound = den > 0 ? ExtReal(num / den) : ExtReal::infinity();
  rep.phi_bound_ok = ExtReal(phi) < rep.phi_bound;

  if (exponent_ok(p1) && q1 >= 1) rep.p1_window_known = thm11_window(p1, q1, s).satisfied;
  if (!rep.pre_ok) return rep;

  rep.wolff = wolff(rep.theta, phi);
  const Rational ip2 = (1 - rep.wolff.xi) * recip(p0) + rep.wolff.xi * recip(p1);
  rep.p2 = inv(ip2);
  rep.p3 = inv((1 - phi) * ip2 + phi * recip(p1));
  rep.q3 = inv((1 - phi) / 2 + phi / q1);
  rep.admissible = rep.balance_ok && rep.phi_bound_ok;
  return rep;
}

}  // namespace symcone
