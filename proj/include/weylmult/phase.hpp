// Copyright 2026 The weylmult Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Polynomial phases modulo one.
//
// Coefficients are stored as 128-bit fixed-point fractions raw / 2^128.
// Multiplying such a fraction by an integer modulo 1 is plain wrapping
// multiplication of `raw`, so {F(n)} is computed exactly relative to the
// stored coefficients; the only error is the 2^-128 rounding of each
// coefficient, amplified by n^j.

#ifndef WEYLMULT_PHASE_HPP
#define WEYLMULT_PHASE_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/errors.hpp"
#include "weylmult/parallel.hpp"

namespace weylmult {

using bigint = boost::multiprecision::cpp_int;

namespace detail {

inline bigint u128_to_big(u128 v) {
  bigint b = static_cast<u64>(v >> 64);
  b <<= 64;
  b += static_cast<u64>(v);
  return b;
}

inline u128 big_to_u128(const bigint& b) {
  const bigint mask = (bigint(1) << 64) - 1;
  const u64 lo = static_cast<u64>(b & mask);
  const u64 hi = static_cast<u64>((b >> 64) & mask);
  return (static_cast<u128>(hi) << 64) | lo;
}

}  // namespace detail

/// A point of R/Z stored as raw / 2^128.
class FracFixed {
 public:
  constexpr FracFixed() = default;
  constexpr explicit FracFixed(u128 raw) : raw_(raw) {}

  /// floor({num/den} * 2^128).
  static FracFixed from_rational(i64 num, u64 den) {
    detail::require<ParameterError>(den >= 1, "rational with zero denominator");
    const u64 r = mod_floor(num, den);
    bigint scaled = (bigint(r) << 128) / den;
    return FracFixed(detail::big_to_u128(scaled));
  }

  /// Exact binary expansion of {x}, truncated at 2^-128.
  static FracFixed from_double(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    const double hi = std::floor(std::ldexp(f, 64));
    const double lo = std::ldexp(std::ldexp(f, 64) - hi, 64);
    return FracFixed((static_cast<u128>(static_cast<u64>(hi)) << 64) |
                     static_cast<u64>(lo));
  }

  constexpr u128 raw() const { return raw_; }

  double to_double() const {
    return std::ldexp(static_cast<double>(static_cast<u64>(raw_ >> 64)), -64) +
           std::ldexp(static_cast<double>(static_cast<u64>(raw_)), -128);
  }

  /// Representative in [-1/2, 1/2).
  double centered() const {
    const i128 s = static_cast<i128>(raw_);
    const i64 hi = static_cast<i64>(s >> 64);
    return std::ldexp(static_cast<double>(hi), -64) +
           std::ldexp(static_cast<double>(static_cast<u64>(raw_)), -128);
  }

  /// floor(value * m) for integer m, exact.
  u64 scaled_floor(u64 m) const {
    const u128 hi = static_cast<u128>(static_cast<u64>(raw_ >> 64)) * m;
    const u128 lo = static_cast<u128>(static_cast<u64>(raw_)) * m;
    return static_cast<u64>((hi + (lo >> 64)) >> 64);
  }

  friend constexpr FracFixed operator+(FracFixed a, FracFixed b) {
    return FracFixed(a.raw_ + b.raw_);
  }
  friend constexpr FracFixed operator-(FracFixed a, FracFixed b) {
    return FracFixed(a.raw_ - b.raw_);
  }
  constexpr FracFixed operator-() const { return FracFixed(u128{0} - raw_); }
  friend constexpr FracFixed operator*(FracFixed a, u64 n) {
    return FracFixed(a.raw_ * n);
  }
  friend constexpr FracFixed operator*(FracFixed a, i64 n) {
    return FracFixed(a.raw_ * static_cast<u128>(static_cast<i128>(n)));
  }
  FracFixed& operator+=(FracFixed o) {
    raw_ += o.raw_;
    return *this;
  }
  friend constexpr bool operator==(FracFixed, FracFixed) = default;

 private:
  u128 raw_ = 0;
};

/// e(x) = exp(2 pi i x).
inline cplx unit_exp(FracFixed x) {
  const double a = 2.0 * std::numbers::pi * x.centered();
  return {std::cos(a), std::sin(a)};
}

/// e(num/den) from an exact rational angle.
inline cplx unit_exp_rational(i64 num, u64 den) {
  u64 r = mod_floor(num, den);
  // fold into [-1/2, 1/2) before the trig call
  const double c = (2 * r >= den) ? -static_cast<double>(den - r) / den
                                  : static_cast<double>(r) / den;
  const double a = 2.0 * std::numbers::pi * c;
  return {std::cos(a), std::sin(a)};
}

/// F(x) = alpha_d x^d + ... + alpha_1 x, coefficients kept modulo 1.
class PolyPhase {
 public:
  PolyPhase() : coeffs_(1) {}
  explicit PolyPhase(std::vector<FracFixed> coeffs, std::string label = {})
      : coeffs_(std::move(coeffs)), label_(std::move(label)) {
    detail::require<ParameterError>(!coeffs_.empty(),
                                    "phase polynomial needs degree >= 1");
  }

  /// The zero phase, written as degree 1 with alpha_1 = 0.
  static PolyPhase zero() { return PolyPhase({FracFixed{}}, "0"); }

  int degree() const { return static_cast<int>(coeffs_.size()); }
  /// alpha_j for 1 <= j <= degree.
  FracFixed coeff(int j) const { return coeffs_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<FracFixed>& coeffs() const { return coeffs_; }
  const std::string& label() const { return label_; }

  /// h * F, coefficientwise.
  PolyPhase scaled(i64 h) const {
    std::vector<FracFixed> c = coeffs_;
    for (auto& a : c) a = a * h;
    return PolyPhase(std::move(c), label_);
  }

  bool is_zero() const {
    for (auto a : coeffs_)
      if (a.raw() != 0) return false;
    return true;
  }

 private:
  std::vector<FracFixed> coeffs_;
  std::string label_;
};

inline constexpr u64 kMaxPhaseArgument = u64{1} << 40;

/// {F(n)} by Horner's rule in the raw ring Z/2^128.
inline FracFixed frac_eval(const PolyPhase& F, u64 n) {
  detail::require<ParameterError>(n >= 1 && n <= kMaxPhaseArgument,
                                  "phase argument n must lie in [1, 2^40]");
  const int d = F.degree();
  if (d > 1) {
    detail::require<ParameterError>(
        static_cast<double>(d) * std::log2(static_cast<double>(n)) < 100.0,
        "n^d exceeds 2^100: fixed-point phase error budget exhausted");
  }
  FracFixed acc{};
  for (int j = d; j >= 1; --j) acc = (acc + F.coeff(j)) * n;
  return acc;
}

/// Unchecked variant for hot loops whose range was validated once.
inline FracFixed frac_eval_unchecked(const PolyPhase& F, u64 n) {
  FracFixed acc{};
  for (int j = F.degree(); j >= 1; --j) acc = (acc + F.coeff(j)) * n;
  return acc;
}

/// Throws if frac_eval would refuse some argument in [1, n_max].
inline void check_phase_range(const PolyPhase& F, u64 n_max) {
  if (n_max >= 1) (void)frac_eval(F, n_max);
}

inline cplx phase_exp(const PolyPhase& F, u64 n) { return unit_exp(frac_eval(F, n)); }

// ---------------------------------------------------------------------------
// Parsing of coefficients and phase expressions.
//
// Real constants are evaluated to 192 fractional bits (with integer part)
// before being reduced modulo 1, so integer multiples and integer divisions
// such as "3*sqrt:2/7" are reduced only once.

namespace detail {

inline constexpr unsigned kParseBits = 192;

// Pi to 50 decimals.
inline constexpr std::string_view kPiDigits =
    "3.14159265358979323846264338327950288419716939937510";

struct ScaledReal {
  bigint v;  // value * 2^kParseBits, signed
};

inline ScaledReal parse_decimal(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  bigint digits = 0;
  unsigned frac_digits = 0;
  bool seen_dot = false, any = false;
  for (char c : s) {
    if (c == '.') {
      require<ParameterError>(!seen_dot, "malformed decimal literal");
      seen_dot = true;
      continue;
    }
    require<ParameterError>(std::isdigit(static_cast<unsigned char>(c)) != 0,
                            "malformed decimal literal '" + std::string(s) + "'");
    digits = digits * 10 + (c - '0');
    any = true;
    if (seen_dot) ++frac_digits;
  }
  require<ParameterError>(any, "empty numeric literal");
  bigint scaled = (digits << kParseBits) / boost::multiprecision::pow(bigint(10), frac_digits);
  return {neg ? bigint(-scaled) : scaled};
}

inline ScaledReal parse_constant(std::string_view tok) {
  if (tok == "pi") return parse_decimal(kPiDigits);
  if (tok == "golden") {
    bigint s5 = boost::multiprecision::sqrt(bigint(bigint(5) << (2 * kParseBits)));
    return {((bigint(1) << kParseBits) + s5) / 2};
  }
  if (tok.starts_with("sqrt:")) {
    auto arg = tok.substr(5);
    require<ParameterError>(!arg.empty(), "sqrt: needs an integer argument");
    bigint k = 0;
    for (char c : arg) {
      require<ParameterError>(std::isdigit(static_cast<unsigned char>(c)) != 0,
                              "sqrt: argument must be a non-negative integer");
      k = k * 10 + (c - '0');
    }
    return {boost::multiprecision::sqrt(bigint(k << (2 * kParseBits)))};
  }
  return parse_decimal(tok);
}

inline FracFixed reduce_mod1(const bigint& scaled) {
  const bigint one = bigint(1) << kParseBits;
  bigint r = scaled % one;
  if (r < 0) r += one;
  return FracFixed(big_to_u128(r >> (kParseBits - 128)));
}

}  // namespace detail

/// Parses a real coefficient ("0.375", "-1.25", "1/3", "sqrt:2", "golden",
/// "pi") into its fractional part.
inline FracFixed parse_coefficient(std::string_view s) {
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = detail::parse_constant(s.substr(0, slash));
    auto den = detail::parse_decimal(s.substr(slash + 1));
    detail::require<ParameterError>(den.v != 0, "division by zero in coefficient");
    return detail::reduce_mod1((num.v << detail::kParseBits) / den.v);
  }
  return detail::reduce_mod1(detail::parse_constant(s).v);
}

/// Parses a phase such as "sqrt:2*x^2 + golden*x", "x/2", "0.25*x - 1/3*x^3"
/// or "0". Each term is a product of one monomial x^k (k >= 1) with numeric
/// factors; '/' divides by an integer literal.
inline PolyPhase parse_phase(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  detail::require<ParameterError>(!s.empty(), "empty phase expression");
  if (s == "0") return PolyPhase::zero();

  std::map<int, bigint> by_power;
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
      neg = s[pos] == '-';
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string_view term(s.data() + pos, end - pos);
    detail::require<ParameterError>(!term.empty(), "empty term in phase '" + s + "'");

    bigint coef = bigint(1) << detail::kParseBits;
    int power = 0;
    std::size_t i = 0;
    char op = '*';
    while (i <= term.size()) {
      std::size_t j = i;
      while (j < term.size() && term[j] != '*' && term[j] != '/') ++j;
      std::string_view factor = term.substr(i, j - i);
      detail::require<ParameterError>(!factor.empty(),
                                      "malformed term '" + std::string(term) + "'");
      if (factor[0] == 'x') {
        detail::require<ParameterError>(op == '*', "cannot divide by x");
        int k = 1;
        if (factor.size() > 1) {
          detail::require<ParameterError>(factor[1] == '^' && factor.size() > 2,
                                          "malformed monomial '" + std::string(factor) + "'");
          k = std::stoi(std::string(factor.substr(2)));
          detail::require<ParameterError>(k >= 1 && k <= 16, "monomial exponent out of range");
        }
        power += k;
      } else if (op == '*') {
        coef = (coef * detail::parse_constant(factor).v) >> detail::kParseBits;
      } else {
        auto den = detail::parse_decimal(factor);
        detail::require<ParameterError>(den.v != 0, "division by zero in phase");
        coef = (coef << detail::kParseBits) / den.v;
      }
      if (j >= term.size()) break;
      op = term[j];
      i = j + 1;
    }
    detail::require<ParameterError>(power >= 1,
                                    "constant terms are not allowed in a phase: '" +
                                        std::string(term) + "'");
    by_power[power] += neg ? bigint(-coef) : coef;
    pos = end;
  }
  const int d = by_power.rbegin()->first;
  std::vector<FracFixed> c(static_cast<std::size_t>(d));
  for (const auto& [k, v] : by_power) c[static_cast<std::size_t>(k - 1)] = detail::reduce_mod1(v);
  return PolyPhase(std::move(c), std::string(text));
}

// ---------------------------------------------------------------------------
// Rational approximation by continued fractions.

/// Certificate |alpha_ell - a/q| <= 1/(qR) with q <= R, gcd(a, q) = 1.
struct RationalApprox {
  int ell = 1;
  i64 a = 0;
  u64 q = 1;
  double R = 1.0;
  double err = 0.0;            ///< |alpha - a/q|
  double residual_beta = 0.0;  ///< alpha - a/q (alpha taken in [0, 1))
  /// Denominator of the following convergent, which exceeds R; 0 when the
  /// expansion terminated (err is then exactly 0).
  u64 next_q = 0;
};

/// Cap on R: beyond ~2^62 the 2^-128 coefficient resolution no longer
/// determines the convergents.
inline constexpr double kMaxApproxR = 4.0e18;

namespace detail {

// Convergents of num/den (0 <= num < den) with denominator <= R.
inline RationalApprox continued_fraction_approx(bigint num, bigint den, double R) {
  require<ParameterError>(R >= 1.0, "dirichlet_approx needs R >= 1");
  const double Rc = std::min(R, kMaxApproxR);
  const bigint Rint = bigint(static_cast<u64>(std::floor(Rc)));
  const bigint alpha_num = num, alpha_den = den;
  // h/k is the current convergent, h_prev/k_prev the one before it
  const bigint a0 = num / den;
  bigint h_prev = 1, k_prev = 0;
  bigint h = a0, k = 1;
  bigint x = num - a0 * den, y = den;  // remaining fraction x / y
  bigint next = 0;
  while (x != 0) {
    // next partial quotient of y / x
    const bigint ai = y / x;
    const bigint h_new = ai * h + h_prev;
    const bigint k_new = ai * k + k_prev;
    if (k_new > Rint) {
      next = k_new;
      break;
    }
    h_prev = h;
    k_prev = k;
    h = h_new;
    k = k_new;
    const bigint rem = y - ai * x;
    y = x;
    x = rem;
  }
  RationalApprox out;
  out.a = static_cast<i64>(h);
  out.q = static_cast<u64>(k);
  out.R = R;
  out.next_q = next == 0 ? 0 : static_cast<u64>(boost::multiprecision::min(next, bigint(~u64{0})));
  const bigint diff = alpha_num * k - h * alpha_den;  // (alpha - a/q) * q * den
  const double scale = static_cast<double>(k) * static_cast<double>(alpha_den);
  out.residual_beta = static_cast<double>(diff) / scale;
  out.err = std::fabs(out.residual_beta);
  return out;
}

}  // namespace detail

/// Last continued-fraction convergent a/q of alpha with q <= R.
inline RationalApprox dirichlet_approx(FracFixed alpha, double R, int ell = 1) {
  auto out = detail::continued_fraction_approx(detail::u128_to_big(alpha.raw()),
                                               bigint(1) << 128, R);
  out.ell = ell;
  return out;
}

inline RationalApprox dirichlet_approx(double alpha, double R, int ell = 1) {
  return dirichlet_approx(FracFixed::from_double(alpha), R, ell);
}

/// Exact rational input num/den, reduced modulo 1.
inline RationalApprox dirichlet_approx_rational(i64 num, u64 den, double R, int ell = 1) {
  detail::require<ParameterError>(den >= 1, "zero denominator");
  auto out = detail::continued_fraction_approx(bigint(mod_floor(num, den)), bigint(den), R);
  out.ell = ell;
  return out;
}

/// Exact check of the convergent certificate against the stored alpha:
/// q <= R, gcd(a, q) = 1 and |alpha - a/q| * q * next_q <= 1.
inline bool certificate_holds(FracFixed alpha, const RationalApprox& ap) {
  if (static_cast<double>(ap.q) > std::min(ap.R, kMaxApproxR)) return false;
  if (std::gcd(static_cast<u64>(ap.a < 0 ? -ap.a : ap.a), ap.q) != 1) return false;
  const bigint one = bigint(1) << 128;
  bigint diff = detail::u128_to_big(alpha.raw()) * ap.q - bigint(ap.a) * one;
  if (diff < 0) diff = -diff;
  if (ap.next_q == 0) return diff == 0;
  if (static_cast<double>(ap.next_q) <= std::min(ap.R, kMaxApproxR)) return false;
  return diff * ap.next_q <= one;
}

struct ArcClassification {
  std::vector<RationalApprox> per_ell;  ///< index ell-1
  double threshold = 0.0;               ///< (log N)^B
  bool minor = false;
  std::string label() const { return minor ? "minor" : "major"; }
};

/// Approximates every alpha_ell with R = N^ell / (log N)^B and labels the
/// phase "minor" when some q_ell >= (log N)^B.
inline ArcClassification classify_arc(const PolyPhase& F, u64 N, double B) {
  detail::require<ParameterError>(N >= 16, "classify_arc needs N >= 16");
  detail::require<ParameterError>(B > 0, "classify_arc needs B > 0");
  ArcClassification out;
  const double logN = std::log(static_cast<double>(N));
  out.threshold = std::pow(logN, B);
  for (int ell = 1; ell <= F.degree(); ++ell) {
    const double R = std::max(1.0, std::pow(static_cast<double>(N), ell) / out.threshold);
    auto ap = dirichlet_approx(F.coeff(ell), R, ell);
    if (static_cast<double>(ap.q) >= out.threshold) out.minor = true;
    out.per_ell.push_back(ap);
  }
  return out;
}

}  // namespace weylmult

#endif  // WEYLMULT_PHASE_HPP
