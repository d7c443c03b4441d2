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

// Roots of an irreducible integer polynomial modulo n, the counting function
// rho(n) = #{v mod n : p(v) = 0 mod n}, and the ratio sequence v/n.

#ifndef WEYLMULT_CONGRUENCE_HPP
#define WEYLMULT_CONGRUENCE_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/errors.hpp"
#include "weylmult/parallel.hpp"
#include "weylmult/phase.hpp"

namespace weylmult {

/// Root tables above this size need an explicit opt-in.
inline constexpr u64 kRootTableSoftLimit = 1000000;

enum class Irreducibility { certified_mod_prime, rational_root_checked, asserted };

inline const char* to_string(Irreducibility k) {
  switch (k) {
    case Irreducibility::certified_mod_prime: return "certified_mod_prime";
    case Irreducibility::rational_root_checked: return "rational_root_checked";
    case Irreducibility::asserted: return "asserted";
  }
  return "?";
}

struct IrreducibilityCertificate {
  Irreducibility kind = Irreducibility::asserted;
  u64 prime = 0;  ///< witness prime when kind == certified_mod_prime
};

namespace detail {

/// Coefficients c_0..c_e of a nonzero polynomial, trailing zeros removed.
inline std::vector<i64> trim(std::vector<i64> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  return c;
}

inline std::vector<i64> parse_int_poly(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  require<ParameterError>(!s.empty(), "empty polynomial");
  std::map<int, bigint> acc;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw ParameterError("polynomial '" + std::string(text) + "': " + why);
  };
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      fail("expected + or -");
    }
    bigint coef = 1;
    bool have_coef = false;
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos > start) {
      coef = bigint(s.substr(start, pos - start));
      have_coef = true;
    }
    int power = 0;
    if (pos < s.size() && s[pos] == '*') {
      if (!have_coef) fail("dangling '*'");
      ++pos;
      if (pos >= s.size() || s[pos] != 'x') fail("expected x after '*'");
    }
    if (pos < s.size() && s[pos] == 'x') {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        const std::size_t e0 = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == e0 || pos - e0 > 2) fail("bad exponent");
        power = std::stoi(s.substr(e0, pos - e0));
      }
    } else if (!have_coef) {
      fail("expected a term");
    }
    require<ParameterError>(power <= 32, "polynomial degree above 32");
    acc[power] += sign * coef;
  }
  std::vector<i64> out;
  for (const auto& [k, c] : acc) {
    require<ParameterError>(c >= std::numeric_limits<i64>::min() / 2 &&
                                c <= std::numeric_limits<i64>::max() / 2,
                            "polynomial coefficient too large");
    if (out.size() <= static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k) + 1, 0);
    out[static_cast<std::size_t>(k)] = static_cast<i64>(c);
  }
  return trim(out);
}

/// Determinant by fraction-free (Bareiss) elimination.
inline bigint bareiss_det(std::vector<std::vector<bigint>> m) {
  const std::size_t n = m.size();
  bigint sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t sw = k + 1;
      while (sw < n && m[sw][k] == 0) ++sw;
      if (sw == n) return 0;
      std::swap(m[k], m[sw]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Dense polynomial arithmetic over F_q, ascending coefficients.
using PolyQ = std::vector<u64>;

inline void trim_q(PolyQ& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyQ poly_mod_q(PolyQ a, const PolyQ& f, u64 q) {
  trim_q(a);
  const u64 inv_lc = invmod(f.back(), q);
  while (a.size() >= f.size()) {
    const u64 c = mulmod(a.back(), inv_lc, q);
    const std::size_t shift = a.size() - f.size();
    for (std::size_t i = 0; i < f.size(); ++i)
      a[shift + i] = (a[shift + i] + q - mulmod(c, f[i], q)) % q;
    trim_q(a);
  }
  return a;
}

inline PolyQ poly_mulmod_q(const PolyQ& a, const PolyQ& b, const PolyQ& f, u64 q) {
  if (a.empty() || b.empty()) return {};
  PolyQ c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], q)) % q;
  return poly_mod_q(std::move(c), f, q);
}

inline PolyQ poly_gcd_q(PolyQ a, PolyQ b, u64 q) {
  trim_q(a);
  trim_q(b);
  while (!b.empty()) {
    PolyQ r = poly_mod_q(a, b, q);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// True when f (squarefree, degree e) is irreducible over F_q: no factor
/// of degree i divides gcd(f, x^{q^i} - x) for i <= e/2.
inline bool irreducible_mod_q(const std::vector<i64>& c, u64 q) {
  PolyQ f(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) f[i] = mod_floor(c[i], q);
  const std::size_t e = f.size() - 1;
  PolyQ h{0, 1};
  for (std::size_t i = 1; i <= e / 2; ++i) {
    // h <- h^q mod f
    PolyQ base = h, res{1};
    for (u64 k = q; k > 0; k >>= 1) {
      if (k & 1) res = poly_mulmod_q(res, base, f, q);
      base = poly_mulmod_q(base, base, f, q);
    }
    h = res;
    PolyQ hx = h;
    if (hx.size() < 2) hx.resize(2, 0);
    hx[1] = (hx[1] + q - 1) % q;
    if (poly_gcd_q(f, hx, q).size() > 1) return false;
  }
  return true;
}

inline std::vector<u64> abs_divisors(bigint v) {
  if (v < 0) v = -v;
  require<ParameterError>(v <= bigint(1000000000000LL),
                          "rational root test limited to |coefficient| <= 1e12");
  return divisors(factorize_trial(static_cast<u64>(v)));
}

}  // namespace detail

/// Integer polynomial c_0 + c_1 x + ... + c_e x^e with e >= 2.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<i64> coeffs, std::string label = "")
      : c_(detail::trim(std::move(coeffs))), label_(std::move(label)) {
    detail::require<ParameterError>(c_.size() >= 3, "polynomial degree must be >= 2");
    if (label_.empty()) label_ = describe();
  }

  static IntPoly parse(std::string_view text) {
    return IntPoly(detail::parse_int_poly(text), std::string(text));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<i64>& coeffs() const { return c_; }
  i64 lead() const { return c_.back(); }
  const std::string& label() const { return label_; }

  bigint eval(const bigint& x) const {
    bigint acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  /// p(v) mod m, for m < 2^63.
  u64 eval_mod(u64 v, u64 m) const {
    u64 acc = 0;
    v %= m;
    for (std::size_t i = c_.size(); i-- > 0;) acc = (mulmod(acc, v, m) + mod_floor(c_[i], m)) % m;
    return acc;
  }

  /// p'(v) mod m.
  u64 deriv_mod(u64 v, u64 m) const {
    u64 acc = 0;
    v %= m;
    for (std::size_t i = c_.size(); i-- > 1;)
      acc = (mulmod(acc, v, m) + mod_floor(static_cast<i128>(c_[i]) * static_cast<i128>(i), m)) % m;
    return acc;
  }

  std::string describe() const {
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      const i64 a = c_[i] < 0 ? -c_[i] : c_[i];
      out += out.empty() ? (c_[i] < 0 ? "-" : "") : (c_[i] < 0 ? " - " : " + ");
      if (a != 1 || i == 0) out += std::to_string(a) + (i ? "*" : "");
      if (i >= 1) out += "x";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  std::vector<i64> c_;
  std::string label_;
};

/// Discriminant (-1)^{e(e-1)/2} Res(p, p') / lc. Zero means p has a
/// repeated factor, which is rejected.
inline bigint discriminant(const IntPoly& p) {
  const auto& c = p.coeffs();
  const std::size_t e = c.size() - 1, n = 2 * e - 1;
  std::vector<bigint> dp(e);
  for (std::size_t i = 1; i <= e; ++i) dp[i - 1] = bigint(c[i]) * static_cast<long long>(i);
  std::vector<std::vector<bigint>> m(n, std::vector<bigint>(n, 0));
  for (std::size_t r = 0; r + 1 < e; ++r)  // e-1 rows of p
    for (std::size_t t = 0; t <= e; ++t) m[r][r + t] = c[e - t];
  for (std::size_t r = 0; r < e; ++r)  // e rows of p'
    for (std::size_t t = 0; t < e; ++t) m[e - 1 + r][r + t] = dp[e - 1 - t];
  bigint res = detail::bareiss_det(std::move(m));
  bigint disc = res / bigint(p.lead());
  if ((e * (e - 1) / 2) % 2 == 1) disc = -disc;
  detail::require<ParameterError>(disc != 0,
                                  "polynomial " + p.label() + " has zero discriminant");
  return disc;
}

/// Certifies irreducibility over Q where possible; throws ParameterError on
/// a certified-reducible input.
inline IrreducibilityCertificate irreducibility_check(const IntPoly& p) {
  const auto& c = p.coeffs();
  const int e = p.degree();
  const bigint disc = discriminant(p);
  if (c[0] == 0) throw ParameterError("polynomial " + p.label() + " is reducible (root 0)");
  if (e <= 3) {
    for (u64 a : detail::abs_divisors(c[0]))
      for (u64 b : detail::abs_divisors(p.lead()))
        for (int sgn : {1, -1}) {
          // b^e p(a/b) = sum c_i a^i b^{e-i}
          bigint acc = 0, pa = 1;
          for (int i = 0; i <= e; ++i) {
            bigint pb = 1;
            for (int t = 0; t < e - i; ++t) pb *= b;
            acc += bigint(c[static_cast<std::size_t>(i)]) * pa * pb;
            pa *= sgn * static_cast<long long>(a);
          }
          if (acc == 0)
            throw ParameterError("polynomial " + p.label() + " is reducible (rational root " +
                                 (sgn < 0 ? "-" : "") + std::to_string(a) + "/" +
                                 std::to_string(b) + ")");
        }
    return {Irreducibility::rational_root_checked, 0};
  }
  const bigint bad = disc * bigint(p.lead());
  int tried = 0;
  for (u64 q = 2; tried < 25; ++q) {
    const auto fq = factorize_trial(q).factors;
    if (fq.size() != 1 || fq[0].exponent != 1) continue;
    if (bigint(bad % q) == 0) continue;
    ++tried;
    if (detail::irreducible_mod_q(c, q)) return {Irreducibility::certified_mod_prime, q};
  }
  return {Irreducibility::asserted, 0};
}

/// All v in [0, q) with p(v) = 0 mod q, by a forward-difference scan.
inline std::vector<u64> roots_mod_prime(const IntPoly& p, u64 q) {
  detail::require<ParameterError>(q >= 2 && q <= kMaxSieveLimit, "roots_mod_prime: bad modulus");
  const std::size_t e = static_cast<std::size_t>(p.degree());
  std::vector<u64> d(e + 1);
  for (std::size_t i = 0; i <= e; ++i) d[i] = p.eval_mod(i, q);
  for (std::size_t k = 1; k <= e; ++k)
    for (std::size_t i = e; i >= k; --i) d[i] = (d[i] + q - d[i - 1]) % q;
  std::vector<u64> out;
  for (u64 x = 0; x < q; ++x) {
    if (d[0] == 0) out.push_back(x);
    for (std::size_t i = 0; i < e; ++i) {
      d[i] += d[i + 1];
      if (d[i] >= q) d[i] -= q;
    }
  }
  return out;
}

/// Roots mod q^j from roots mod q^{j-1}: Newton step at simple roots,
/// exhaustive over the q candidates otherwise.
inline std::vector<u64> lift_once(const IntPoly& p, u64 q, u64 qj, const std::vector<u64>& roots) {
  const u64 qj1 = qj * q;
  std::vector<u64> out;
  for (u64 v : roots) {
    const u64 dv = p.deriv_mod(v, q);
    if (dv != 0) {
      const u64 fv = p.eval_mod(v, qj1);
      const u64 inv = invmod(p.deriv_mod(v, qj1), qj1);
      out.push_back((v + qj1 - mulmod(fv, inv, qj1)) % qj1);
    } else {
      for (u64 t = 0; t < q; ++t) {
        const u64 cand = v + t * qj;
        if (p.eval_mod(cand, qj1) == 0) out.push_back(cand);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<u64> lift_roots(const IntPoly& p, u64 q, unsigned k) {
  detail::require<ParameterError>(k >= 1, "lift_roots: k must be >= 1");
  auto roots = roots_mod_prime(p, q);
  u64 qj = q;
  for (unsigned j = 2; j <= k; ++j) {
    detail::require<ParameterError>(qj <= kMaxSieveLimit / q, "lift_roots: q^k exceeds 2^31");
    roots = lift_once(p, q, qj, roots);
    qj *= q;
  }
  return roots;
}

/// Roots of p modulo every n <= N, stored row by row.
struct RootTable {
  u64 N = 0;
  std::vector<u64> offset;  ///< roots of n occupy [offset[n], offset[n+1])
  std::vector<std::uint32_t> root_values;
  std::vector<std::uint32_t> rho_values;  ///< rho_values[0] = 0

  std::span<const std::uint32_t> roots(u64 n) const {
    return std::span<const std::uint32_t>(root_values).subspan(offset[n], offset[n + 1] - offset[n]);
  }
  std::uint32_t rho(u64 n) const { return rho_values[n]; }
  u64 rho_sum(u64 x) const { return offset[x + 1] - offset[1]; }
};

struct RootTableOptions {
  bool allow_large = false;     ///< permit N above kRootTableSoftLimit
  bool allow_asserted = false;  ///< accept polynomials not certified irreducible
};

inline RootTable build_root_table(const IntPoly& p, const PrimeSieve& sieve, u64 N,
                                  RootTableOptions opt = {}) {
  detail::require<ParameterError>(N >= 1 && N <= sieve.limit(),
                                  "build_root_table: N must lie in [1, sieve limit]");
  if (N > kRootTableSoftLimit && !opt.allow_large)
    throw ResourceError("root table for N = " + std::to_string(N) + " exceeds " +
                        std::to_string(kRootTableSoftLimit) + "; pass the large-table opt-in");
  const auto cert = irreducibility_check(p);
  detail::require<ParameterError>(cert.kind != Irreducibility::asserted || opt.allow_asserted,
                                  "irreducibility of " + p.label() +
                                      " could not be certified; pass the asserted opt-in");

  // roots modulo every prime power <= N
  std::vector<std::vector<std::uint32_t>> pp(N + 1);
  std::vector<u64> primes;
  for (u64 q : sieve.primes()) {
    if (q > N) break;
    primes.push_back(q);
  }
  parallel_for(primes.size(), [&](std::size_t t) {
    const u64 q = primes[t];
    auto r = roots_mod_prime(p, q);
    u64 qj = q;
    while (true) {
      pp[qj].assign(r.begin(), r.end());
      if (qj > N / q) break;
      r = lift_once(p, q, qj, r);
      qj *= q;
    }
  });

  RootTable out;
  out.N = N;
  out.rho_values.assign(N + 1, 0);
  if (N >= 1) out.rho_values[1] = 1;
  std::vector<u64> ppart(N + 1, 1);  ///< largest power of spf(n) dividing n
  for (u64 n = 2; n <= N; ++n) {
    const u64 q = sieve.spf(n), m = n / q;
    ppart[n] = (m % q == 0) ? ppart[m] * q : q;
    const u64 rest = n / ppart[n];
    out.rho_values[n] = static_cast<std::uint32_t>(pp[ppart[n]].size()) * out.rho_values[rest];
  }
  out.offset.assign(N + 2, 0);
  for (u64 n = 1; n <= N; ++n) out.offset[n + 1] = out.offset[n] + out.rho_values[n];
  out.root_values.assign(out.offset[N + 1], 0);

  const std::size_t blocks = (N + kBlockSize - 1) / kBlockSize;
  parallel_for(blocks, [&](std::size_t b) {
    std::vector<u64> acc, next;
    for (u64 n = 1 + b * kBlockSize; n <= std::min<u64>(N, (b + 1) * kBlockSize); ++n) {
      if (out.rho_values[n] == 0) continue;
      acc.assign(1, 0);
      u64 M = 1, rest = n;
      while (rest > 1) {
        const u64 qa = ppart[rest];
        const auto& B = pp[qa];
        const u64 inv = (M == 1) ? 0 : invmod(M % qa, qa);
        next.clear();
        for (u64 a : acc)
          for (u64 w : B) {
            const u64 t = mulmod((w + qa - a % qa) % qa, inv, qa);
            next.push_back(M == 1 ? w : a + M * t);
          }
        std::swap(acc, next);
        M *= qa;
        rest /= qa;
      }
      std::sort(acc.begin(), acc.end());
      for (std::size_t i = 0; i < acc.size(); ++i)
        out.root_values[out.offset[n] + i] = static_cast<std::uint32_t>(acc[i]);
    }
  });
  return out;
}

/// (v, n) pairs ordered by n, then v; the ratio is g = v/n.
struct RatioEntry {
  std::uint32_t v = 0, n = 0;
  FracFixed g() const { return FracFixed::from_rational(v, n); }
};

inline std::vector<RatioEntry> ratio_sequence(const RootTable& t, u64 N) {
  detail::require<ParameterError>(N <= t.N, "ratio_sequence: N exceeds table");
  std::vector<RatioEntry> out;
  out.reserve(t.rho_sum(N));
  for (u64 n = 1; n <= N; ++n)
    for (auto v : t.roots(n)) out.push_back({v, static_cast<std::uint32_t>(n)});
  return out;
}

struct RhoStats {
  u64 N = 0;
  double mean_ratio = 0.0;       ///< sum_{n<=N} rho(n) / N
  double mean_ratio_half = 0.0;  ///< same at floor(N/2)
  double second_moment_ratio = 0.0;
  double A = 0.0, D = 0.0;
  u64 mult_pairs = 0, mult_violations = 0;
  u64 submult_pairs = 0, submult_violations = 0;
  double max_log_ratio = 0.0;  ///< max over 2 <= n <= N of log rho(n) / log n
};

/// Empirical rho statistics. Pairs are drawn with a fixed-seed generator.
inline RhoStats rho_stats(const RootTable& t, const IntPoly& p, double A, double D,
                          u64 pairs = 500, u64 seed = 0) {
  detail::require<ParameterError>(t.N >= 4, "rho_stats needs N >= 4");
  RhoStats s;
  s.N = t.N;
  s.A = A;
  s.D = D;
  const double Nd = static_cast<double>(t.N);
  s.mean_ratio = static_cast<double>(t.rho_sum(t.N)) / Nd;
  s.mean_ratio_half = static_cast<double>(t.rho_sum(t.N / 2)) / static_cast<double>(t.N / 2);
  double sq = 0;
  for (u64 n = 1; n <= t.N; ++n) {
    const double r = t.rho(n);
    sq += r * r;
    if (n >= 2 && t.rho(n) > 1)
      s.max_log_ratio = std::max(s.max_log_ratio, std::log(r) / std::log(static_cast<double>(n)));
  }
  s.second_moment_ratio = sq / (Nd * std::pow(std::log(Nd), A));

  const double log_slack = std::abs(discriminant(p).convert_to<double>()) * std::log(D);
  std::mt19937_64 rng(seed);
  const u64 side = static_cast<u64>(std::sqrt(Nd));
  while (s.mult_pairs < pairs) {
    const u64 m = 1 + rng() % side, n = 1 + rng() % side;
    if (m * n > t.N) continue;
    const double lhs = t.rho(m * n), rhs = static_cast<double>(t.rho(m)) * t.rho(n);
    if (std::gcd(m, n) == 1) {
      ++s.mult_pairs;
      s.mult_violations += (lhs != rhs);
    } else {
      ++s.submult_pairs;
      if (lhs > 0 && (rhs == 0 || std::log(lhs) > log_slack + std::log(rhs) + 1e-12))
        ++s.submult_violations;
    }
  }
  return s;
}

/// (r/N) sum_{m <= N/r} chi(m) rho(rm) for a character-like callable chi.
template <class Chi>
cplx twisted_rho_mean(const RootTable& t, const Chi& chi, u64 r, u64 N) {
  detail::require<ParameterError>(r >= 1 && r <= N && N <= t.N,
                                  "twisted_rho_mean needs 1 <= r <= N <= table size");
  const u64 M = N / r;
  const cplx s = block_sum<cplx>(1, M + 1, [&](std::size_t m) {
    return chi(static_cast<u64>(m)) * static_cast<double>(t.rho(r * m));
  });
  return s * (static_cast<double>(r) / static_cast<double>(N));
}

}  // namespace weylmult

#endif  // WEYLMULT_CONGRUENCE_HPP
