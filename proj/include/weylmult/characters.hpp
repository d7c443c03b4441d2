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

// Dirichlet characters through an explicit generator decomposition of
// (Z/kZ)^x, with exact rational angles, plus mixed and complete character
// sums and the decomposition of a rational-phase sum into character sums.

#ifndef WEYLMULT_CHARACTERS_HPP
#define WEYLMULT_CHARACTERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/errors.hpp"
#include "weylmult/parallel.hpp"
#include "weylmult/phase.hpp"

namespace weylmult {

inline constexpr u64 kMaxCharacterModulus = 1000000;

/// One cyclic factor of (Z/kZ)^x living on the prime-power component
/// modulo `modulus`; dlog[x] is the exponent of x on this generator.
struct CharGenerator {
  u64 modulus = 1;
  u64 order = 1;
  u64 generator = 1;
  std::vector<std::uint32_t> dlog;
};

class CharGroup {
 public:
  explicit CharGroup(u64 k) : k_(k) {
    detail::require<ParameterError>(k >= 1, "character modulus must be >= 1");
    if (k > kMaxCharacterModulus)
      throw ResourceError("character modulus " + std::to_string(k) + " exceeds " +
                          std::to_string(kMaxCharacterModulus));
    for (auto [p, a] : factorize_trial(k).factors) {
      u64 pa = 1;
      for (unsigned t = 0; t < a; ++t) pa *= p;
      if (p == 2) {
        if (a >= 2) {
          CharGenerator minus{pa, 2, pa - 1, std::vector<std::uint32_t>(pa, 0)};
          for (u64 x = 3; x < pa; x += 4) minus.dlog[x] = 1;
          gens_.push_back(std::move(minus));
        }
        if (a >= 3) {
          CharGenerator five{pa, pa / 4, 5, std::vector<std::uint32_t>(pa, 0)};
          u64 x = 1;
          for (u64 t = 0; t < pa / 4; ++t) {
            five.dlog[x] = static_cast<std::uint32_t>(t);
            five.dlog[pa - x] = static_cast<std::uint32_t>(t);
            x = x * 5 % pa;
          }
          gens_.push_back(std::move(five));
        }
      } else {
        const u64 g = primitive_root(p, pa);
        const u64 order = pa / p * (p - 1);
        CharGenerator c{pa, order, g, std::vector<std::uint32_t>(pa, 0)};
        u64 x = 1;
        for (u64 t = 0; t < order; ++t) {
          c.dlog[x] = static_cast<std::uint32_t>(t);
          x = x * g % pa;
        }
        gens_.push_back(std::move(c));
      }
    }
    exponent_ = 1;
    for (const auto& g : gens_) exponent_ = std::lcm(exponent_, g.order);
  }

  u64 modulus() const { return k_; }
  /// Exponent of the group; every character value is e(m / exponent()).
  u64 exponent() const { return exponent_; }
  const std::vector<CharGenerator>& generators() const { return gens_; }
  u64 order() const {
    u64 o = 1;
    for (const auto& g : gens_) o *= g.order;
    return o;
  }

 private:
  static u64 primitive_root(u64 p, u64 pa) {
    const auto fac = factorize_trial(p - 1).factors;
    u64 g = 2;
    for (;; ++g) {
      bool ok = true;
      for (auto [r, e] : fac)
        if (powmod(g, (p - 1) / r, p) == 1) ok = false;
      if (ok) break;
    }
    if (pa > p && powmod(g, p - 1, p * p) == 1) g += p;
    return g;
  }

  u64 k_;
  u64 exponent_ = 1;
  std::vector<CharGenerator> gens_;
};

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharGroup> group, std::vector<u64> exps)
      : group_(std::move(group)), exps_(std::move(exps)) {
    const auto& gens = group_->generators();
    detail::require<ParameterError>(exps_.size() == gens.size(), "character exponent count mismatch");
    for (std::size_t i = 0; i < gens.size(); ++i) exps_[i] %= gens[i].order;
  }

  u64 modulus() const { return group_->modulus(); }
  const CharGroup& group() const { return *group_; }
  const std::shared_ptr<const CharGroup>& group_ptr() const { return group_; }
  const std::vector<u64>& exponents() const { return exps_; }

  bool is_principal() const {
    return std::all_of(exps_.begin(), exps_.end(), [](u64 e) { return e == 0; });
  }

  /// chi(n) = e(angle / exponent()), or nullopt when gcd(n, k) > 1.
  std::optional<u64> angle(u64 n) const {
    const u64 k = modulus();
    if (std::gcd(n % k, k) != 1 && k != 1) return std::nullopt;
    const u64 L = group_->exponent();
    u64 a = 0;
    const auto& gens = group_->generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const u64 t = gens[i].dlog[n % gens[i].modulus];
      a = (a + (exps_[i] * t % gens[i].order) * (L / gens[i].order)) % L;
    }
    return a;
  }

  cplx operator()(u64 n) const {
    const auto a = angle(n);
    if (!a) return 0.0;
    return unit_exp_rational(static_cast<i64>(*a), group_->exponent());
  }

  /// chi(n) for 0 <= n < k.
  std::vector<cplx> value_table() const {
    std::vector<cplx> v(modulus());
    for (u64 n = 0; n < modulus(); ++n) v[n] = (*this)(n);
    return v;
  }

  DirichletCharacter conj() const {
    std::vector<u64> e = exps_;
    const auto& gens = group_->generators();
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = (gens[i].order - e[i]) % gens[i].order;
    return DirichletCharacter(group_, std::move(e));
  }

  /// Position in the lexicographic enumeration.
  u64 index() const {
    u64 idx = 0;
    const auto& gens = group_->generators();
    for (std::size_t i = 0; i < gens.size(); ++i) idx = idx * gens[i].order + exps_[i];
    return idx;
  }

 private:
  std::shared_ptr<const CharGroup> group_;
  std::vector<u64> exps_;
};

/// Character number `index` in lexicographic exponent order (0 is principal).
inline DirichletCharacter character_at(std::shared_ptr<const CharGroup> g, u64 index) {
  detail::require<ParameterError>(index < g->order(), "character index out of range");
  const auto& gens = g->generators();
  std::vector<u64> e(gens.size());
  for (std::size_t i = gens.size(); i-- > 0;) {
    e[i] = index % gens[i].order;
    index /= gens[i].order;
  }
  return DirichletCharacter(std::move(g), std::move(e));
}

/// All phi(k) characters mod k, principal first, lexicographic in exponents.
inline std::vector<DirichletCharacter> enumerate_characters(u64 k) {
  auto g = std::make_shared<const CharGroup>(k);
  std::vector<DirichletCharacter> out;
  const u64 n = g->order();
  out.reserve(n);
  for (u64 i = 0; i < n; ++i) out.push_back(character_at(g, i));
  return out;
}

/// Smallest f | k such that chi(n) = 1 whenever n = 1 mod f and gcd(n, k) = 1.
inline u64 conductor(const DirichletCharacter& chi) {
  const u64 k = chi.modulus();
  for (u64 f : divisors(factorize_trial(k))) {
    bool induced = true;
    for (u64 n = 1; n <= k && induced; n += f) {
      const auto a = chi.angle(n);
      if (a && *a != 0) induced = false;
    }
    if (induced) return f;
  }
  return k;
}

/// sum_{n <= N} chi(n) e(F(n)).
inline cplx mixed_char_sum(const DirichletCharacter& chi, const PolyPhase& F, u64 N) {
  check_phase_range(F, N);
  const auto table = chi.value_table();
  const u64 k = chi.modulus();
  return block_sum<cplx>(1, N + 1, [&](std::size_t n) {
    const cplx c = table[n % k];
    if (c == cplx(0.0)) return cplx(0.0);
    return c * unit_exp(frac_eval_unchecked(F, n));
  });
}

struct CompleteSum {
  cplx value;
  double normalized = 0.0;  ///< |value| / sqrt(m)
};

/// sum_{x mod m} chi(x) e(P(x)/q) with P given by integer coefficients
/// c_0..c_e; both angles are exact rationals.
inline CompleteSum complete_twisted_sum(const DirichletCharacter& chi, const std::vector<i64>& P,
                                        u64 q) {
  detail::require<ParameterError>(q >= 1, "complete_twisted_sum needs q >= 1");
  const u64 m = chi.modulus();
  const double work = static_cast<double>(m) * std::max<std::size_t>(P.size(), 1);
  if (work > 1e8) throw ResourceError("complete_twisted_sum: m * deg exceeds 1e8");
  const u64 L = chi.group().exponent();
  CompleteSum out;
  out.value = block_sum<cplx>(0, m, [&](std::size_t x) {
    const auto a = chi.angle(x);
    if (!a) return cplx(0.0);
    u64 px = 0;
    for (std::size_t i = P.size(); i-- > 0;) px = (mulmod(px, x % q, q) + mod_floor(P[i], q)) % q;
    return unit_exp(FracFixed::from_rational(static_cast<i64>(*a), L) +
                    FracFixed::from_rational(static_cast<i64>(px), q));
  });
  out.normalized = std::abs(out.value) / std::sqrt(static_cast<double>(m));
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition T(u) = sum_{a <= k} e(F_1(a)) S(a) where F_1 has the
// rational coefficients r_l/s_l approximating alpha_l, k = lcm(s_l), and
// S(a) = sum_{n <= u, n = a mod k} f(n). With d = gcd(a, k), a = d a',
// k = d k', the residue class expands over characters mod k':
//   S(a) = (1/phi(k')) sum_psi conj(psi)(a') sum_{m <= u/d} psi(m) f(dm).

struct PretentiousOptions {
  /// Per-ell approximation range; empty means N^l / (log N)^{4r^2 + 4rA}.
  std::vector<double> R;
  /// Upper summation limit u; 0 means N.
  u64 u = 0;
};

struct PretentiousDecomposition {
  std::vector<RationalApprox> approx;  ///< r_l / s_l per ell
  u64 k = 1;
  u64 u = 0;
  std::vector<cplx> S_direct;      ///< index a in [1, k]
  std::vector<cplx> S_characters;  ///< same, via the character expansion
  cplx T_direct;                   ///< sum_{n <= u} f(n) e(F_1(n))
  cplx T_from_residues;            ///< sum_a e(F_1(a)) S_direct(a)
  cplx T_from_characters;          ///< sum_a e(F_1(a)) S_characters(a)
  double max_S_discrepancy = 0.0;
  double relative_discrepancy = 0.0;  ///< |T_direct - T_from_characters| / max(1, |T_direct|)
};

namespace detail {

/// e(F_1(n)) as an exact angle numerator modulo k.
inline u64 rational_phase_numerator(const std::vector<RationalApprox>& ap, u64 k, u64 n) {
  u64 num = 0;
  const u64 x = n % k;
  u64 pw = 1;
  for (const auto& a : ap) {
    pw = mulmod(pw, x, k);
    const u64 scale = k / a.q;
    num = (num + mulmod(mulmod(mod_floor(a.a, k), scale, k), pw, k)) % k;
  }
  return num;
}

}  // namespace detail

inline PretentiousDecomposition pretentious_decompose(std::span<const cplx> f_values,
                                                      const PolyPhase& F, u64 N, int r, double A,
                                                      const PretentiousOptions& opt = {}) {
  detail::require<ParameterError>(N >= 3 && f_values.size() >= N + 1,
                                  "pretentious_decompose: f values must cover 1..N");
  detail::require<ParameterError>(r >= 1 && A >= 0, "pretentious_decompose needs r >= 1, A >= 0");
  detail::require<ParameterError>(opt.R.empty() || opt.R.size() == static_cast<std::size_t>(F.degree()),
                                  "pretentious_decompose: one R per coefficient");
  PretentiousDecomposition out;
  out.u = opt.u == 0 ? N : opt.u;
  detail::require<ParameterError>(out.u <= N, "pretentious_decompose: u exceeds N");
  const double logN = std::log(static_cast<double>(N));
  const double B = 4.0 * r * r + 4.0 * r * A;
  for (int ell = 1; ell <= F.degree(); ++ell) {
    const double R = opt.R.empty()
                         ? std::max(1.0, std::pow(static_cast<double>(N), ell) / std::pow(logN, B))
                         : opt.R[static_cast<std::size_t>(ell - 1)];
    out.approx.push_back(dirichlet_approx(F.coeff(ell), R, ell));
  }
  u64 k = 1;
  for (const auto& a : out.approx) {
    k = (a.q > kMaxCharacterModulus) ? kMaxCharacterModulus + 1 : std::lcm(k, a.q);
    if (k > kMaxCharacterModulus) break;
  }
  if (k > kMaxCharacterModulus) {
    std::string list;
    for (const auto& a : out.approx) list += " s_" + std::to_string(a.ell) + "=" + std::to_string(a.q);
    throw ResourceError("decomposition refused: k = lcm exceeds 1e6 (" + list.substr(1) + ")");
  }
  out.k = k;
  const u64 K = out.k, u = out.u;

  // work of the character expansion: sum over d | k of phi(k/d) * u/d
  double work = 0;
  for (u64 d : divisors(factorize_trial(K)))
    work += static_cast<double>(euler_phi(factorize_trial(K / d))) * static_cast<double>(u / d + 1);
  if (work > 2e9) throw ResourceError("decomposition refused: character expansion too large");

  std::vector<cplx> phase(K + 1);
  for (u64 a = 0; a <= K; ++a)
    phase[a] = unit_exp_rational(static_cast<i64>(detail::rational_phase_numerator(out.approx, K, a)), K);

  out.T_direct = block_sum<cplx>(1, u + 1, [&](std::size_t n) { return f_values[n] * phase[n % K]; });

  out.S_direct.assign(K + 1, 0.0);
  for (u64 n = 1; n <= u; ++n) out.S_direct[(n - 1) % K + 1] += f_values[n];

  out.S_characters.assign(K + 1, 0.0);
  for (u64 d : divisors(factorize_trial(K))) {
    const u64 kp = K / d;
    const auto chars = enumerate_characters(kp);
    const u64 M = u / d;
    std::vector<cplx> inner(chars.size());
    parallel_for(chars.size(), [&](std::size_t c) {
      const auto tab = chars[c].value_table();
      cplx acc = 0;
      for (u64 m = 1; m <= M; ++m) acc += tab[m % kp] * f_values[d * m];
      inner[c] = acc;
    });
    const double inv_phi = 1.0 / static_cast<double>(chars.size());
    for (u64 a = d; a <= K; a += d) {
      if (std::gcd(a, K) != d) continue;
      const u64 ap = a / d;
      cplx acc = 0;
      for (std::size_t c = 0; c < chars.size(); ++c) acc += std::conj(chars[c](ap)) * inner[c];
      out.S_characters[a] = acc * inv_phi;
    }
  }

  for (u64 a = 1; a <= K; ++a) {
    out.T_from_residues += phase[a] * out.S_direct[a];
    out.T_from_characters += phase[a] * out.S_characters[a];
    out.max_S_discrepancy =
        std::max(out.max_S_discrepancy, std::abs(out.S_direct[a] - out.S_characters[a]));
  }
  out.relative_discrepancy =
      std::abs(out.T_direct - out.T_from_characters) / std::max(1.0, std::abs(out.T_direct));
  return out;
}

struct PretentiousWitness {
  u64 k = 1;
  u64 chi_index = 0;
  std::vector<u64> exponents;
  u64 u = 0;
  cplx value;  ///< sum_{n <= u} psi(n) f(n)
  double magnitude = 0.0;
};

/// The (k, psi, u) maximizing |sum_{n <= u} psi(n) f(n)| over k <= k_max.
/// Ties (within 1e-12 relative) keep the smallest k, then index, then u.
inline PretentiousWitness pretentious_witness(std::span<const cplx> f_values, u64 N, u64 k_max) {
  detail::require<ParameterError>(N >= 1 && f_values.size() >= N + 1,
                                  "pretentious_witness: f values must cover 1..N");
  detail::require<ParameterError>(k_max >= 1 && k_max <= 10000, "pretentious_witness needs 1 <= k_max <= 1e4");
  auto better = [](double a, double b) { return a > b * (1 + 1e-12) + 1e-12; };
  std::vector<PretentiousWitness> per_k(k_max + 1);
  parallel_for(k_max, [&](std::size_t t) {
    const u64 k = t + 1;
    const auto chars = enumerate_characters(k);
    PretentiousWitness best;
    best.k = k;
    best.magnitude = -1;
    for (const auto& chi : chars) {
      const auto tab = chi.value_table();
      cplx acc = 0;
      for (u64 n = 1; n <= N; ++n) {
        acc += tab[n % k] * f_values[n];
        const double mag = std::abs(acc);
        if (better(mag, best.magnitude)) {
          best.chi_index = chi.index();
          best.exponents = chi.exponents();
          best.u = n;
          best.value = acc;
          best.magnitude = mag;
        }
      }
    }
    per_k[k] = best;
  });
  PretentiousWitness out = per_k[1];
  for (u64 k = 2; k <= k_max; ++k)
    if (better(per_k[k].magnitude, out.magnitude)) out = per_k[k];
  return out;
}

}  // namespace weylmult

#endif  // WEYLMULT_CHARACTERS_HPP
