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

// Multiplicative functions, their norm profile, and the extremal function
// showing that the N / log N saving cannot be improved.

#ifndef WEYLMULT_MULTFUNC_HPP
#define WEYLMULT_MULTFUNC_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/parallel.hpp"
#include "weylmult/phase.hpp"

namespace weylmult {

/// f(1) = 1 and f(mn) = f(m) f(n) for coprime m, n. Either completely
/// multiplicative (defined by its values at primes) or given on prime powers.
class MultiplicativeFunction {
 public:
  enum class Kind { complete, prime_power };
  using PrimeRule = std::function<cplx(u64 p)>;
  using PowerRule = std::function<std::optional<cplx>(u64 p, unsigned k)>;

  static MultiplicativeFunction complete(std::string label, PrimeRule at_prime) {
    MultiplicativeFunction f;
    f.kind_ = Kind::complete;
    f.label_ = std::move(label);
    f.prime_rule_ = std::move(at_prime);
    return f;
  }

  static MultiplicativeFunction prime_power(std::string label, PowerRule rule) {
    MultiplicativeFunction f;
    f.kind_ = Kind::prime_power;
    f.label_ = std::move(label);
    f.power_rule_ = std::move(rule);
    return f;
  }

  /// Explicit table (p, k) -> f(p^k). Entries that are needed but absent
  /// raise EvaluationError at sieve time.
  static MultiplicativeFunction table(std::string label,
                                      std::map<std::pair<u64, unsigned>, cplx> values) {
    auto shared = std::make_shared<const std::map<std::pair<u64, unsigned>, cplx>>(
        std::move(values));
    return prime_power(std::move(label), [shared](u64 p, unsigned k) -> std::optional<cplx> {
      auto it = shared->find({p, k});
      if (it == shared->end()) return std::nullopt;
      return it->second;
    });
  }

  Kind kind() const { return kind_; }
  bool completely_multiplicative() const { return kind_ == Kind::complete; }
  const std::string& label() const { return label_; }

  std::optional<cplx> at_prime_power(u64 p, unsigned k) const {
    if (kind_ == Kind::complete) return std::pow(prime_rule_(p), static_cast<int>(k));
    return power_rule_(p, k);
  }

  cplx at_prime(u64 p) const {
    if (kind_ == Kind::complete) return prime_rule_(p);
    auto v = power_rule_(p, 1);
    if (!v) throw EvaluationError("missing value f(" + std::to_string(p) + "^1)");
    return *v;
  }

 private:
  MultiplicativeFunction() = default;
  Kind kind_ = Kind::complete;
  std::string label_;
  PrimeRule prime_rule_;
  PowerRule power_rule_;
};

inline MultiplicativeFunction unit_function() {
  return MultiplicativeFunction::complete("unit", [](u64) { return cplx{1.0, 0.0}; });
}

inline MultiplicativeFunction liouville() {
  return MultiplicativeFunction::complete("liouville", [](u64) { return cplx{-1.0, 0.0}; });
}

inline MultiplicativeFunction mobius() {
  return MultiplicativeFunction::prime_power("mobius", [](u64, unsigned k) {
    return std::optional<cplx>(k == 1 ? cplx{-1.0, 0.0} : cplx{0.0, 0.0});
  });
}

/// f(n) for 0 <= n <= N (index 0 holds 0), built along smallest prime
/// factors so every composite costs one multiplication.
inline std::vector<cplx> sieve_values(const MultiplicativeFunction& f, const PrimeSieve& sieve,
                                      u64 N) {
  detail::require<ParameterError>(N <= sieve.limit(), "sieve_values: N exceeds sieve limit");
  std::vector<cplx> v(N + 1);
  if (N == 0) return v;
  v[1] = 1.0;
  if (f.completely_multiplicative()) {
    for (u64 n = 2; n <= N; ++n) {
      const u64 p = sieve.spf(n);
      v[n] = (p == n) ? f.at_prime(p) : v[p] * v[n / p];
    }
    return v;
  }
  // rest[n] = n with every factor spf(n) removed
  std::vector<std::uint32_t> rest(N + 1, 1);
  std::vector<std::uint8_t> expo(N + 1, 0);
  for (u64 n = 2; n <= N; ++n) {
    const u64 p = sieve.spf(n);
    const u64 m = n / p;
    if (m % p == 0 && m > 1) {
      expo[n] = static_cast<std::uint8_t>(expo[m] + 1);
      rest[n] = rest[m];
    } else {
      expo[n] = 1;
      rest[n] = static_cast<std::uint32_t>(m);
    }
    if (rest[n] == 1) {
      auto val = f.at_prime_power(p, expo[n]);
      if (!val)
        throw EvaluationError("missing value f(" + std::to_string(p) + "^" +
                              std::to_string(expo[n]) + ")");
      v[n] = *val;
    } else {
      v[n] = v[n / rest[n]] * v[rest[n]];
    }
  }
  return v;
}

/// Empirical versions of the size hypotheses on f.
struct NormProfile {
  double C = 0.0;           ///< max |f(p)| over primes p <= N
  double ell1_ratio = 0.0;  ///< sum |f(n)| / N
  double ell2_ratio = 0.0;  ///< sum |f(n)|^2 / (N (log N)^A)
  double A = 0.0;
  u64 N = 0;
};

inline NormProfile norm_stats(std::span<const cplx> values, const PrimeSieve& sieve, double A) {
  detail::require<ParameterError>(values.size() >= 2, "norm_stats needs N >= 1");
  NormProfile out;
  out.N = values.size() - 1;
  out.A = A;
  detail::require<ParameterError>(out.N <= sieve.limit(), "norm_stats: N exceeds sieve limit");
  double l1 = 0, l2 = 0;
  for (u64 n = 1; n <= out.N; ++n) {
    const double a = std::abs(values[n]);
    l1 += a;
    l2 += a * a;
    if (sieve.is_prime(n)) out.C = std::max(out.C, a);
  }
  const double Nd = static_cast<double>(out.N);
  out.ell1_ratio = l1 / Nd;
  out.ell2_ratio = l2 / (Nd * std::pow(std::log(Nd), A));
  return out;
}

// ---------------------------------------------------------------------------
// Extremal construction.
//
// G(z) = sum_{n<=N} z^Omega(n) e(F(n)) + sum_{N/2<p<=N} (1 - z e(F(p)))
// is a polynomial in z of degree max Omega(n) <= log2 N, so it is stored by
// its coefficients and |G| is maximized over the unit circle by a grid scan
// followed by golden-section refinement of the best grid cell.

struct ExtremalResult {
  cplx z0;
  double turn = 0.0;  ///< z0 = e(turn)
  MultiplicativeFunction f = unit_function();
  cplx sum_value;
  double lower_bound = 0.0;  ///< pi(N) - pi(N/2)
  double g_at_zero = 0.0;    ///< |G(0)|
  double g_at_z0 = 0.0;      ///< |G(z0)|
  double grid_max = 0.0;     ///< max of |G| over the initial grid
  u64 grid_size = 0;
  bool certified = true;     ///< false when grid_size < 8N
};

inline u64 default_grid_size(u64 N) { return std::max<u64>(4096, 8 * N); }

class ExtremalPolynomial {
 public:
  ExtremalPolynomial(const PolyPhase& F, const PrimeSieve& sieve, u64 N) {
    check_phase_range(F, N);
    std::vector<std::uint8_t> omega(N + 1, 0);
    for (u64 n = 2; n <= N; ++n) omega[n] = static_cast<std::uint8_t>(omega[n / sieve.spf(n)] + 1);
    coeff_.assign(omega.empty() ? 1 : *std::max_element(omega.begin(), omega.end()) + 2u, 0.0);
    for (u64 n = 1; n <= N; ++n) {
      const cplx e = phase_exp(F, n);
      coeff_[omega[n]] += e;
      if (sieve.is_prime(n) && 2 * n > N) {
        coeff_[0] += 1.0;
        coeff_[1] -= e;
        ++big_primes_;
      }
    }
  }

  cplx at(cplx z) const {
    cplx acc = 0;
    for (std::size_t k = coeff_.size(); k-- > 0;) acc = acc * z + coeff_[k];
    return acc;
  }
  cplx at_turn(double t) const {
    return at(cplx{std::cos(2 * std::numbers::pi * t), std::sin(2 * std::numbers::pi * t)});
  }
  const std::vector<cplx>& coefficients() const { return coeff_; }
  u64 big_prime_count() const { return big_primes_; }

 private:
  std::vector<cplx> coeff_;
  u64 big_primes_ = 0;
};

inline ExtremalResult extremal_construct(const PolyPhase& F, const PrimeSieve& sieve, u64 N,
                                         u64 grid_size = 0) {
  detail::require<ParameterError>(N >= 100, "extremal_construct needs N >= 100");
  detail::require<ParameterError>(N <= sieve.limit(), "extremal_construct: N exceeds sieve limit");
  if (grid_size == 0) grid_size = default_grid_size(N);
  detail::require<ParameterError>(grid_size >= 256, "extremal_construct needs grid_size >= 256");

  const ExtremalPolynomial G(F, sieve, N);
  ExtremalResult out;
  out.grid_size = grid_size;
  out.certified = grid_size >= 8 * N;
  out.lower_bound = static_cast<double>(G.big_prime_count());
  out.g_at_zero = std::abs(G.at(0.0));

  std::vector<double> mag(grid_size);
  parallel_for((grid_size + kBlockSize - 1) / kBlockSize, [&](std::size_t b) {
    const std::size_t hi = std::min<std::size_t>(grid_size, (b + 1) * kBlockSize);
    for (std::size_t j = b * kBlockSize; j < hi; ++j)
      mag[j] = std::abs(G.at(unit_exp_rational(static_cast<i64>(j), grid_size)));
  });
  std::size_t best = 0;  // strict '>' keeps the smallest angle on ties
  for (std::size_t j = 1; j < grid_size; ++j)
    if (mag[j] > mag[best]) best = j;
  out.grid_max = mag[best];

  // golden-section search on [t* - h, t* + h], h one grid step (in turns)
  const double h = 1.0 / static_cast<double>(grid_size);
  const double t_best = static_cast<double>(best) * h;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double width = 1e-10 / (2 * std::numbers::pi);
  double lo = t_best - h, hi = t_best + h;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = std::abs(G.at_turn(x1)), f2 = std::abs(G.at_turn(x2));
  while (hi - lo > width) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = std::abs(G.at_turn(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = std::abs(G.at_turn(x1));
    }
  }
  const double t_ref = 0.5 * (lo + hi);
  const double g_ref = std::abs(G.at_turn(t_ref));
  // a gain below rounding level is noise on a flat maximum
  if (g_ref > out.grid_max * (1.0 + 1e-12)) {
    out.turn = t_ref - std::floor(t_ref);
    out.z0 = {std::cos(2 * std::numbers::pi * t_ref), std::sin(2 * std::numbers::pi * t_ref)};
  } else {
    out.turn = t_best;
    out.z0 = unit_exp_rational(static_cast<i64>(best), grid_size);
  }
  out.g_at_z0 = std::abs(G.at(out.z0));

  const cplx z0 = out.z0;
  const PolyPhase Fc = F;
  out.f = MultiplicativeFunction::complete("extremal", [z0, Fc, N](u64 p) {
    return 2 * p <= N ? z0 : std::conj(phase_exp(Fc, p));
  });
  const auto values = sieve_values(out.f, sieve, N);
  out.sum_value = block_sum<cplx>(1, N + 1, [&](std::size_t n) {
    return values[n] * phase_exp(F, n);
  });
  return out;
}

}  // namespace weylmult

#endif  // WEYLMULT_MULTFUNC_HPP
