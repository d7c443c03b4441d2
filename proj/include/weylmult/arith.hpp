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

// Prime sieve, factorization and classical arithmetic functions.

#ifndef WEYLMULT_ARITH_HPP
#define WEYLMULT_ARITH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "weylmult/errors.hpp"

namespace weylmult {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kMaxSieveLimit = u64{1} << 31;

/// Linear sieve over [2, limit] keeping the smallest prime factor of every
/// integer. Immutable once built; safe to share across threads.
class PrimeSieve {
 public:
  explicit PrimeSieve(u64 limit) : limit_(limit) {
    detail::require<ParameterError>(
        limit >= 2 && limit <= kMaxSieveLimit,
        "sieve limit must lie in [2, 2^31], got " + std::to_string(limit));
    spf_.assign(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<std::uint32_t>(i);
        primes_.push_back(static_cast<std::uint32_t>(i));
      }
      for (std::uint32_t p : primes_) {
        const u64 m = i * p;
        if (p > spf_[i] || m > limit) break;
        spf_[m] = p;
      }
    }
  }

  u64 limit() const { return limit_; }

  bool is_prime(u64 n) const {
    return n >= 2 && n <= limit_ && spf_[n] == n;
  }

  /// Smallest prime factor; defined for 2 <= n <= limit.
  std::uint32_t spf(u64 n) const { return spf_[n]; }

  const std::vector<std::uint32_t>& primes() const { return primes_; }

  /// pi(x) for x <= limit.
  u64 prime_count(u64 x) const {
    return static_cast<u64>(
        std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
  }

 private:
  u64 limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

inline PrimeSieve build_sieve(u64 limit) { return PrimeSieve(limit); }

struct PrimePower {
  u64 prime;
  unsigned exponent;
  bool operator==(const PrimePower&) const = default;
};

/// n together with its canonical factorization (primes strictly increasing).
struct FactoredInteger {
  u64 n = 1;
  std::vector<PrimePower> factors;
};

inline FactoredInteger factorize(const PrimeSieve& sieve, u64 n) {
  detail::require<ParameterError>(
      n >= 1 && n <= sieve.limit(),
      "factorize: n=" + std::to_string(n) + " outside [1, sieve limit]");
  FactoredInteger out{n, {}};
  while (n > 1) {
    const u64 p = sieve.spf(n);
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.factors.push_back({p, k});
  }
  return out;
}

/// Lambda(n): log p when n = p^k, else 0.
inline double von_mangoldt(const FactoredInteger& fac) {
  if (fac.factors.size() != 1) return 0.0;
  return std::log(static_cast<double>(fac.factors.front().prime));
}

/// Omega(n), prime factors counted with multiplicity.
inline unsigned big_omega(const FactoredInteger& fac) {
  unsigned s = 0;
  for (const auto& f : fac.factors) s += f.exponent;
  return s;
}

inline u64 euler_phi(const FactoredInteger& fac) {
  u64 phi = 1;
  for (const auto& [p, k] : fac.factors) {
    phi *= p - 1;
    for (unsigned e = 1; e < k; ++e) phi *= p;
  }
  return phi;
}

/// Trial-division factorization for moduli that may exceed any sieve.
inline FactoredInteger factorize_trial(u64 n) {
  FactoredInteger out{n, {}};
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.factors.push_back({p, k});
  }
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

/// Sorted divisors of n.
inline std::vector<u64> divisors(const FactoredInteger& fac) {
  std::vector<u64> ds{1};
  for (const auto& [p, k] : fac.factors) {
    const std::size_t base = ds.size();
    u64 pk = 1;
    for (unsigned e = 1; e <= k; ++e) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

/// Inverse of a modulo m; requires gcd(a, m) = 1.
inline u64 invmod(u64 a, u64 m) {
  i128 t = 0, new_t = 1;
  i128 r = static_cast<i128>(m), new_r = static_cast<i128>(a % m);
  while (new_r != 0) {
    const i128 q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  detail::require<ParameterError>(r == 1, "invmod: argument not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

/// Non-negative residue of a signed 128-bit value.
inline u64 mod_floor(i128 a, u64 m) {
  i128 r = a % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

}  // namespace weylmult

#endif  // WEYLMULT_ARITH_HPP
