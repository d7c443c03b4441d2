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

// Montgomery-Vaughan partition of the hyperbola region
// {(p, n) : p prime, n >= 1, pn <= N} into rectangles plus an exceptional set.
//
// Main rectangles  R_i     = (0, 2^i] x (N/2^{i+1}, N/2^i],
// sub-rectangles   R_{ijk} = (2^{i+j}/k, 2^{i+j+1}/(2k-1)]
//                          x ((k-1)N/2^{i+j}, (2k-1)N/2^{i+j+1}],
// for 1 <= j <= J_i and 2^{j-1} < k <= 2^j. All endpoints are exact rationals
// so half-open membership is decided without rounding.

#ifndef WEYLMULT_PARTITION_HPP
#define WEYLMULT_PARTITION_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/errors.hpp"
#include "weylmult/parallel.hpp"

namespace weylmult {

/// num / den with den > 0; not reduced.
struct Rational {
  i128 num = 0;
  i128 den = 1;

  /// floor(num / den)
  i128 floor() const {
    i128 q = num / den;
    if ((num % den != 0) && (num < 0)) --q;
    return q;
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
};

/// Half-open box (p_lo, p_hi] x (n_lo, n_hi].
struct Rectangle {
  Rational p_lo, p_hi, n_lo, n_hi;

  bool contains(u64 p, u64 n) const {
    const i128 P = static_cast<i128>(p), M = static_cast<i128>(n);
    return p_lo.num < P * p_lo.den && P * p_hi.den <= p_hi.num && n_lo.num < M * n_lo.den &&
           M * n_hi.den <= n_hi.num;
  }
  /// Integer range [first, last] inside a half-open side (empty if first > last).
  static std::pair<i128, i128> lattice(const Rational& lo, const Rational& hi) {
    return {lo.floor() + 1, hi.floor()};
  }
  std::pair<i128, i128> p_range() const { return lattice(p_lo, p_hi); }
  std::pair<i128, i128> n_range() const { return lattice(n_lo, n_hi); }
  double p_width() const { return (p_hi - p_lo).to_double(); }
  double n_width() const { return (n_hi - n_lo).to_double(); }
  double area() const { return p_width() * n_width(); }
};

struct MainRect {
  int i = 0;
  Rectangle rect;
};

struct SubRect {
  int i = 0, j = 0;
  u64 k = 0;
  Rectangle rect;
};

struct PartitionScheme {
  u64 N = 0;
  double s = 0.0;
  std::vector<int> J;  ///< J[i] for 0 <= i <= floor(log2 N)
  std::vector<MainRect> main_rects;
  std::vector<SubRect> sub_rects;
};

inline int floor_log2(u64 n) { return static_cast<int>(std::bit_width(n)) - 1; }

/// J_i = min(i + 1, floor(log2 N) - i + 1, floor(log2(64N/s) / 2)).
inline int partition_J(u64 N, double s, int i) {
  // floor(log2(64N/s)/2) is the largest m with 4^m s <= 64N
  int m = 0;
  const double cap = 64.0 * static_cast<double>(N);
  while (std::ldexp(s, 2 * (m + 1)) <= cap) ++m;
  if (s > cap) m = -1;
  return std::min({i + 1, floor_log2(N) - i + 1, m});
}

inline Rectangle ri_rectangle(u64 N, int i) {
  const i128 two_i = i128{1} << i;
  const i128 n = static_cast<i128>(N);
  return {{0, 1}, {two_i, 1}, {n, 2 * two_i}, {n, two_i}};
}

/// Rectangle R_{i,j,k} for any k >= 1 (no range restriction applied).
inline Rectangle rijk_rectangle(u64 N, int i, int j, u64 k) {
  detail::require<ParameterError>(k >= 1 && i >= 0 && j >= 1 && i + j <= 100,
                                  "rijk_rectangle: bad index");
  const i128 t = i128{1} << (i + j);
  const i128 K = static_cast<i128>(k), n = static_cast<i128>(N);
  return {{t, K}, {2 * t, 2 * K - 1}, {(K - 1) * n, t}, {(2 * K - 1) * n, 2 * t}};
}

inline PartitionScheme build_partition(u64 N, double s) {
  detail::require<ParameterError>(N >= 64, "build_partition: N must be >= 64");
  detail::require<ParameterError>(N <= kMaxSieveLimit, "build_partition: N exceeds 2^31");
  detail::require<ParameterError>(s >= 1.0 && s <= static_cast<double>(N),
                                  "build_partition: s must lie in [1, N]");
  PartitionScheme out;
  out.N = N;
  out.s = s;
  const int top = floor_log2(N);
  for (int i = 0; i <= top; ++i) {
    out.J.push_back(partition_J(N, s, i));
    out.main_rects.push_back({i, ri_rectangle(N, i)});
  }
  for (int i = 0; i <= top; ++i)
    for (int j = 1; j <= out.J[static_cast<std::size_t>(i)]; ++j)
      for (u64 k = (u64{1} << (j - 1)) + 1; k <= (u64{1} << j); ++k)
        out.sub_rects.push_back({i, j, k, rijk_rectangle(N, i, j, k)});
  return out;
}

namespace detail {

/// Flat index of every hyperbola point: point (p, n) sits at base[idx(p)] + n - 1.
struct HyperbolaIndex {
  std::vector<u64> primes;
  std::vector<std::size_t> base;  ///< size primes.size() + 1
  u64 N = 0;

  HyperbolaIndex(const PrimeSieve& sieve, u64 N_) : N(N_) {
    base.push_back(0);
    for (u64 p : sieve.primes()) {
      if (p > N) break;
      primes.push_back(p);
      base.push_back(base.back() + N / p);
    }
  }
  std::size_t size() const { return base.back(); }
  std::size_t prime_slot(u64 p) const {
    return static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), p) -
                                    primes.begin());
  }
};

/// Calls fn(p, n) for every prime lattice point of the rectangle, p then n ascending.
template <class Fn>
void for_each_point(const Rectangle& r, const PrimeSieve& sieve, u64 N, Fn&& fn) {
  auto [p0, p1] = r.p_range();
  auto [n0, n1] = r.n_range();
  p0 = std::max<i128>(p0, 2);
  n0 = std::max<i128>(n0, 1);
  p1 = std::min<i128>(p1, static_cast<i128>(N));
  if (p0 > p1 || n0 > n1) return;
  for (i128 p = p0; p <= p1; ++p) {
    if (!sieve.is_prime(static_cast<u64>(p))) continue;
    const i128 top = std::min<i128>(n1, static_cast<i128>(N) / p);
    for (i128 n = n0; n <= top; ++n) fn(static_cast<u64>(p), static_cast<u64>(n));
  }
}

template <class Fn>
void for_each_rectangle(const PartitionScheme& sc, Fn&& fn) {
  for (const auto& m : sc.main_rects) fn(m.rect);
  for (const auto& r : sc.sub_rects) fn(r.rect);
}

/// Number of stored rectangles covering each hyperbola point.
inline std::vector<std::uint8_t> coverage(const PartitionScheme& sc, const PrimeSieve& sieve,
                                          const HyperbolaIndex& idx) {
  std::vector<std::uint8_t> count(idx.size(), 0);
  for_each_rectangle(sc, [&](const Rectangle& r) {
    for_each_point(r, sieve, sc.N, [&](u64 p, u64 n) {
      auto& c = count[idx.base[idx.prime_slot(p)] + n - 1];
      if (c < std::numeric_limits<std::uint8_t>::max()) ++c;
    });
  });
  return count;
}

}  // namespace detail

/// Hyperbola points covered by no rectangle, ascending in (p, n).
inline std::vector<std::pair<u64, u64>> exceptional_points(const PartitionScheme& sc,
                                                           const PrimeSieve& sieve) {
  detail::require<ParameterError>(sieve.limit() >= sc.N, "exceptional_points: sieve too small");
  const detail::HyperbolaIndex idx(sieve, sc.N);
  const auto count = detail::coverage(sc, sieve, idx);
  std::vector<std::pair<u64, u64>> out;
  for (std::size_t s = 0; s < idx.primes.size(); ++s)
    for (u64 n = 1; n <= sc.N / idx.primes[s]; ++n)
      if (count[idx.base[s] + n - 1] == 0) out.emplace_back(idx.primes[s], n);
  return out;
}

struct PartitionReport {
  cplx direct_sum;
  cplx partitioned_sum;
  cplx exceptional_sum;
  unsigned max_multiplicity = 0;
  u64 total_points = 0;
  u64 exceptional_count = 0;
  double min_p_width = 0.0;  ///< over sub-rectangles
  double min_n_width = 0.0;
  double min_area = 0.0;
  double area_threshold = 0.0;  ///< s/256, a constant derived from the construction
  std::size_t sub_rect_count = 0;
};

using PointWeight = std::function<cplx(u64 p, u64 n)>;

/// Sums w over the hyperbola region directly and rectangle by rectangle,
/// and measures how often each point is covered.
inline PartitionReport verify_partition(const PartitionScheme& sc, const PrimeSieve& sieve,
                                        const PointWeight& w) {
  detail::require<ParameterError>(sieve.limit() >= sc.N, "verify_partition: sieve too small");
  const detail::HyperbolaIndex idx(sieve, sc.N);
  const auto count = detail::coverage(sc, sieve, idx);

  PartitionReport out;
  out.total_points = idx.size();
  out.sub_rect_count = sc.sub_rects.size();
  out.area_threshold = sc.s / 256.0;
  for (auto c : count) out.max_multiplicity = std::max<unsigned>(out.max_multiplicity, c);

  // direct: one task per prime, summed along n
  std::vector<cplx> per_prime(idx.primes.size());
  parallel_for(idx.primes.size(), [&](std::size_t s) {
    const u64 p = idx.primes[s];
    cplx acc = 0;
    for (u64 n = 1; n <= sc.N / p; ++n) acc += w(p, n);
    per_prime[s] = acc;
  });
  out.direct_sum = pairwise_reduce(std::span<const cplx>(per_prime));

  std::vector<const Rectangle*> rects;
  detail::for_each_rectangle(sc, [&](const Rectangle& r) { rects.push_back(&r); });
  std::vector<cplx> per_rect(rects.size());
  parallel_for(rects.size(), [&](std::size_t t) {
    cplx acc = 0;
    detail::for_each_point(*rects[t], sieve, sc.N, [&](u64 p, u64 n) { acc += w(p, n); });
    per_rect[t] = acc;
  });

  std::vector<cplx> per_prime_exc(idx.primes.size());
  std::vector<u64> exc_count(idx.primes.size());
  parallel_for(idx.primes.size(), [&](std::size_t s) {
    const u64 p = idx.primes[s];
    cplx acc = 0;
    u64 c = 0;
    for (u64 n = 1; n <= sc.N / p; ++n)
      if (count[idx.base[s] + n - 1] == 0) {
        acc += w(p, n);
        ++c;
      }
    per_prime_exc[s] = acc;
    exc_count[s] = c;
  });
  out.exceptional_sum = pairwise_reduce(std::span<const cplx>(per_prime_exc));
  for (u64 c : exc_count) out.exceptional_count += c;
  out.partitioned_sum = pairwise_reduce(std::span<const cplx>(per_rect)) + out.exceptional_sum;

  out.min_p_width = out.min_n_width = out.min_area = std::numeric_limits<double>::infinity();
  for (const auto& r : sc.sub_rects) {
    out.min_p_width = std::min(out.min_p_width, r.rect.p_width());
    out.min_n_width = std::min(out.min_n_width, r.rect.n_width());
    out.min_area = std::min(out.min_area, r.rect.area());
  }
  if (sc.sub_rects.empty()) out.min_p_width = out.min_n_width = out.min_area = 0.0;
  return out;
}

}  // namespace weylmult

#endif  // WEYLMULT_PARTITION_HPP
