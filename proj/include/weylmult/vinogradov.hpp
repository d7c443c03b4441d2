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

// Exact solution counts for Vinogradov systems
//   v_1^j + ... + v_r^j = v_{r+1}^j + ... + v_{2r}^j,  1 <= j <= d,
// with all variables in a finite domain. N_r(lambda) counts r-tuples with
// power-sum vector lambda; the solution count is sum_lambda N_r(lambda)^2.

#ifndef WEYLMULT_VINOGRADOV_HPP
#define WEYLMULT_VINOGRADOV_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/errors.hpp"
#include "weylmult/parallel.hpp"
#include "weylmult/phase.hpp"

namespace weylmult {

/// Dense lattice boxes larger than this are refused.
inline constexpr double kMaxDenseStates = 1e8;
/// Sparse tables whose multiset bound exceeds this are refused.
inline constexpr double kMaxSparseStates = 2e7;

using PowerSumVector = std::vector<i128>;

struct TupleCountTable {
  int r = 0, d = 0;
  std::vector<i64> domain;
  /// Nonzero counts N_r(lambda), ordered by lambda.
  std::vector<std::pair<PowerSumVector, u128>> counts;

  bigint total() const {
    bigint t = 0;
    for (const auto& [lam, c] : counts) t += detail::u128_to_big(c);
    return t;
  }
};

namespace detail {

inline double multiset_bound(double m, int r) {
  // C(m + r - 1, r)
  double c = 1;
  for (int t = 1; t <= r; ++t) c = c * (m + r - t) / t;
  return c;
}

inline PowerSumVector power_vector(i64 v, int d) {
  PowerSumVector out(static_cast<std::size_t>(d));
  i128 pw = 1;
  for (int j = 0; j < d; ++j) {
    pw *= v;
    out[static_cast<std::size_t>(j)] = pw;
  }
  return out;
}

struct KernelPlan {
  bool dense = false;
  std::vector<i128> dims;  ///< dense box extent per coordinate
  double dense_states = 0;
  double sparse_states = 0;
};

inline KernelPlan plan_kernel(std::span<const i64> domain, int r, int d) {
  KernelPlan plan;
  i64 lo = domain.front(), hi = domain.front();
  for (i64 v : domain) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double m = static_cast<double>(domain.size());
  // r * max|v|^d must fit comfortably in 127 bits
  const double mag = std::max(std::abs(static_cast<double>(lo)), std::abs(static_cast<double>(hi)));
  require<ParameterError>(std::log2(static_cast<double>(r)) + d * std::log2(std::max(mag, 1.0)) < 120,
                          "power sums overflow 128-bit lattice coordinates");
  require<ParameterError>(static_cast<double>(r) * std::log2(m) < 126,
                          "tuple counts overflow 128 bits");
  plan.sparse_states = multiset_bound(m, r);
  plan.dense_states = 1;
  if (lo >= 1) {
    i128 pw = 1;
    for (int j = 0; j < d; ++j) {
      pw *= hi;
      plan.dims.push_back(static_cast<i128>(r) * pw + 1);
      plan.dense_states *= static_cast<double>(plan.dims.back());
    }
  } else {
    plan.dense_states = 1e300;
  }
  plan.dense = plan.dense_states <= kMaxDenseStates &&
               plan.dense_states <= 16.0 * plan.sparse_states;
  if (!plan.dense && plan.sparse_states > kMaxSparseStates) {
    const double need = std::min(plan.dense_states, plan.sparse_states);
    throw ResourceError("Vinogradov counter needs about " + std::to_string(need) +
                        " lattice states (r=" + std::to_string(r) + ", d=" + std::to_string(d) +
                        ", |domain|=" + std::to_string(domain.size()) + "); limit is " +
                        std::to_string(static_cast<u64>(kMaxDenseStates)) + " dense or " +
                        std::to_string(static_cast<u64>(kMaxSparseStates)) + " sparse");
  }
  return plan;
}

/// Pull convolution on the box [0, r max^j] per coordinate; coordinate 1 is
/// the slowest index so slices over lambda_1 are write-disjoint.
template <class Count, class Visit>
void dense_kernel(std::span<const i64> domain, int r, int d, const KernelPlan& plan,
                  Visit&& visit) {
  const std::size_t D = static_cast<std::size_t>(d);
  std::vector<std::size_t> stride(D);
  std::size_t total = 1;
  for (std::size_t j = D; j-- > 0;) {
    stride[j] = total;
    total *= static_cast<std::size_t>(plan.dims[j]);
  }
  std::vector<std::vector<i64>> pw(domain.size());
  std::vector<std::size_t> off(domain.size());
  for (std::size_t t = 0; t < domain.size(); ++t) {
    const auto pv = power_vector(domain[t], d);
    off[t] = 0;
    for (std::size_t j = 0; j < D; ++j) {
      pw[t].push_back(static_cast<i64>(pv[j]));
      off[t] += static_cast<std::size_t>(pv[j]) * stride[j];
    }
  }
  i64 vmax = *std::max_element(domain.begin(), domain.end());
  i64 vmin = *std::min_element(domain.begin(), domain.end());
  std::vector<Count> cur(total, 0), next(total, 0);
  for (std::size_t t = 0; t < domain.size(); ++t) cur[off[t]] += 1;

  for (int step = 2; step <= r; ++step) {
    std::fill(next.begin(), next.end(), Count{0});
    std::vector<i64> lo(D), hi(D);
    {
      i64 a = 1, b = 1;
      for (std::size_t j = 0; j < D; ++j) {
        a *= vmin;
        b *= vmax;
        lo[j] = step * a;
        hi[j] = step * b;
      }
    }
    const std::size_t slices = static_cast<std::size_t>(hi[0] - lo[0] + 1);
    parallel_for(slices, [&](std::size_t sl) {
      std::vector<i64> lam(D);
      lam[0] = lo[0] + static_cast<i64>(sl);
      for (std::size_t j = 1; j < D; ++j) lam[j] = lo[j];
      while (true) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < D; ++j) idx += static_cast<std::size_t>(lam[j]) * stride[j];
        Count acc = 0;
        for (std::size_t t = 0; t < domain.size(); ++t) {
          bool ok = true;
          for (std::size_t j = 0; j < D && ok; ++j) ok = lam[j] >= pw[t][j];
          if (ok) acc += cur[idx - off[t]];
        }
        next[idx] = acc;
        // odometer over coordinates 2..d
        std::size_t j = D;
        while (j-- > 1) {
          if (++lam[j] <= hi[j]) break;
          lam[j] = lo[j];
        }
        if (j == 0 || D == 1) break;
      }
    });
    std::swap(cur, next);
  }
  PowerSumVector lam(D);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (cur[idx] == 0) continue;
    std::size_t rem = idx;
    for (std::size_t j = 0; j < D; ++j) {
      lam[j] = static_cast<i128>(rem / stride[j]);
      rem %= stride[j];
    }
    visit(lam, static_cast<u128>(cur[idx]));
  }
}

template <class Visit>
void sparse_kernel(std::span<const i64> domain, int r, int d, Visit&& visit) {
  std::map<PowerSumVector, u128> one, cur;
  for (i64 v : domain) one[power_vector(v, d)] += 1;
  cur = one;
  for (int step = 2; step <= r; ++step) {
    std::map<PowerSumVector, u128> next;
    for (const auto& [a, ca] : cur)
      for (const auto& [b, cb] : one) {
        PowerSumVector s(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) s[j] = a[j] + b[j];
        next[std::move(s)] += ca * cb;
      }
    cur = std::move(next);
  }
  for (const auto& [lam, c] : cur) visit(lam, c);
}

/// Calls visit(lambda, N_r(lambda)) for every nonzero count.
template <class Visit>
void count_kernel(std::span<const i64> domain, int r, int d, Visit&& visit) {
  require<ParameterError>(r >= 1 && d >= 1, "Vinogradov counter needs r >= 1 and d >= 1");
  require<ParameterError>(!domain.empty(), "Vinogradov counter needs a nonempty domain");
  const auto plan = plan_kernel(domain, r, d);
  if (!plan.dense) {
    sparse_kernel(domain, r, d, visit);
  } else if (static_cast<double>(r) * std::log2(static_cast<double>(domain.size())) < 63) {
    dense_kernel<u64>(domain, r, d, plan, visit);
  } else {
    dense_kernel<u128>(domain, r, d, plan, visit);
  }
}

inline std::vector<i64> range_domain(i64 lo_exclusive, i64 hi_inclusive) {
  std::vector<i64> out;
  for (i64 v = lo_exclusive + 1; v <= hi_inclusive; ++v) out.push_back(v);
  return out;
}

inline bigint sum_of_squares(std::span<const i64> domain, int r, int d) {
  bigint J = 0;
  u128 chunk = 0;
  const u128 guard = ~u128{0} >> 1;
  count_kernel(domain, r, d, [&](const PowerSumVector&, u128 c) {
    // c < 2^63 whenever chunking applies; otherwise go straight to bigint
    if (c >> 63) {
      const bigint b = u128_to_big(c);
      J += b * b;
      return;
    }
    const u128 sq = c * c;
    if (chunk > guard - sq) {
      J += u128_to_big(chunk);
      chunk = 0;
    }
    chunk += sq;
  });
  return J + u128_to_big(chunk);
}

}  // namespace detail

inline TupleCountTable count_tuples(std::vector<i64> domain, int r, int d) {
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  TupleCountTable out;
  out.r = r;
  out.d = d;
  out.domain = domain;
  detail::count_kernel(domain, r, d,
                       [&](const PowerSumVector& lam, u128 c) { out.counts.emplace_back(lam, c); });
  std::sort(out.counts.begin(), out.counts.end());
  return out;
}

/// J_{r,d}(V): solutions with every variable in [1, V].
inline bigint jrd(u64 V, int r, int d) {
  detail::require<ParameterError>(V >= 1, "jrd: V must be >= 1");
  const auto dom = detail::range_domain(0, static_cast<i64>(V));
  return detail::sum_of_squares(dom, r, d);
}

/// Solutions with all 2r variables in one common interval, summed over the
/// family of half-open intervals (lo, hi].
inline bigint jrd_intervals(std::vector<std::pair<i64, i64>> intervals, int r, int d) {
  for (const auto& [lo, hi] : intervals)
    detail::require<ParameterError>(lo < hi, "jrd_intervals: empty interval");
  std::sort(intervals.begin(), intervals.end());
  for (std::size_t t = 1; t < intervals.size(); ++t)
    detail::require<ParameterError>(intervals[t].first >= intervals[t - 1].second,
                                    "jrd_intervals: intervals overlap");
  bigint J = 0;
  for (const auto& [lo, hi] : intervals) {
    const auto dom = detail::range_domain(lo, hi);
    J += detail::sum_of_squares(dom, r, d);
  }
  return J;
}

/// Solutions with every variable a prime in [Y, Y + X].
inline bigint jrd_primes(u64 Y, u64 X, int r, int d, const PrimeSieve& sieve) {
  detail::require<ParameterError>(Y + X <= sieve.limit(), "jrd_primes: Y + X exceeds sieve limit");
  std::vector<i64> dom;
  for (u64 p = Y; p <= Y + X; ++p)
    if (sieve.is_prime(p)) dom.push_back(static_cast<i64>(p));
  if (dom.empty()) return 0;
  return detail::sum_of_squares(dom, r, d);
}

inline double big_to_double(const bigint& b) { return b.convert_to<double>(); }

/// log(J(V_large) / J(V_small)) / log(V_large / V_small).
inline double slope_from(const bigint& J_small, const bigint& J_large, u64 V_small, u64 V_large) {
  return std::log(big_to_double(J_large) / big_to_double(J_small)) /
         std::log(static_cast<double>(V_large) / static_cast<double>(V_small));
}

inline double slope_estimate(int r, int d, u64 V_small, u64 V_large) {
  detail::require<ParameterError>(V_small >= 1 && V_small < V_large,
                                  "slope_estimate needs 1 <= V_small < V_large");
  return slope_from(jrd(V_small, r, d), jrd(V_large, r, d), V_small, V_large);
}

/// The exponent 2r - d(d+1)/2 of the mean value bound.
inline double vinogradov_exponent(int r, int d) { return 2.0 * r - d * (d + 1) / 2.0; }

}  // namespace weylmult

#endif  // WEYLMULT_VINOGRADOV_HPP
