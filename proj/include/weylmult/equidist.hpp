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

// Joint distribution of (v/n, {F(n)}) over roots v of p modulo n, n <= N:
//   W(h1, h2) = sum_{n<=N} e(h1 F(n)) sum_{p(v) = 0 mod n} e(h2 v/n),
//   Hooley's average (1/x) sum_{n<=x} |sum_v e(h v/n)|,
// and a corner-grid estimate of the two-dimensional star discrepancy.

#ifndef WEYLMULT_EQUIDIST_HPP
#define WEYLMULT_EQUIDIST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/congruence.hpp"
#include "weylmult/errors.hpp"
#include "weylmult/parallel.hpp"
#include "weylmult/phase.hpp"

namespace weylmult {

struct JointEntry {
  std::uint32_t n = 0, v = 0;
  FracFixed h;  ///< {F(n)}
  FracFixed g() const { return FracFixed::from_rational(v, n); }
};

/// Entries ordered by n, then by root v.
struct JointSequence {
  u64 N = 0;
  std::vector<JointEntry> entries;
};

inline JointSequence joint_sequence(const RootTable& t, const PolyPhase& F, u64 N) {
  detail::require<ParameterError>(N >= 1 && N <= t.N, "joint_sequence: N must lie in [1, table N]");
  check_phase_range(F, N);
  JointSequence out;
  out.N = N;
  out.entries.reserve(t.rho_sum(N));
  for (u64 n = 1; n <= N; ++n) {
    const FracFixed h = frac_eval_unchecked(F, n);
    for (auto v : t.roots(n)) out.entries.push_back({static_cast<std::uint32_t>(n), v, h});
  }
  return out;
}

inline cplx joint_weyl_sum(const RootTable& t, const PolyPhase& F, u64 N, i64 h1, i64 h2) {
  detail::require<ParameterError>(N >= 1 && N <= t.N, "joint_weyl_sum: N must lie in [1, table N]");
  check_phase_range(F, N);
  const PolyPhase G = F.scaled(h1);
  return block_sum<cplx>(1, N + 1, [&](std::size_t n) {
    const auto roots = t.roots(n);
    if (roots.empty()) return cplx{};
    cplx inner = 0;
    for (auto v : roots) {
      const u64 num = mod_floor(static_cast<i128>(h2) * v, n);
      inner += unit_exp_rational(static_cast<i64>(num), n);
    }
    return (h1 == 0) ? inner : inner * unit_exp(frac_eval_unchecked(G, n));
  });
}

inline double hooley_average(const RootTable& t, i64 h, u64 x) {
  detail::require<ParameterError>(h != 0, "hooley_average needs h != 0");
  detail::require<ParameterError>(x >= 1 && x <= t.N, "hooley_average: x must lie in [1, table N]");
  const double total = block_sum<double>(1, x + 1, [&](std::size_t n) {
    cplx inner = 0;
    for (auto v : t.roots(n))
      inner += unit_exp_rational(static_cast<i64>(mod_floor(static_cast<i128>(h) * v, n)), n);
    return std::abs(inner);
  });
  return total / static_cast<double>(x);
}

struct DiscrepancyReport {
  double value = 0.0;  ///< max over corners (i/m, j/m) of |count/total - ij/m^2|
  double slack = 0.0;  ///< 2/m, gap between the grid value and the star discrepancy
  u64 grid_m = 0;
  u64 count = 0;
};

namespace detail {

/// Corner-grid discrepancy from per-cell counts (row-major, m x m).
inline DiscrepancyReport grid_discrepancy(const std::vector<u64>& cells, u64 m, u64 total) {
  // prefix[i][j] = #points with cell_x < i and cell_y < j
  std::vector<u64> prefix((m + 1) * (m + 1), 0);
  for (u64 i = 1; i <= m; ++i)
    for (u64 j = 1; j <= m; ++j)
      prefix[i * (m + 1) + j] = cells[(i - 1) * m + (j - 1)] + prefix[(i - 1) * (m + 1) + j] +
                                prefix[i * (m + 1) + j - 1] - prefix[(i - 1) * (m + 1) + j - 1];
  DiscrepancyReport out;
  out.grid_m = m;
  out.count = total;
  out.slack = 2.0 / static_cast<double>(m);
  const double md = static_cast<double>(m), td = static_cast<double>(total);
  for (u64 i = 0; i <= m; ++i)
    for (u64 j = 0; j <= m; ++j) {
      const double emp = static_cast<double>(prefix[i * (m + 1) + j]) / td;
      const double area = (static_cast<double>(i) / md) * (static_cast<double>(j) / md);
      out.value = std::max(out.value, std::abs(emp - area));
    }
  return out;
}

}  // namespace detail

/// Anchored boxes [0, a) x [0, b) with corners on the 1/m grid.
inline DiscrepancyReport star_discrepancy_2d(const JointSequence& seq, u64 grid_m) {
  detail::require<ParameterError>(grid_m >= 2 && grid_m <= 4096, "grid size must lie in [2, 4096]");
  detail::require<ParameterError>(!seq.entries.empty(), "discrepancy of an empty sequence");
  std::vector<u64> cells(grid_m * grid_m, 0);
  for (const auto& e : seq.entries) {
    const u64 cx = static_cast<u64>(e.v) * grid_m / e.n;  // exact floor(m v / n)
    const u64 cy = e.h.scaled_floor(grid_m);
    ++cells[cx * grid_m + cy];
  }
  return detail::grid_discrepancy(cells, grid_m, seq.entries.size());
}

/// Same estimate for arbitrary points of the torus.
inline DiscrepancyReport star_discrepancy_2d(const std::vector<std::pair<FracFixed, FracFixed>>& pts,
                                             u64 grid_m) {
  detail::require<ParameterError>(grid_m >= 2 && grid_m <= 4096, "grid size must lie in [2, 4096]");
  detail::require<ParameterError>(!pts.empty(), "discrepancy of an empty point set");
  std::vector<u64> cells(grid_m * grid_m, 0);
  for (const auto& [x, y] : pts) ++cells[x.scaled_floor(grid_m) * grid_m + y.scaled_floor(grid_m)];
  return detail::grid_discrepancy(cells, grid_m, pts.size());
}

}  // namespace weylmult

#endif  // WEYLMULT_EQUIDIST_HPP
