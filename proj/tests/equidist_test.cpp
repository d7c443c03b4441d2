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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "weylmult/equidist.hpp"

namespace weylmult {
namespace {

const PrimeSieve& sieve() {
  static const PrimeSieve s(100000);
  return s;
}

const RootTable& table() {
  static const RootTable t = build_root_table(IntPoly::parse("x^2+1"), sieve(), 100000);
  return t;
}

bool same_bits(cplx a, cplx b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(JointSequence, SmallExample) {
  const auto seq = joint_sequence(table(), parse_phase("x/2"), 5);
  struct Want {
    u64 n, v;
    FracFixed h;
  };
  const FracFixed half = FracFixed::from_rational(1, 2);
  const std::vector<Want> want{{1, 0, half}, {2, 1, FracFixed{}}, {5, 2, half}, {5, 3, half}};
  ASSERT_EQ(seq.entries.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(seq.entries[i].n, want[i].n);
    EXPECT_EQ(seq.entries[i].v, want[i].v);
    EXPECT_EQ(seq.entries[i].h, want[i].h);
  }
  EXPECT_EQ(seq.entries[2].g(), FracFixed::from_rational(2, 5));
}

TEST(JointSequence, CountAndOrdering) {
  const u64 N = 3000;
  const auto seq = joint_sequence(table(), parse_phase("sqrt:2*x"), N);
  EXPECT_EQ(seq.entries.size(), table().rho_sum(N));
  for (std::size_t i = 0; i < seq.entries.size(); ++i) {
    const auto& e = seq.entries[i];
    ASSERT_LT(e.v, e.n);
    ASSERT_EQ((u64{e.v} * e.v + 1) % e.n, 0u);
    if (i > 0) {
      const auto& p = seq.entries[i - 1];
      ASSERT_TRUE(p.n < e.n || (p.n == e.n && p.v < e.v));
    }
  }
}

TEST(JointWeylSum, Reductions) {
  const u64 N = 20000;
  const auto F = parse_phase("sqrt:2*x");
  EXPECT_EQ(joint_weyl_sum(table(), F, N, 0, 0), cplx(static_cast<double>(table().rho_sum(N))));
  cplx direct = 0;
  for (u64 n = 1; n <= N; ++n) direct += static_cast<double>(table().rho(n)) * phase_exp(F.scaled(3), n);
  EXPECT_LT(std::abs(joint_weyl_sum(table(), F, N, 3, 0) - direct), 1e-9);
}

// Oracle: roots by residue scan, phases in long double from sqrt(2).
TEST(JointWeylSum, MatchesBruteForce) {
  const u64 N = 1000;
  const long double s2 = std::sqrt(2.0L), tau = 2 * std::numbers::pi_v<long double>;
  const auto F = parse_phase("sqrt:2*x");
  for (auto [h1, h2] : std::vector<std::pair<i64, i64>>{{1, 0}, {0, 1}, {1, 1}, {2, 3}, {-1, 2}, {5, -7}}) {
    std::complex<long double> ref = 0;
    for (u64 n = 1; n <= N; ++n) {
      std::complex<long double> inner = 0;
      for (u64 v = 0; v < n; ++v)
        if ((v * v + 1) % n == 0) inner += std::polar(1.0L, tau * h2 * static_cast<long double>(v) / n);
      long double ph = h1 * s2 * n;
      ph -= std::floor(ph);
      ref += inner * std::polar(1.0L, tau * ph);
    }
    const cplx got = joint_weyl_sum(table(), F, N, h1, h2);
    EXPECT_LT(std::abs(got - cplx(static_cast<double>(ref.real()), static_cast<double>(ref.imag()))), 1e-9)
        << h1 << "," << h2;
  }
}

TEST(JointWeylSum, SymmetryAndTriangle) {
  const u64 N = 50000;
  const auto F = parse_phase("sqrt:2*x^2 + golden*x");
  const double total = static_cast<double>(table().rho_sum(N));
  for (auto [h1, h2] : std::vector<std::pair<i64, i64>>{{1, 0}, {0, 1}, {1, 1}, {2, 3}, {4, -1}}) {
    const cplx a = joint_weyl_sum(table(), F, N, h1, h2);
    const cplx b = joint_weyl_sum(table(), F, N, -h1, -h2);
    EXPECT_LT(std::abs(a - std::conj(b)), 1e-12 * total);
    EXPECT_LE(std::abs(a), total);
  }
}

TEST(JointWeylSum, NormalizedSumsDecay) {
  const auto F = parse_phase("sqrt:2*x");
  for (auto [h1, h2] : std::vector<std::pair<i64, i64>>{{1, 0}, {0, 1}, {1, 1}, {2, 3}}) {
    const double small = std::abs(joint_weyl_sum(table(), F, 1000, h1, h2)) / table().rho_sum(1000);
    const double large = std::abs(joint_weyl_sum(table(), F, 100000, h1, h2)) / table().rho_sum(100000);
    EXPECT_LT(large, small) << h1 << "," << h2;
  }
}

TEST(HooleyAverage, Examples) {
  EXPECT_DOUBLE_EQ(hooley_average(table(), 1, 1), 1.0);
  EXPECT_THROW(hooley_average(table(), 0, 10), ParameterError);
  for (i64 h : {1, 2, 5}) EXPECT_NEAR(hooley_average(table(), h, 5000), hooley_average(table(), -h, 5000), 1e-12);
  // oracle for the inner sums: pairs v, n - v give 2 cos(2 pi h v / n)
  double ref = 0;
  for (u64 n = 1; n <= 300; ++n) {
    cplx inner = 0;
    for (u64 v = 0; v < n; ++v)
      if ((v * v + 1) % n == 0) inner += std::polar(1.0, 2 * std::numbers::pi * double(v) / double(n));
    ref += std::abs(inner);
  }
  EXPECT_NEAR(hooley_average(table(), 1, 300), ref / 300, 1e-12);
}

TEST(HooleyAverage, DecreasesWithX) {
  const double a = hooley_average(table(), 1, 1000);
  const double b = hooley_average(table(), 1, 10000);
  const double c = hooley_average(table(), 1, 100000);
  EXPECT_GT(a, b);
  EXPECT_GT(b, c);
}

TEST(StarDiscrepancy, Degenerate) {
  const auto one = star_discrepancy_2d({{FracFixed{}, FracFixed{}}}, 64);
  EXPECT_NEAR(one.value, 1.0 - 1.0 / (64.0 * 64.0), 1e-15);
  EXPECT_DOUBLE_EQ(one.slack, 2.0 / 64);

  const u64 m = 16;
  std::vector<std::pair<FracFixed, FracFixed>> grid;
  for (u64 a = 0; a < m; ++a)
    for (u64 b = 0; b < m; ++b)
      grid.emplace_back(FracFixed::from_rational(2 * a + 1, 2 * m), FracFixed::from_rational(2 * b + 1, 2 * m));
  EXPECT_LE(star_discrepancy_2d(grid, m).value, 2.0 / m);
  EXPECT_LE(star_discrepancy_2d(grid, 2 * m).value, 2.0 / m);
  EXPECT_THROW(star_discrepancy_2d(std::vector<std::pair<FracFixed, FracFixed>>{}, 8), ParameterError);
}

// Oracle: count each anchored corner box directly.
TEST(StarDiscrepancy, MatchesCornerScan) {
  const auto seq = joint_sequence(table(), parse_phase("sqrt:2*x"), 400);
  const u64 m = 8;
  double ref = 0;
  for (u64 i = 0; i <= m; ++i)
    for (u64 j = 0; j <= m; ++j) {
      u64 c = 0;
      for (const auto& e : seq.entries)
        c += (u64{e.v} * m < i * e.n) && (e.h.to_double() * m < double(j));
      ref = std::max(ref, std::abs(double(c) / seq.entries.size() - double(i * j) / (m * m)));
    }
  EXPECT_NEAR(star_discrepancy_2d(seq, m).value, ref, 1e-15);
}

TEST(StarDiscrepancy, DecreasesWithN) {
  const auto F = parse_phase("sqrt:2*x");
  const auto small = star_discrepancy_2d(joint_sequence(table(), F, 1000), 64);
  const auto large = star_discrepancy_2d(joint_sequence(table(), F, 100000), 64);
  EXPECT_LT(large.value, small.value);
  EXPECT_EQ(large.count, table().rho_sum(100000));
}

TEST(Equidist, ThreadCountDoesNotChangeBits) {
  const auto F = parse_phase("sqrt:2*x");
  set_thread_count(1);
  const cplx a = joint_weyl_sum(table(), F, 100000, 2, 3);
  const double h = hooley_average(table(), 1, 100000);
  set_thread_count(4);
  const cplx b = joint_weyl_sum(table(), F, 100000, 2, 3);
  const double h4 = hooley_average(table(), 1, 100000);
  set_thread_count(1);
  EXPECT_TRUE(same_bits(a, b));
  EXPECT_EQ(std::memcmp(&h, &h4, sizeof h), 0);
}

}  // namespace
}  // namespace weylmult
