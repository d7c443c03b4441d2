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

#include "weylmult/multfunc.hpp"
#include "weylmult/partition.hpp"

namespace weylmult {
namespace {

// Oracle: membership tests written directly from the defining inequalities
// with integer cross-multiplication, independent of Rational/Rectangle.
bool in_main(u64 N, int i, u64 p, u64 n) {
  const u64 t = u64{1} << i;
  return p <= t && 2 * t * n > N && t * n <= N;
}

bool in_sub(u64 N, int i, int j, u64 k, u64 p, u64 n) {
  const u64 t = u64{1} << (i + j);
  return p * k > t && p * (2 * k - 1) <= 2 * t && n * t > (k - 1) * N &&
         2 * t * n <= (2 * k - 1) * N;
}

unsigned oracle_multiplicity(const PartitionScheme& sc, u64 p, u64 n) {
  unsigned c = 0;
  for (const auto& m : sc.main_rects) c += in_main(sc.N, m.i, p, n);
  for (const auto& r : sc.sub_rects) c += in_sub(sc.N, r.i, r.j, r.k, p, n);
  return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(Partition, JExamples) {
  EXPECT_EQ(partition_J(1024, 64, 3), 4);  // min(4, 8, 5)
  EXPECT_EQ(partition_J(1024, 64, 0), 1);
  EXPECT_EQ(partition_J(1024, 64, 10), 1);
  for (int i = 0; i <= 10; ++i)
    EXPECT_EQ(partition_J(1024, 1024, i), std::min({i + 1, 10 - i + 1, 3})) << i;
  // 64N/s = 64*1000/250 = 256 exactly -> floor(8/2) = 4
  EXPECT_EQ(partition_J(1000, 250, 5), 4);
}

TEST(Partition, RectangleExamples) {
  const u64 N = 1024;
  const auto r0 = ri_rectangle(N, 0);
  EXPECT_EQ(r0.p_lo, (Rational{0, 1}));
  EXPECT_EQ(r0.p_hi, (Rational{1, 1}));
  EXPECT_EQ(r0.n_lo, (Rational{512, 1}));
  EXPECT_EQ(r0.n_hi, (Rational{1024, 1}));
  const auto r211 = rijk_rectangle(N, 2, 1, 1);
  EXPECT_EQ(r211.p_lo, (Rational{8, 1}));
  EXPECT_EQ(r211.p_hi, (Rational{16, 1}));
  EXPECT_EQ(r211.n_lo, (Rational{0, 1}));
  EXPECT_EQ(r211.n_hi, (Rational{N, 16}));
  EXPECT_TRUE(r211.contains(11, 64));
  EXPECT_FALSE(r211.contains(11, 65));
  EXPECT_FALSE(r211.contains(8, 1));
}

TEST(Partition, RejectsBadParameters) {
  EXPECT_THROW(build_partition(63, 4), ParameterError);
  EXPECT_THROW(build_partition(1024, 0.5), ParameterError);
  EXPECT_THROW(build_partition(1024, 1025), ParameterError);
}

TEST(Partition, UnitWeightAtHundred) {
  PrimeSieve sieve(100);
  auto sc = build_partition(100, 10);
  auto rep = verify_partition(sc, sieve, [](u64, u64) { return cplx(1.0); });
  double expect = 0;
  for (u64 p = 2; p <= 100; ++p)
    if (sieve.is_prime(p)) expect += static_cast<double>(100 / p);
  EXPECT_EQ(rep.direct_sum.real(), expect);
  EXPECT_EQ(rep.partitioned_sum.real(), expect);
  EXPECT_EQ(rep.max_multiplicity, 1u);
}

TEST(Partition, ExactCoverSweep) {
  PrimeSieve sieve(10007);
  for (u64 N : {u64{1024}, u64{4096}, u64{10007}}) {
    for (double s : {4.0, 64.0, std::floor(std::sqrt(static_cast<double>(N)))}) {
      auto sc = build_partition(N, s);
      auto rep = verify_partition(sc, sieve, [](u64, u64) { return cplx(1.0); });
      EXPECT_EQ(rep.max_multiplicity, 1u) << N << " " << s;
      EXPECT_TRUE(same_bits(rep.direct_sum.real(), rep.partitioned_sum.real())) << N << " " << s;
      EXPECT_GE(rep.min_p_width, 0.25);
      EXPECT_GE(rep.min_n_width, 0.25);
      EXPECT_GE(rep.min_area, s / 256);

      // complement equals the exceptional set, point by point
      auto exc = exceptional_points(sc, sieve);
      EXPECT_EQ(exc.size(), rep.exceptional_count);
      std::size_t cursor = 0;
      u64 total = 0;
      for (u64 p = 2; p <= N; ++p) {
        if (!sieve.is_prime(p)) continue;
        for (u64 n = 1; p * n <= N; ++n) {
          ++total;
          const unsigned m = oracle_multiplicity(sc, p, n);
          ASSERT_LE(m, 1u) << p << " " << n;
          if (m == 0) {
            ASSERT_LT(cursor, exc.size());
            ASSERT_EQ(exc[cursor], std::make_pair(p, n));
            ++cursor;
          }
        }
      }
      EXPECT_EQ(cursor, exc.size());
      EXPECT_EQ(total, rep.total_points);
      EXPECT_EQ(static_cast<double>(total), rep.direct_sum.real());
    }
  }
}

TEST(Partition, SubRectanglesUnderHyperbola) {
  for (u64 N : {u64{1024}, u64{10007}}) {
    auto sc = build_partition(N, 4);
    for (const auto& r : sc.sub_rects) {
      const i128 lhs = r.rect.p_hi.num * r.rect.n_hi.num;
      const i128 rhs = static_cast<i128>(N) * r.rect.p_hi.den * r.rect.n_hi.den;
      ASSERT_LE(lhs, rhs);
      ASSERT_LT(r.rect.p_lo, r.rect.p_hi);
      ASSERT_LT(r.rect.n_lo, r.rect.n_hi);
    }
  }
}

TEST(Partition, MaximalSShrinksSubRectangles) {
  PrimeSieve sieve(1024);
  auto small = build_partition(1024, 4), big = build_partition(1024, 1024);
  EXPECT_LT(big.sub_rects.size(), small.sub_rects.size());
  EXPECT_GT(exceptional_points(big, sieve).size(), exceptional_points(small, sieve).size());
}

TEST(Partition, ComplexWeightAndThreadDeterminism) {
  const u64 N = 4096;
  PrimeSieve sieve(N);
  const auto F = parse_phase("sqrt:2*x^2 + golden*x");
  const auto f = sieve_values(mobius(), sieve, N);
  PointWeight w = [&](u64 p, u64 n) {
    return phase_exp(F, p * n) * f[n] * std::log(static_cast<double>(p));
  };
  auto sc = build_partition(N, 64);
  set_thread_count(1);
  auto a = verify_partition(sc, sieve, w);
  set_thread_count(4);
  auto b = verify_partition(sc, sieve, w);
  set_thread_count(1);
  EXPECT_LE(std::abs(a.direct_sum - a.partitioned_sum), 1e-9 * std::abs(a.direct_sum));
  EXPECT_TRUE(same_bits(a.direct_sum.real(), b.direct_sum.real()));
  EXPECT_TRUE(same_bits(a.partitioned_sum.imag(), b.partitioned_sum.imag()));
}

}  // namespace
}  // namespace weylmult
