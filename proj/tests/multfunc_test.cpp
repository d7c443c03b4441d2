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

#include <numbers>
#include <numeric>
#include <random>

#include "weylmult/multfunc.hpp"

namespace weylmult {
namespace {

std::vector<double> real_parts(const std::vector<cplx>& v) {
  std::vector<double> out;
  for (std::size_t i = 1; i < v.size(); ++i) out.push_back(v[i].real());
  return out;
}

TEST(SieveValues, Examples) {
  PrimeSieve s(100);
  EXPECT_EQ(real_parts(sieve_values(liouville(), s, 6)),
            (std::vector<double>{1, -1, -1, 1, -1, 1}));
  EXPECT_EQ(real_parts(sieve_values(mobius(), s, 4)), (std::vector<double>{1, -1, -1, 0}));
  for (double x : real_parts(sieve_values(unit_function(), s, 50))) EXPECT_EQ(x, 1.0);
}

TEST(SieveValues, MissingTableEntryNamesPrimePower) {
  PrimeSieve s(100);
  auto f = MultiplicativeFunction::table("partial", {{{2, 1}, 2.0}, {{3, 1}, 3.0}});
  try {
    sieve_values(f, s, 4);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("f(2^2)"), std::string::npos) << e.what();
  }
  auto v = sieve_values(f, s, 3);
  EXPECT_EQ(v[3], cplx(3.0));
  EXPECT_THROW(sieve_values(f, s, 101), ParameterError);
}

TEST(SieveValues, MultiplicativeOnCoprimePairs) {
  const u64 N = 20000;
  PrimeSieve s(N);
  std::mt19937_64 rng(4);
  auto twisted = MultiplicativeFunction::prime_power("twisted", [](u64 p, unsigned k) {
    return std::optional<cplx>(std::polar(1.0 / k, 0.1 * static_cast<double>(p + k)));
  });
  for (const auto& f : {mobius(), liouville(), twisted}) {
    const auto v = sieve_values(f, s, N);
    EXPECT_EQ(v[1], cplx(1.0));
    int done = 0;
    while (done < 200) {
      const u64 m = 1 + rng() % 500, n = 1 + rng() % 40;
      if (std::gcd(m, n) != 1 || m * n > N) continue;
      ASSERT_LT(std::abs(v[m * n] - v[m] * v[n]), 1e-12) << f.label() << " " << m << " " << n;
      ++done;
    }
  }
}

TEST(SieveValues, CompletelyMultiplicativePowers) {
  PrimeSieve s(4096);
  auto f = MultiplicativeFunction::complete("rot", [](u64 p) { return std::polar(1.0, 0.3 * p); });
  const auto v = sieve_values(f, s, 4096);
  EXPECT_LT(std::abs(v[4096] - std::pow(std::polar(1.0, 0.6), 12)), 1e-12);
  EXPECT_LT(std::abs(v[243] - std::pow(std::polar(1.0, 0.9), 5)), 1e-12);
}

TEST(NormStats, Examples) {
  PrimeSieve s(10000);
  auto unit = norm_stats(sieve_values(unit_function(), s, 100), s, 0.0);
  EXPECT_EQ(unit.ell1_ratio, 1.0);
  EXPECT_EQ(unit.C, 1.0);

  // oracle: squarefree count by trial division of square factors
  u64 squarefree = 0;
  for (u64 n = 1; n <= 10000; ++n) {
    bool sf = true;
    for (u64 d = 2; d * d <= n; ++d)
      if (n % (d * d) == 0) sf = false;
    squarefree += sf;
  }
  auto mu = norm_stats(sieve_values(mobius(), s, 10000), s, 0.0);
  EXPECT_DOUBLE_EQ(mu.ell1_ratio, static_cast<double>(squarefree) / 10000);
  EXPECT_NEAR(mu.ell1_ratio, 6 / (std::numbers::pi * std::numbers::pi), 0.02);
  EXPECT_DOUBLE_EQ(mu.ell2_ratio, mu.ell1_ratio);

  auto lam = norm_stats(sieve_values(liouville(), s, 777), s, 1.0);
  EXPECT_EQ(lam.C, 1.0);
  EXPECT_DOUBLE_EQ(lam.ell2_ratio, 1.0 / std::log(777.0));
}

TEST(Extremal, ZeroPhaseGivesUnitFunction) {
  PrimeSieve s(1000);
  auto r = extremal_construct(PolyPhase::zero(), s, 1000);
  EXPECT_NEAR(std::abs(r.z0 - 1.0), 0.0, 1e-9);
  EXPECT_NEAR(r.sum_value.real(), 1000.0, 1e-6);
  EXPECT_NEAR(r.sum_value.imag(), 0.0, 1e-6);
  EXPECT_GE(std::abs(r.sum_value), r.lower_bound);
  const auto v = sieve_values(r.f, s, 1000);
  for (u64 n = 1; n <= 1000; ++n) ASSERT_LT(std::abs(v[n] - 1.0), 1e-8);
}

TEST(Extremal, SqrtTwoPhaseBeatsPrimeCount) {
  PrimeSieve s(1000);
  auto r = extremal_construct(parse_phase("sqrt:2*x"), s, 1000);
  EXPECT_EQ(r.lower_bound, 73.0);  // 168 - 95
  EXPECT_GE(std::abs(r.sum_value), 73.0);
  EXPECT_GE(std::abs(r.sum_value), 1000 / (10 * std::log(1000.0)));
  EXPECT_NEAR(std::abs(r.z0), 1.0, 1e-12);
  EXPECT_TRUE(r.certified);
  EXPECT_GE(r.g_at_z0, r.grid_max);
  EXPECT_GE(r.g_at_z0, r.g_at_zero - 1e-9);
}

TEST(Extremal, SumEqualsGeneratingPolynomialAtZ0) {
  const u64 N = 3000;
  PrimeSieve s(N);
  for (const char* expr : {"sqrt:2*x", "sqrt:2*x^2 + golden*x", "pi*x^3"}) {
    const auto F = parse_phase(expr);
    auto r = extremal_construct(F, s, N, 4096);
    // reconstruct G(z0) term by term
    cplx G = 0;
    for (u64 n = 1; n <= N; ++n) {
      const unsigned om = big_omega(factorize(s, n));
      G += std::pow(r.z0, static_cast<int>(om)) * phase_exp(F, n);
      if (s.is_prime(n) && 2 * n > N) G += 1.0 - r.z0 * phase_exp(F, n);
    }
    EXPECT_LT(std::abs(r.sum_value - G), 1e-9 * std::abs(G)) << expr;
    EXPECT_FALSE(r.certified);  // 4096 < 8N
  }
}

TEST(Extremal, Preconditions) {
  PrimeSieve s(1000);
  EXPECT_THROW(extremal_construct(PolyPhase::zero(), s, 99), ParameterError);
  EXPECT_THROW(extremal_construct(PolyPhase::zero(), s, 500, 100), ParameterError);
  EXPECT_THROW(extremal_construct(PolyPhase::zero(), s, 2000), ParameterError);
}

}  // namespace
}  // namespace weylmult
