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

#include <random>

#include "weylmult/phase.hpp"

namespace weylmult {
namespace {

constexpr const char* kSqrt2 = "1.41421356237309504880168872420969807856967187537694";

PolyPhase phase(std::initializer_list<const char*> coeffs) {
  std::vector<FracFixed> c;
  for (auto s : coeffs) c.push_back(parse_coefficient(s));
  return PolyPhase(std::move(c));
}

TEST(FracEval, Examples) {
  EXPECT_EQ(frac_eval(phase({"1/2"}), 3).to_double(), 0.5);
  EXPECT_EQ(frac_eval(phase({"0", "0.25"}), 2).raw(), 0u);
  // {2 (sqrt2 - 1)} = 2 sqrt2 - 2
  const double expect = 0.82842712474619009760337744841939615713934375075389;
  EXPECT_NEAR(frac_eval(phase({"sqrt:2"}), 2).to_double(), expect, 1e-15);
}

TEST(FracEval, MatchesBigIntegerReference) {
  // Reference: sum_j raw_j * n^j over arbitrary precision, reduced mod 2^128.
  std::mt19937_64 rng(1);
  const bigint two128 = bigint(1) << 128;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + static_cast<int>(rng() % 4);
    std::vector<FracFixed> c;
    for (int j = 0; j < d; ++j) c.emplace_back((static_cast<u128>(rng()) << 64) | rng());
    PolyPhase F(c);
    const u64 n = 1 + rng() % 1000000;
    bigint acc = 0, pw = 1;
    for (int j = 0; j < d; ++j) {
      pw *= n;
      acc += detail::u128_to_big(c[static_cast<std::size_t>(j)].raw()) * pw;
    }
    acc %= two128;
    ASSERT_EQ(detail::u128_to_big(frac_eval(F, n).raw()), acc);
  }
}

TEST(FracEval, RejectsOutOfRange) {
  EXPECT_THROW(frac_eval(phase({"0.5"}), 0), ParameterError);
  EXPECT_THROW(frac_eval(phase({"0.5"}), (u64{1} << 40) + 1), ParameterError);
  EXPECT_THROW(frac_eval(phase({"0", "0", "0.1"}), u64{1} << 34), ParameterError);
}

TEST(PhaseExp, Examples) {
  auto z = phase_exp(phase({"1/2"}), 1);
  EXPECT_NEAR(z.real(), -1.0, 1e-15);
  EXPECT_NEAR(z.imag(), 0.0, 1e-15);
  z = phase_exp(phase({"1/4"}), 1);
  EXPECT_NEAR(z.real(), 0.0, 1e-15);
  EXPECT_NEAR(z.imag(), 1.0, 1e-15);
  z = phase_exp(phase({"1/3"}), 3);
  EXPECT_NEAR(z.real(), 1.0, 1e-15);
  EXPECT_NEAR(z.imag(), 0.0, 1e-15);
}

TEST(PhaseExp, UnitModulusAndPeriodicity) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const u64 T = 2 + rng() % 40;
    std::vector<FracFixed> c;
    const int d = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < d; ++j) c.push_back(FracFixed::from_rational(static_cast<i64>(rng() % T), T));
    PolyPhase F(c);
    const u64 n = 1 + rng() % 1000;
    const auto a = phase_exp(F, n), b = phase_exp(F, n + T);
    ASSERT_NEAR(std::abs(a), 1.0, 1e-15);
    ASSERT_NEAR(std::abs(a - b), 0.0, 1e-12);
  }
}

TEST(Parse, ConstantsAgreeWithDecimalLiterals) {
  const auto s = parse_coefficient("sqrt:2");
  const auto lit = parse_coefficient(kSqrt2);
  const i128 diff = static_cast<i128>(s.raw() - lit.raw());
  EXPECT_LT(diff < 0 ? -diff : diff, static_cast<i128>(1) << 8);
  EXPECT_NEAR(parse_coefficient("golden").to_double(), 0.6180339887498949, 1e-16);
  EXPECT_NEAR(parse_coefficient("pi").to_double(), 0.14159265358979323, 1e-16);
  EXPECT_EQ(parse_coefficient("sqrt:9").raw(), 0u);
  EXPECT_EQ(parse_coefficient("-0.25").to_double(), 0.75);
  EXPECT_EQ(parse_coefficient("7/4").to_double(), 0.75);
}

TEST(Parse, PhaseExpressions) {
  auto F = parse_phase("sqrt:2*x^2 + golden*x");
  ASSERT_EQ(F.degree(), 2);
  EXPECT_EQ(F.coeff(2), parse_coefficient("sqrt:2"));
  EXPECT_EQ(F.coeff(1), parse_coefficient("golden"));
  auto G = parse_phase("x/2");
  ASSERT_EQ(G.degree(), 1);
  EXPECT_EQ(G.coeff(1).to_double(), 0.5);
  auto H = parse_phase("x^3 - 1/4*x + 2*x/8");
  EXPECT_EQ(H.degree(), 3);
  EXPECT_EQ(H.coeff(1).raw(), 0u);
  EXPECT_TRUE(parse_phase("0").is_zero());
  // 3*sqrt2/7 reduced once, not (3*{sqrt2})/7
  EXPECT_NEAR(parse_phase("3*sqrt:2*x/7").coeff(1).to_double(),
              3 * 1.4142135623730951 / 7, 1e-15);
}

TEST(Parse, Rejections) {
  EXPECT_THROW(parse_phase(""), ParameterError);
  EXPECT_THROW(parse_phase("2"), ParameterError);
  EXPECT_THROW(parse_phase("x+1"), ParameterError);
  EXPECT_THROW(parse_phase("1/x"), ParameterError);
  EXPECT_THROW(parse_phase("sqrt:abc*x"), ParameterError);
  EXPECT_THROW(parse_phase("x^"), ParameterError);
  EXPECT_THROW(parse_phase("x/0"), ParameterError);
}

TEST(DirichletApprox, Examples) {
  auto third = dirichlet_approx_rational(1, 3, 10);
  EXPECT_EQ(third.a, 1);
  EXPECT_EQ(third.q, 3u);
  EXPECT_EQ(third.err, 0.0);
  EXPECT_EQ(third.next_q, 0u);

  // pi - 3 = [0; 7, 15, 1, 292, ...]
  auto pi = dirichlet_approx(parse_coefficient("pi"), 100);
  EXPECT_EQ(pi.a, 1);
  EXPECT_EQ(pi.q, 7u);
  EXPECT_EQ(pi.next_q, 106u);
  EXPECT_NEAR(pi.err, 1.0 / 7 - 0.14159265358979323846, 1e-15);
  EXPECT_LE(pi.err, 1.0 / 700);

  auto phi = dirichlet_approx(parse_coefficient("golden"), 13);
  EXPECT_EQ(phi.a, 8);
  EXPECT_EQ(phi.q, 13u);
  EXPECT_NEAR(phi.err, 0.61803398874989484820 - 8.0 / 13, 1e-15);
  EXPECT_LE(phi.err, 1.0 / 169);

  // FracFixed 1/3 is not exactly 1/3 but still certifies 1/3
  auto fx = dirichlet_approx(FracFixed::from_rational(1, 3), 10);
  EXPECT_EQ(fx.q, 3u);
  EXPECT_LT(fx.err, 1e-30);
  EXPECT_THROW(dirichlet_approx(0.5, 0.5), ParameterError);
}

TEST(DirichletApprox, CertificateAlwaysHolds) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    FracFixed alpha((static_cast<u128>(rng()) << 64) | rng());
    if (t % 5 == 0) alpha = FracFixed::from_rational(static_cast<i64>(rng() % 97), 97);
    const double R = 1.0 + static_cast<double>(rng() % 1000000000);
    auto ap = dirichlet_approx(alpha, R);
    ASSERT_TRUE(certificate_holds(alpha, ap)) << t;
    ASSERT_LE(static_cast<double>(ap.q), R);
    ASSERT_LE(ap.err * static_cast<double>(ap.q) * R, 1.0 + 1e-12);
  }
}

TEST(ClassifyArc, Examples) {
  auto half = classify_arc(parse_phase("x/2"), 10000, 1);
  EXPECT_EQ(half.per_ell[0].q, 2u);
  EXPECT_EQ(half.label(), "major");

  // R = 10^4 / log 10^4 = 1085.7; convergents of sqrt2 - 1 are
  // 1/2, 2/5, 5/12, 12/29, 29/70, 70/169, 169/408, 408/985, 985/2378.
  auto s2 = classify_arc(parse_phase("sqrt:2*x"), 10000, 1);
  EXPECT_EQ(s2.per_ell[0].a, 408);
  EXPECT_EQ(s2.per_ell[0].q, 985u);
  EXPECT_EQ(s2.label(), "minor");

  auto rat = classify_arc(parse_phase("1/3*x^2 + 1/4*x"), 10000, 1);
  EXPECT_EQ(rat.per_ell[0].q, 4u);
  EXPECT_EQ(rat.per_ell[1].q, 3u);
  EXPECT_EQ(rat.label(), "major");
  EXPECT_THROW(classify_arc(parse_phase("x/2"), 15, 1), ParameterError);
}

}  // namespace
}  // namespace weylmult
