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

// Walks through the library at N = 10^5: cancellation of the Moebius Weyl
// sum, the extremal function that defeats it, the rational approximation
// of the leading coefficient, and the joint root/phase distribution.

#include <cmath>
#include <cstdio>

#include "weylmult/congruence.hpp"
#include "weylmult/equidist.hpp"
#include "weylmult/multfunc.hpp"
#include "weylmult/phase.hpp"
#include "weylmult/weylsum.hpp"

int main() {
  using namespace weylmult;
  constexpr u64 N = 100000;
  const PrimeSieve sieve(N);
  const PolyPhase F = parse_phase("sqrt:2*x^2 + golden*x");

  const auto mu = sieve_values(mobius(), sieve, N);
  const double s = std::abs(weyl_sum(mu, F, N));
  std::printf("|sum mu(n) e(F(n))| / N      = %.6f\n", s / double(N));

  const auto ex = extremal_construct(F, sieve, 10000);
  std::printf("extremal |sum| at N=10^4     = %.2f  (pi(N)-pi(N/2) = %.0f)\n", std::abs(ex.sum_value),
              ex.lower_bound);

  const auto ap = dirichlet_approx(F.coeff(2), std::sqrt(double(N)), 2);
  std::printf("{sqrt2} ~ %lld/%llu, error %.3e\n", static_cast<long long>(ap.a),
              static_cast<unsigned long long>(ap.q), ap.err);

  const auto t = build_root_table(IntPoly::parse("x^2+1"), sieve, N);
  const cplx w = joint_weyl_sum(t, parse_phase("sqrt:2*x"), N, 1, 1);
  std::printf("|W(1,1)| / sum rho           = %.6f\n", std::abs(w) / double(t.rho_sum(N)));
  std::printf("Hooley average at h=1        = %.6f\n", hooley_average(t, 1, N));
  return 0;
}
