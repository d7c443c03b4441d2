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

// Exponential sums with multiplicative coefficients:
//   S        = sum_{n<=N} f(n) e(F(n))
//   S_log    = sum_{n<=N} f(n) log(N/n) e(F(n))
//   H        = sum_{pn<=N} f(n) f(p) log(p) e(F(pn))
//   I        = sum_k sum_{(p,n) in R_k} alpha(n) beta(p) e(F(pn))
// and a bound report comparing |S| with the terms of the main estimate.
//
// Defining WEYLMULT_CHECK_INVARIANTS makes weyl_sum verify the triangle
// inequality on every call.

#ifndef WEYLMULT_WEYLSUM_HPP
#define WEYLMULT_WEYLSUM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "weylmult/arith.hpp"
#include "weylmult/errors.hpp"
#include "weylmult/parallel.hpp"
#include "weylmult/partition.hpp"
#include "weylmult/phase.hpp"

namespace weylmult {

namespace detail {

inline void require_values(std::span<const cplx> f, u64 N, const char* who) {
  require<ParameterError>(f.size() >= N + 1, std::string(who) + ": f values must cover 1..N");
}

}  // namespace detail

inline cplx weyl_sum(std::span<const cplx> f, const PolyPhase& F, u64 N) {
  detail::require_values(f, N, "weyl_sum");
  check_phase_range(F, N);
  const cplx s = block_sum<cplx>(1, N + 1, [&](std::size_t n) {
    return f[n] * unit_exp(frac_eval_unchecked(F, n));
  });
#ifdef WEYLMULT_CHECK_INVARIANTS
  const double l1 = block_sum<double>(1, N + 1, [&](std::size_t n) { return std::abs(f[n]); });
  if (std::abs(s) > l1 * (1 + 1e-12) + 1e-12)
    throw std::logic_error("weyl_sum: triangle inequality violated");
#endif
  return s;
}

inline cplx log_weighted_sum(std::span<const cplx> f, const PolyPhase& F, u64 N) {
  detail::require_values(f, N, "log_weighted_sum");
  check_phase_range(F, N);
  const double logN = std::log(static_cast<double>(N));
  return block_sum<cplx>(1, N + 1, [&](std::size_t n) {
    const double w = logN - std::log(static_cast<double>(n));
    return f[n] * w * unit_exp(frac_eval_unchecked(F, n));
  });
}

/// Sum over primes p and n >= 1 with pn <= N; one task per prime, then a
/// pairwise reduction over primes in ascending order.
inline cplx hyperbola_bilinear(std::span<const cplx> f, const PrimeSieve& sieve, const PolyPhase& F,
                               u64 N) {
  detail::require_values(f, N, "hyperbola_bilinear");
  detail::require<ParameterError>(sieve.limit() >= N, "hyperbola_bilinear: sieve too small");
  if (N < 2) return 0.0;
  check_phase_range(F, N);
  const auto& primes = sieve.primes();
  const std::size_t count = sieve.prime_count(N);
  std::vector<cplx> per_prime(count);
  parallel_for(count, [&](std::size_t s) {
    const u64 p = primes[s];
    const cplx fp = f[p] * std::log(static_cast<double>(p));
    cplx acc = 0;
    for (u64 n = 1; n <= N / p; ++n) acc += f[n] * unit_exp(frac_eval_unchecked(F, p * n));
    per_prime[s] = fp * acc;
  });
  return pairwise_reduce(std::span<const cplx>(per_prime));
}

/// Rectangles with p-sides in (0, Q] of width <= X and n-sides in (0, M]
/// of width <= Y and n_hi <= 2 n_lo, at most M of them. `free_family`
/// skips these hypotheses and only requires well-formed boxes in the
/// positive quadrant.
class RectFamily {
 public:
  static RectFamily checked(std::vector<Rectangle> rects, double Q, double X, double M, double Y) {
    RectFamily fam(std::move(rects));
    fam.Q_ = Q;
    fam.X_ = X;
    fam.M_ = M;
    fam.Y_ = Y;
    detail::require<ParameterError>(static_cast<double>(fam.rects_.size()) <= M,
                                    "RectFamily: more rectangles than M");
    for (const auto& r : fam.rects_) {
      detail::require<ParameterError>(r.p_hi.to_double() <= Q && r.p_width() <= X,
                                      "RectFamily: p-side outside (0, Q] or wider than X");
      detail::require<ParameterError>(r.n_hi.to_double() <= M && r.n_width() <= Y,
                                      "RectFamily: n-side outside (0, M] or wider than Y");
      detail::require<ParameterError>(
          r.n_hi.num * r.n_lo.den <= 2 * r.n_lo.num * r.n_hi.den,
          "RectFamily: n-side is not dyadic (n_hi > 2 n_lo)");
    }
    fam.hypotheses_checked_ = true;
    return fam;
  }

  static RectFamily free_family(std::vector<Rectangle> rects) { return RectFamily(std::move(rects)); }

  const std::vector<Rectangle>& rects() const { return rects_; }
  bool hypotheses_checked() const { return hypotheses_checked_; }
  double Q() const { return Q_; }
  double X() const { return X_; }
  double M() const { return M_; }
  double Y() const { return Y_; }

 private:
  explicit RectFamily(std::vector<Rectangle> rects) : rects_(std::move(rects)) {
    for (const auto& r : rects_) {
      detail::require<ParameterError>(r.p_lo.den > 0 && r.p_hi.den > 0 && r.n_lo.den > 0 &&
                                          r.n_hi.den > 0,
                                      "RectFamily: denominators must be positive");
      detail::require<ParameterError>(r.p_lo < r.p_hi && r.n_lo < r.n_hi,
                                      "RectFamily: empty rectangle side");
      detail::require<ParameterError>(r.p_lo.num >= 0 && r.n_lo.num >= 0,
                                      "RectFamily: rectangle leaves the positive quadrant");
    }
  }
  std::vector<Rectangle> rects_;
  bool hypotheses_checked_ = false;
  double Q_ = 0, X_ = 0, M_ = 0, Y_ = 0;
};

/// alpha is indexed by n, beta by p; |beta(p)| <= 1 is required at every
/// prime the family touches.
inline cplx rect_bilinear(std::span<const cplx> alpha, std::span<const cplx> beta, const PolyPhase& F,
                          const RectFamily& family, const PrimeSieve& sieve) {
  const auto& rects = family.rects();
  i128 p_max = 0, pn_max = 0;
  for (const auto& r : rects) {
    const auto [p0, p1] = r.p_range();
    const auto [n0, n1] = r.n_range();
    if (p1 < std::max<i128>(p0, 2) || n1 < std::max<i128>(n0, 1)) continue;
    p_max = std::max(p_max, p1);
    detail::require<ParameterError>(static_cast<i128>(alpha.size()) > n1,
                                    "rect_bilinear: alpha values do not cover the n-sides");
    pn_max = std::max(pn_max, p1 * n1);
  }
  if (p_max < 2) return 0.0;
  detail::require<ParameterError>(static_cast<i128>(beta.size()) > p_max,
                                  "rect_bilinear: beta values do not cover the p-sides");
  detail::require<ParameterError>(static_cast<i128>(sieve.limit()) >= p_max,
                                  "rect_bilinear: sieve too small");
  detail::require<ParameterError>(pn_max <= static_cast<i128>(kMaxPhaseArgument),
                                  "rect_bilinear: pn exceeds the phase range");
  check_phase_range(F, static_cast<u64>(pn_max));
  for (u64 p = 2; p <= static_cast<u64>(p_max); ++p)
    if (sieve.is_prime(p))
      detail::require<ParameterError>(std::abs(beta[p]) <= 1.0 + 1e-12,
                                      "rect_bilinear: |beta(p)| > 1 at p = " + std::to_string(p));

  std::vector<cplx> per_rect(rects.size());
  parallel_for(rects.size(), [&](std::size_t t) {
    auto [p0, p1] = rects[t].p_range();
    auto [n0, n1] = rects[t].n_range();
    p0 = std::max<i128>(p0, 2);
    n0 = std::max<i128>(n0, 1);
    cplx acc = 0;
    for (i128 p = p0; p <= p1; ++p) {
      if (!sieve.is_prime(static_cast<u64>(p))) continue;
      cplx row = 0;
      for (i128 n = n0; n <= n1; ++n)
        row += alpha[static_cast<std::size_t>(n)] *
               unit_exp(frac_eval_unchecked(F, static_cast<u64>(p * n)));
      acc += beta[static_cast<std::size_t>(p)] * row;
    }
    per_rect[t] = acc;
  });
  return pairwise_reduce(std::span<const cplx>(per_rect));
}

// ---------------------------------------------------------------------------
// Bound report.

struct BoundTerms {
  RationalApprox approx;
  double rhs_arc = 0.0;
  double rhs_tail = 0.0;
  double rhs_total = 0.0;
  /// (log N)^{4r^2} <= q <= N^ell / (log N)^{4r^2}
  bool q_in_window = false;
};

struct BoundReport {
  u64 N = 0;
  int r = 0;
  double A = 0.0;
  cplx sum;
  double lhs = 0.0;
  double rhs_main = 0.0;  ///< N / (log N)^{1-C}
  double rhs_arc = 0.0;   ///< N (log N)^C (q/N^ell + 1/q)^{1/(4r^2)}
  double rhs_tail = 0.0;  ///< (N R^{1/ell})^{1/2}
  double ratio = 0.0;     ///< lhs / (rhs_main + rhs_arc + rhs_tail)
  RationalApprox approx;  ///< certificate of the selected ell
  bool q_in_window = false;
  std::vector<BoundTerms> candidates;  ///< one per ell, index ell-1
  double C() const { return A / (2.0 * r); }
};

struct BoundOptions {
  /// Approximation range shared by every ell; unset means R_ell = N^{ell/2}.
  std::optional<double> R;
};

/// Evaluates S and every term of the bound for each ell, keeping the ell
/// whose right-hand side is smallest (ties to the smaller ell).
inline BoundReport theorem1_report(std::span<const cplx> f, const PolyPhase& F, u64 N, int r, double A,
                                   const BoundOptions& opt = {}) {
  const int d = F.degree();
  detail::require<ParameterError>(r > d * (d + 1), "theorem1_report needs r > d(d+1)");
  detail::require<ParameterError>(A >= 0, "theorem1_report needs A >= 0");
  detail::require<ParameterError>(N >= 3, "theorem1_report needs N >= 3");
  detail::require<ParameterError>(!opt.R || *opt.R >= 1.0, "theorem1_report needs R >= 1");

  BoundReport out;
  out.N = N;
  out.r = r;
  out.A = A;
  out.sum = weyl_sum(f, F, N);
  out.lhs = std::abs(out.sum);
  const double Nd = static_cast<double>(N);
  const double logN = std::log(Nd);
  const double C = out.C();
  out.rhs_main = Nd / std::pow(logN, 1.0 - C);
  const double window = std::pow(logN, 4.0 * r * r);

  double best = std::numeric_limits<double>::infinity();
  for (int ell = 1; ell <= d; ++ell) {
    const double N_ell = std::pow(Nd, ell);
    const double R = opt.R ? *opt.R : std::max(1.0, std::sqrt(N_ell));
    BoundTerms t;
    t.approx = dirichlet_approx(F.coeff(ell), R, ell);
    const double q = static_cast<double>(t.approx.q);
    t.rhs_arc = Nd * std::pow(logN, C) * std::pow(q / N_ell + 1.0 / q, 1.0 / (4.0 * r * r));
    t.rhs_tail = std::sqrt(Nd * std::pow(R, 1.0 / ell));
    t.rhs_total = out.rhs_main + t.rhs_arc + t.rhs_tail;
    t.q_in_window = window <= q && q <= N_ell / window;
    if (t.rhs_total < best) {
      best = t.rhs_total;
      out.rhs_arc = t.rhs_arc;
      out.rhs_tail = t.rhs_tail;
      out.approx = t.approx;
      out.q_in_window = t.q_in_window;
    }
    out.candidates.push_back(t);
  }
  out.ratio = out.lhs / best;
  return out;
}

}  // namespace weylmult

#endif  // WEYLMULT_WEYLSUM_HPP
