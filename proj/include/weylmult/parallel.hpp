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

// Deterministic parallel reductions.
//
// Every sum is split into fixed blocks of kBlockSize terms. Each block is
// summed sequentially by whichever thread owns it, and the block partials
// are combined by a fixed pairwise tree. The result therefore depends only
// on the input, never on the number of threads.

#ifndef WEYLMULT_PARALLEL_HPP
#define WEYLMULT_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace weylmult {

inline constexpr std::size_t kBlockSize = 4096;

namespace detail {

inline int initial_thread_count() {
  if (const char* env = std::getenv("WEYL_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> slot{initial_thread_count()};
  return slot;
}

}  // namespace detail

/// Worker threads used by every parallel evaluator. Defaults to
/// $WEYL_THREADS, else 1.
inline int thread_count() { return detail::thread_count_slot().load(); }

inline void set_thread_count(int n) {
  detail::thread_count_slot().store(std::max(1, n));
}

/// Runs fn(task) for task in [0, n_tasks), striped over thread_count()
/// threads. Exceptions from workers are rethrown (first one wins).
template <class Fn>
void parallel_for(std::size_t n_tasks, Fn&& fn) {
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n_tasks);
  if (threads <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < n_tasks; t += threads) fn(t);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// Fixed-shape pairwise reduction: split at the midpoint, recurse.
template <class T>
T pairwise_reduce(std::span<const T> xs) {
  if (xs.empty()) return T{};
  if (xs.size() == 1) return xs[0];
  const std::size_t mid = xs.size() / 2;
  return pairwise_reduce(xs.first(mid)) + pairwise_reduce(xs.subspan(mid));
}

/// Sum of term(i) for i in [first, last) under the deterministic block
/// contract.
template <class T, class Term>
T block_sum(std::size_t first, std::size_t last, Term&& term) {
  if (last <= first) return T{};
  const std::size_t n = last - first;
  const std::size_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<T> partial(n_blocks);
  parallel_for(n_blocks, [&](std::size_t b) {
    const std::size_t lo = first + b * kBlockSize;
    const std::size_t hi = std::min(last, lo + kBlockSize);
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[b] = acc;
  });
  return pairwise_reduce(std::span<const T>(partial));
}

using cplx = std::complex<double>;

}  // namespace weylmult

#endif  // WEYLMULT_PARALLEL_HPP
