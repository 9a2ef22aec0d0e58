// Copyright 2026 The PrivFed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVFED_PARALLEL_HPP_
#define PRIVFED_PARALLEL_HPP_

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace privfed {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Sums block_fn(block_begin, block_end) over fixed-size blocks of [0, n).
// Blocks run in parallel but partial sums combine in block order, so the
// result is bit-identical for any thread count, including the serial
// reference path below.
template <typename BlockFn>
double blocked_sum(int64_t n, int64_t block_size, BlockFn&& block_fn) {
  if (n <= 0) return 0.0;
  const int64_t num_blocks = (n + block_size - 1) / block_size;
  std::vector<double> partial(static_cast<size_t>(num_blocks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int64_t blk = 0; blk < num_blocks; ++blk) {
    const int64_t lo = blk * block_size;
    const int64_t hi = lo + block_size < n ? lo + block_size : n;
    partial[static_cast<size_t>(blk)] = block_fn(lo, hi);
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

// Serial counterpart with the identical block structure, kept as the
// reference implementation for equivalence tests and benchmarks.
template <typename BlockFn>
double blocked_sum_serial(int64_t n, int64_t block_size, BlockFn&& block_fn) {
  if (n <= 0) return 0.0;
  const int64_t num_blocks = (n + block_size - 1) / block_size;
  double total = 0.0;
  for (int64_t blk = 0; blk < num_blocks; ++blk) {
    const int64_t lo = blk * block_size;
    const int64_t hi = lo + block_size < n ? lo + block_size : n;
    total += block_fn(lo, hi);
  }
  return total;
}

inline constexpr int64_t kDefaultBlock = 8192;

}  // namespace privfed

#endif  // PRIVFED_PARALLEL_HPP_
