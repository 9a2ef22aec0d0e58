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
//
// Shared statistical helpers and independent oracles for the tests.
// Oracles here must not share an implementation path with the code
// they check.

#ifndef PRIVFED_TESTS_SUPPORT_HPP_
#define PRIVFED_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "privfed/specfn.hpp"

namespace privfed::testsupport {

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
  int64_t n = 0;
};

inline Moments moments(std::span<const double> xs) {
  Moments m;
  m.n = static_cast<int64_t>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(m.n);
  double sq = 0.0;
  for (double x : xs) sq += (x - m.mean) * (x - m.mean);
  m.stddev = m.n > 1 ? std::sqrt(sq / static_cast<double>(m.n - 1)) : 0.0;
  return m;
}

// Exact big-integer binomial tail sum, valid for d <= 64 (the totals
// fit in 128 bits). Independent of the log-space implementation.
inline unsigned __int128 exact_binom_tail(int d, int lo, int hi) {
  // Pascal's triangle row d in 128-bit integers.
  std::vector<unsigned __int128> row(static_cast<size_t>(d) + 1, 0);
  row[0] = 1;
  for (int n = 1; n <= d; ++n) {
    for (int k = n; k >= 1; --k) row[static_cast<size_t>(k)] += row[static_cast<size_t>(k - 1)];
  }
  unsigned __int128 total = 0;
  for (int l = lo; l <= hi; ++l) total += row[static_cast<size_t>(l)];
  return total;
}

inline double log_u128(unsigned __int128 v) {
  // Exact for v < 2^53; splits otherwise.
  const double two64 = 18446744073709551616.0;
  const uint64_t hi = static_cast<uint64_t>(v >> 64);
  const uint64_t lo = static_cast<uint64_t>(v);
  return std::log(static_cast<double>(hi) * two64 + static_cast<double>(lo));
}

// Two-sample Kolmogorov-Smirnov test; returns true when the samples
// are indistinguishable at level alpha (asymptotic critical value).
inline bool ks_two_sample_pass(std::vector<double> a, std::vector<double> b,
                               double alpha) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const size_t n = a.size();
  const size_t m = b.size();
  size_t i = 0;
  size_t j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    const double x = std::min(a[i], b[j]);
    while (i < n && a[i] <= x) ++i;
    while (j < m && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / static_cast<double>(n) -
                             static_cast<double>(j) / static_cast<double>(m)));
  }
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double crit =
      c * std::sqrt((static_cast<double>(n) + static_cast<double>(m)) /
                    (static_cast<double>(n) * static_cast<double>(m)));
  return d <= crit;
}

// Student-t two-sided p-value via the regularized incomplete beta.
inline double t_test_p_value(double t, double dof) {
  const double x = dof / (dof + t * t);
  return specfn::reg_inc_beta(x, 0.5 * dof, 0.5).linear();
}

// One-sample two-sided t test of mean(xs) == mu0; true = fail to
// reject at level alpha.
inline bool t_test_fails_to_reject(std::span<const double> xs, double mu0,
                                   double alpha) {
  const Moments m = moments(xs);
  const double se = m.stddev / std::sqrt(static_cast<double>(m.n));
  if (se == 0.0) return m.mean == mu0;
  const double t = (m.mean - mu0) / se;
  return t_test_p_value(t, static_cast<double>(m.n - 1)) >= alpha;
}

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace privfed::testsupport

#endif  // PRIVFED_TESTS_SUPPORT_HPP_
