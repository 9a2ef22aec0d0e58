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

#include "privfed/privunit.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "privfed/common.hpp"
#include "privfed/rng.hpp"
#include "support.hpp"

using namespace privfed;
using namespace privfed::privunit;

namespace {

std::vector<double> random_unit(int64_t d, Rng& rng) {
  std::vector<double> u(static_cast<size_t>(d));
  double sq = 0.0;
  for (double& x : u) {
    x = rng.next_gaussian();
    sq += x * x;
  }
  for (double& x : u) x /= std::sqrt(sq);
  return u;
}

double l2_norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

}  // namespace

TEST_CASE("solve_gamma reproduces the published experiment thresholds") {
  CHECK(std::abs(solve_gamma(0.99 * 500.0, 3274634) - 0.01729) <= 1e-4);
  CHECK(std::abs(solve_gamma(0.99 * 5000.0, 1068298) - 0.09598) <= 1e-4);
}

TEST_CASE("solve_gamma small-budget limit") {
  // As eps -> 0 the closed-form branch gives
  // gamma ~ (eps/2) sqrt(pi/(2(d-1))).
  const int64_t d = 1000;
  for (double eps : {1e-4, 1e-6}) {
    const double expected =
        0.5 * eps * std::sqrt(std::numbers::pi / (2.0 * (d - 1.0)));
    CHECK(solve_gamma(eps, d) == doctest::Approx(expected).epsilon(1e-6));
  }
  CHECK_THROWS_AS(solve_gamma(0.0, 10), std::domain_error);
}

TEST_CASE("norm_constant closed form at d=2") {
  // E[U1 | U1 >= 0] on the circle is 2/pi.
  CHECK(norm_constant(2, 0.0, 1.0) ==
        doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
  // p = 1/2 at gamma = 0 makes E[V] = 0: degenerate, must be rejected.
  CHECK_THROWS_AS(norm_constant(2, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("norm_constant at gamma=0 matches hemisphere Monte Carlo") {
  const int64_t d = 6;
  const int64_t n = 4'000'000;
  Rng rng(7101);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<double> u(static_cast<size_t>(d));
  for (int64_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double& x : u) {
      x = rng.next_gaussian();
      sq += x * x;
    }
    const double v = std::abs(u[0]) / std::sqrt(sq);  // E|U1| = E[U1 | U1>=0]
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum_sq / static_cast<double>(n) - mean * mean;
  const double se = std::sqrt(var / static_cast<double>(n));
  CHECK(std::abs(norm_constant(d, 0.0, 1.0) - mean) <= 3.0 * se);
}

TEST_CASE("norm_constant matches the sampler's empirical projection") {
  const int64_t d = 20;
  const Params params = make_params(d, 0.3, 0.9, 0.0);
  Rng rng(5150);
  const auto u = random_unit(d, rng);
  const int64_t n = 1'000'000;
  std::vector<double> out(static_cast<size_t>(d));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    sample(u, params, rng, out);
    // <V, u> = m <Z, u>.
    double dot = 0.0;
    for (int64_t j = 0; j < d; ++j) dot += out[static_cast<size_t>(j)] * u[static_cast<size_t>(j)];
    const double v = params.m * dot;
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum_sq / static_cast<double>(n) - mean * mean;
  const double se = std::sqrt(var / static_cast<double>(n));
  CHECK(std::abs(params.m - mean) <= 3.0 * se);
}

TEST_CASE("sample has deterministic norm 1/m and the advertised cap rate") {
  const int64_t d = 12;
  const Params params = make_params(d, 0.4, 0.8, 0.0);
  Rng rng(99);
  const auto u = random_unit(d, rng);
  std::vector<double> out(static_cast<size_t>(d));
  const int64_t n = 20000;
  int64_t in_cap = 0;
  for (int64_t i = 0; i < n; ++i) {
    sample(u, params, rng, out);
    CHECK(l2_norm(out) == doctest::Approx(1.0 / params.m).epsilon(1e-9));
    double dot = 0.0;
    for (int64_t j = 0; j < d; ++j) dot += out[static_cast<size_t>(j)] * u[static_cast<size_t>(j)];
    if (params.m * dot >= params.gamma - 1e-12) ++in_cap;
  }
  const double frac = static_cast<double>(in_cap) / static_cast<double>(n);
  const double band =
      3.0 * std::sqrt(params.p * (1.0 - params.p) / static_cast<double>(n));
  CHECK(std::abs(frac - params.p) <= band);
}

TEST_CASE("degenerate cap at gamma near 1 with p = 1 returns the pole") {
  const int64_t d = 8;
  const Params params = make_params(d, 0.999999, 1.0, 0.0);
  Rng rng(17);
  std::vector<double> u(static_cast<size_t>(d), 0.0);
  u[0] = 1.0;
  std::vector<double> out(static_cast<size_t>(d));
  for (int i = 0; i < 50; ++i) {
    sample(u, params, rng, out);
    CHECK(params.m * out[0] >= 0.999999);
  }
}

TEST_CASE("Monte Carlo unbiasedness with CLT band") {
  const int64_t d = 20;
  const double eps = 4.0;
  const Params params = make_params(d, solve_gamma(eps, d), 0.5, eps);
  Rng rng(31337);
  const auto u = random_unit(d, rng);
  const int64_t n = 200000;
  std::vector<double> mean(static_cast<size_t>(d), 0.0);
  std::vector<double> out(static_cast<size_t>(d));
  for (int64_t i = 0; i < n; ++i) {
    sample(u, params, rng, out);
    for (int64_t j = 0; j < d; ++j) mean[static_cast<size_t>(j)] += out[static_cast<size_t>(j)];
  }
  for (double& x : mean) x /= static_cast<double>(n);
  // Per-coordinate deviation bounded by 3.5 x the worst-case coordinate
  // sigma (coordinates of Z are bounded by 1/m).
  const double band =
      3.5 / (params.m * std::sqrt(static_cast<double>(n)));
  for (int64_t j = 0; j < d; ++j) {
    CHECK(std::abs(mean[static_cast<size_t>(j)] - u[static_cast<size_t>(j)]) <= band);
  }
}

TEST_CASE("rotational equivariance: projection law is frame independent") {
  const int64_t d = 10;
  const Params params = make_params(d, 0.35, 0.75, 0.0);
  const int64_t n = 10000;
  std::vector<double> at_pole;
  std::vector<double> at_random;
  {
    Rng rng(2024);
    std::vector<double> u(static_cast<size_t>(d), 0.0);
    u[0] = 1.0;
    std::vector<double> out(static_cast<size_t>(d));
    for (int64_t i = 0; i < n; ++i) {
      sample(u, params, rng, out);
      at_pole.push_back(params.m * out[0]);
    }
  }
  {
    Rng rng(4048);
    const auto u = random_unit(d, rng);
    std::vector<double> out(static_cast<size_t>(d));
    for (int64_t i = 0; i < n; ++i) {
      sample(u, params, rng, out);
      double dot = 0.0;
      for (int64_t j = 0; j < d; ++j) dot += out[static_cast<size_t>(j)] * u[static_cast<size_t>(j)];
      at_random.push_back(params.m * dot);
    }
  }
  CHECK(testsupport::ks_two_sample_pass(at_pole, at_random, 0.01));
}

TEST_CASE("input validation: near-unit renormalized, far rejected") {
  const int64_t d = 5;
  const Params params = make_params(d, 0.2, 0.7, 0.0);
  Rng rng(1);
  std::vector<double> u(static_cast<size_t>(d), 0.0);
  u[0] = 1.0 + 5e-8;
  std::vector<double> out(static_cast<size_t>(d));
  bool renormalized = false;
  sample(u, params, rng, out, &renormalized);
  CHECK(renormalized);
  u[0] = 1.01;
  CHECK_THROWS_AS(sample(u, params, rng, out), std::invalid_argument);
}

TEST_CASE("privacy log ratio closed forms and solver certificates") {
  // Uniform mechanism: gamma = 0, p = 1/2 leaks nothing; the ratio for
  // p = 1/2 is ln(P< / P>=) which is 0 at gamma = 0. make_params would
  // reject m = 0, so evaluate through a direct params struct.
  Params uniform;
  uniform.dim = 10;
  uniform.gamma = 0.0;
  uniform.p = 0.5;
  uniform.log_cap_prob = std::log(0.5);
  uniform.log_comp_prob = std::log(0.5);
  CHECK(privacy_log_ratio(uniform) == doctest::Approx(0.0).epsilon(1e-12));

  for (double eps : {0.5, 1.0, 5.0, 50.0}) {
    for (int64_t d : {10, 100, 10000}) {
      const double gamma = solve_gamma(eps, d);
      const Params params = make_params(d, gamma, 0.5, eps);
      CHECK(privacy_log_ratio(params) <= eps + 1e-9);
    }
  }
}

TEST_CASE("utility norm is monotone in the budget and minimax-shaped") {
  // The d/eps scaling is claimed for eps <= d. Frozen scale constant:
  // max over this grid observed 2.56 during calibration.
  const double kUtilityConstant = 3.2;
  for (int64_t d : {10, 100, 1000}) {
    double prev = kInf;
    for (double eps : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      const double gamma = solve_gamma(eps, d);
      const double m = norm_constant(d, gamma, 0.5);
      const double znorm = 1.0 / m;
      CHECK(znorm <= prev * (1.0 + 1e-9));
      prev = znorm;
      if (eps > static_cast<double>(d)) continue;
      const double bound =
          kUtilityConstant *
          std::sqrt(static_cast<double>(d) / std::min(eps, eps * eps));
      CHECK(znorm <= bound);
    }
  }
}
