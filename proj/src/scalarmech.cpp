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

#include "privfed/scalarmech.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "privfed/common.hpp"

namespace privfed::scalarmech {
namespace {

constexpr int64_t kMaxLevels = int64_t{1} << 40;

// Randomized response over {0, ..., k}: keep j with probability
// e^eps/(e^eps + k), otherwise uniform among the other k values by
// index shift (exact uniformity, no rejection).
int64_t randomized_response(int64_t j, int64_t k, double eps, Rng& rng) {
  const double keep =
      1.0 / (1.0 + static_cast<double>(k) * std::exp(-eps));
  if (rng.next_double() < keep) return j;
  const int64_t other = static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(k)));
  return other >= j ? other + 1 : other;
}

// Rounds x >= 0 to floor(x) or ceil(x), unbiased, using the fractional
// part from floor to avoid cancellation near integers.
int64_t randomized_round(double x, Rng& rng) {
  const double fl = std::floor(x);
  const double frac = x - fl;
  int64_t j = static_cast<int64_t>(fl);
  if (frac > 0.0 && rng.next_double() < frac) ++j;
  return j;
}

}  // namespace

int64_t k_for_eps(double eps) {
  if (!(eps > 0.0)) throw std::domain_error("k_for_eps: eps must be > 0");
  const double v = std::ceil(std::exp(eps / 3.0));
  if (!(v < static_cast<double>(kMaxLevels))) {
    throw std::domain_error("k_for_eps: level count overflow");
  }
  return static_cast<int64_t>(v);
}

int64_t k_for_eps_conservative(double eps) {
  if (!(eps > 0.0)) {
    throw std::domain_error("k_for_eps_conservative: eps must be > 0");
  }
  const double v = std::ceil(std::exp(2.0 * eps / 3.0));
  if (!(v < static_cast<double>(kMaxLevels))) {
    throw std::domain_error("k_for_eps_conservative: level count overflow");
  }
  return static_cast<int64_t>(v);
}

ScalarDPParams make_scalar_dp(double eps, int64_t k, double r_max) {
  if (!(eps > 0.0)) throw std::domain_error("make_scalar_dp: eps must be > 0");
  if (k < 1) throw std::domain_error("make_scalar_dp: k must be >= 1");
  if (!(r_max > 0.0)) {
    throw std::domain_error("make_scalar_dp: r_max must be > 0");
  }
  ScalarDPParams params;
  params.eps = eps;
  params.k = k;
  params.r_max = r_max;
  const double ee = std::exp(eps);
  const double kk = static_cast<double>(k);
  params.a = ((ee + kk) / std::expm1(eps)) * (r_max / kk);
  params.b = kk * (kk + 1.0) / (2.0 * (ee + kk));
  return params;
}

ScalarRelDPParams make_scalar_rel_dp(double eps, double alpha, double nu,
                                     double r_max, int64_t k) {
  if (!(eps > 0.0)) {
    throw std::domain_error("make_scalar_rel_dp: eps must be > 0");
  }
  if (!(alpha > 0.0)) {
    throw std::domain_error("make_scalar_rel_dp: alpha must be > 0");
  }
  if (!(nu > 1.0)) throw std::domain_error("make_scalar_rel_dp: nu must be > 1");
  if (!(r_max > 0.0)) {
    throw std::domain_error("make_scalar_rel_dp: r_max must be > 0");
  }
  if (k < 1) {
    // Smallest k with nu^k * alpha >= r_max.
    k = std::max<int64_t>(
        1, static_cast<int64_t>(
               std::ceil(std::log(r_max / alpha) / std::log(nu) - 1e-12)));
  }
  // Intervals must cover [0, r_max].
  if (std::pow(nu, static_cast<double>(k)) * alpha < r_max * (1.0 - 1e-12)) {
    throw std::domain_error(
        "make_scalar_rel_dp: nu^k * alpha < r_max, intervals do not cover");
  }
  ScalarRelDPParams params;
  params.eps = eps;
  params.k = k;
  params.alpha = alpha;
  params.nu = nu;
  params.r_max = r_max;
  const double ee = std::exp(eps);
  const double kk = static_cast<double>(k);
  params.a = alpha * (ee + kk) / std::expm1(eps);
  double geom = 0.0;
  for (int64_t j = 1; j <= k; ++j) geom += std::pow(nu, static_cast<double>(j));
  params.b = geom / (ee + kk);
  return params;
}

double scalar_dp(double r, const ScalarDPParams& params, Rng& rng) {
  if (r < 0.0) throw std::domain_error("scalar_dp: r must be >= 0");
  r = std::min(r, params.r_max);
  const double x = static_cast<double>(params.k) * r / params.r_max;
  const int64_t j = randomized_round(x, rng);
  const int64_t jhat = randomized_response(j, params.k, params.eps, rng);
  return params.a * (static_cast<double>(jhat) - params.b);
}

double scalar_rel_dp(double r, const ScalarRelDPParams& params, Rng& rng) {
  if (r < 0.0) throw std::domain_error("scalar_rel_dp: r must be >= 0");
  r = std::min(r, params.r_max);
  const double alpha = params.alpha;
  const double nu = params.nu;
  int64_t j;
  if (r <= nu * alpha) {
    // Interval 0 = [0, nu*alpha]: round between levels 0 and 1.
    j = rng.next_double() < r / (nu * alpha) ? 1 : 0;
  } else {
    // r in [nu^i alpha, nu^{i+1} alpha] for i = istar >= 1.
    int64_t istar =
        static_cast<int64_t>(std::floor(std::log(r / alpha) / std::log(nu)));
    istar = std::clamp<int64_t>(istar, 1, params.k - 1);
    const double lo = std::pow(nu, static_cast<double>(istar)) * alpha;
    const double hi = nu * lo;
    const double up_prob = std::clamp((r - lo) / (hi - lo), 0.0, 1.0);
    j = istar + (rng.next_double() < up_prob ? 1 : 0);
  }
  const int64_t jhat = randomized_response(j, params.k, params.eps, rng);
  const double jtilde =
      jhat >= 1 ? std::pow(nu, static_cast<double>(jhat)) : 0.0;
  return params.a * (jtilde - params.b);
}

double rr_privacy_ratio(int64_t k, double eps) {
  if (k < 1) throw std::domain_error("rr_privacy_ratio: k must be >= 1");
  if (eps < 0.0) throw std::domain_error("rr_privacy_ratio: eps must be >= 0");
  // ln[(e^eps/(e^eps+k)) / (1/(e^eps+k))], assembled without forming
  // e^eps so very large budgets stay finite.
  const double log_denom = logaddexp(eps, std::log(static_cast<double>(k)));
  return (eps - log_denom) - (-log_denom);
}

}  // namespace privfed::scalarmech
