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

#include "privfed/separated.hpp"

#include <cmath>
#include <stdexcept>

#include "privfed/common.hpp"

namespace privfed::separated {

Mechanism build_theory(double eps1, double eps2, int64_t d, double r_max) {
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) {
    throw std::domain_error("build_theory: budgets must be positive");
  }
  Mechanism mech;
  mech.split = Split::kTheory;
  mech.eps1 = eps1;
  mech.eps2 = eps2;
  mech.eps_total = eps1 + eps2;
  const double gamma = privunit::solve_gamma(eps1, d);
  mech.direction = privunit::make_params(d, gamma, 0.5, eps1);
  mech.magnitude =
      scalarmech::make_scalar_dp(eps2, scalarmech::k_for_eps(eps2), r_max);
  return mech;
}

Mechanism build_experiment(double eps1, double eps2, int64_t d, double r_max) {
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) {
    throw std::domain_error("build_experiment: budgets must be positive");
  }
  Mechanism mech;
  mech.split = Split::kExperiment;
  mech.eps1 = eps1;
  mech.eps2 = eps2;
  mech.eps_total = eps1 + eps2;
  const double gamma = privunit::solve_gamma(0.99 * eps1, d);
  const double p = sigmoid(0.01 * eps1);
  mech.direction = privunit::make_params(d, gamma, p, eps1);
  mech.magnitude =
      scalarmech::make_scalar_dp(eps2, scalarmech::k_for_eps(eps2), r_max);
  return mech;
}

Mechanism build_logistic_split(double eps, int64_t d, double r_max) {
  if (!(eps > 0.0)) {
    throw std::domain_error("build_logistic_split: eps must be positive");
  }
  Mechanism mech;
  mech.split = Split::kLogistic;
  mech.eps1 = 13.0 * eps / 16.0 + eps / 16.0;  // cap threshold + flip
  mech.eps2 = eps / 8.0;
  mech.eps_total = eps;
  const double gamma = privunit::solve_gamma(13.0 * eps / 16.0, d);
  const double p = sigmoid(eps / 16.0);
  mech.direction = privunit::make_params(d, gamma, p, mech.eps1);
  mech.magnitude = scalarmech::make_scalar_dp(
      mech.eps2, scalarmech::k_for_eps(mech.eps2), r_max);
  return mech;
}

void privatize(std::span<const double> w, const Mechanism& mech, Rng& rng,
               std::span<double> out) {
  const size_t d = w.size();
  if (out.size() != d) {
    throw std::invalid_argument("privatize: dimension mismatch");
  }
  double sq = 0.0;
  for (double x : w) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("privatize: non-finite input");
    }
    sq += x * x;
  }
  const double r = std::sqrt(sq);

  if (r < 1e-12) {
    // Direction undefined at the origin; feed a fresh uniform unit
    // vector so the released product stays unbiased (magnitude part is
    // unbiased at 0 and independent of the direction draw).
    std::vector<double> dir(d);
    double dsq = 0.0;
    for (double& x : dir) {
      x = rng.next_gaussian();
      dsq += x * x;
    }
    const double inv = 1.0 / std::sqrt(dsq);
    for (double& x : dir) x *= inv;
    privunit::sample(dir, mech.direction, rng, out);
    const double z2 = scalarmech::scalar_dp(0.0, mech.magnitude, rng);
    for (double& x : out) x *= z2;
    return;
  }

  std::vector<double> dir(d);
  const double inv_r = 1.0 / r;
  for (size_t i = 0; i < d; ++i) dir[i] = w[i] * inv_r;
  privunit::sample(dir, mech.direction, rng, out);
  const double z2 = scalarmech::scalar_dp(r, mech.magnitude, rng);
  for (double& x : out) x *= z2;
}

std::vector<double> privatize(std::span<const double> w, const Mechanism& mech,
                              Rng& rng) {
  std::vector<double> out(w.size());
  privatize(w, mech, rng, out);
  return out;
}

}  // namespace privfed::separated
