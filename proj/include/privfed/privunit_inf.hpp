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
// Privatized release of l-infinity box vectors via hypercube caps: the
// input is randomly rounded to a corner of [-1,1]^d, a corner V is then
// sampled from {v : <v, corner> > kappa} with probability p (complement
// otherwise), and the result is debiased to an unbiased estimate with
// deterministic max-norm 1/m.

#ifndef PRIVFED_PRIVUNIT_INF_HPP_
#define PRIVFED_PRIVUNIT_INF_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "privfed/rng.hpp"

namespace privfed::privunit_inf {

struct Params {
  int64_t dim = 0;
  int64_t kappa = 0;     // cap threshold, in {0, ..., d-1}
  double p = 0.5;        // cap probability
  int64_t dtau = 0;      // ceil((d + kappa + 1) / 2); cap = match count >= dtau
  double m = 0.0;        // debiasing constant; output max-norm is 1/m
  double eps_direction = 0.0;

  double log_tail_hi = 0.0;  // ln sum_{l=dtau}^{d} C(d,l)
  double log_tail_lo = 0.0;  // ln sum_{l=0}^{dtau-1} C(d,l)
};

// The exact feasibility condition at threshold kappa:
//   ln sum_{l<dtau} C(d,l) - ln sum_{l>=dtau} C(d,l) <= eps.
double exact_condition_lhs(int64_t d, int64_t kappa);

// Largest kappa in {0, ..., d-1} satisfying the exact binomial-tail
// condition at eps, by binary search (the left side is nondecreasing in
// kappa). Returns nullopt when not even kappa = 0 qualifies (possible
// for even d at small eps); never silently certifies a false budget.
std::optional<int64_t> solve_kappa(double eps, int64_t d);

// Closed-form sufficient thresholds, exposed for cross-checks. Both are
// stated for even d (and even kappa); they under-estimate the exact
// search slightly.
double kappa_bound_small(double eps, int64_t d);
double kappa_bound_large(double eps, int64_t d);

// Debiasing constant m = p*k_plus + (1-p)*k_minus in log space; throws
// std::invalid_argument when m <= 0.
double norm_constant(int64_t d, int64_t kappa, double p);

Params make_params(int64_t d, int64_t kappa, double p, double eps_direction);

// One privatized draw; all coordinates of m*out are +-1. Coordinates of
// u within 1e-6 outside [-1,1] are clamped (reported via clamped);
// anything farther throws.
void sample(std::span<const double> u, const Params& params, Rng& rng,
            std::span<double> out, bool* clamped = nullptr);

std::vector<double> sample(std::span<const double> u, const Params& params,
                           Rng& rng);

// logit(p) + ln P(match count < dtau) - ln P(match count >= dtau).
double privacy_log_ratio(const Params& params);

}  // namespace privfed::privunit_inf

#endif  // PRIVFED_PRIVUNIT_INF_HPP_
