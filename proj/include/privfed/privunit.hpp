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
// Privatized release of unit l2 vectors by spherical-cap sampling: the
// input direction is re-sampled uniformly from the cap {<v,u> >= gamma}
// with probability p and from its complement otherwise, then rescaled
// by a debiasing constant so the released vector is unbiased with a
// deterministic norm 1/m.

#ifndef PRIVFED_PRIVUNIT_HPP_
#define PRIVFED_PRIVUNIT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "privfed/rng.hpp"

namespace privfed::privunit {

struct Params {
  int64_t dim = 0;
  double gamma = 0.0;       // cap threshold, in [0, 1)
  double p = 0.5;           // cap probability, in [1/2, 1]
  double m = 0.0;           // debiasing norm constant; output norm is 1/m
  double eps_direction = 0.0;  // budget these parameters certify

  // Cached log quantities for the samplers and the privacy audit.
  double log_cap_prob = 0.0;   // ln P(<U,u> >= gamma)
  double log_comp_prob = 0.0;  // ln P(<U,u> < gamma)
};

// Largest gamma in [0, 1) certified at privacy level eps for dimension
// d: the closed-form small-threshold branch and a bisection solve of
// the large-threshold branch (valid for gamma >= sqrt(2/d)), taking the
// max of the two candidates.
double solve_gamma(double eps, int64_t d);

// Debiasing constant m = p*g_plus + (1-p)*g_minus assembled fully in
// log space; throws std::invalid_argument when m <= 0 (the mechanism
// would be degenerate).
double norm_constant(int64_t d, double gamma, double p);

Params make_params(int64_t d, double gamma, double p, double eps_direction);

// Draws one privatized vector into out (norm 1/m up to rounding).
// Inputs with | ||u|| - 1 | <= 1e-6 are renormalized (flag reported via
// renormalized when non-null); anything farther from unit norm throws.
void sample(std::span<const double> u, const Params& params, Rng& rng,
            std::span<double> out, bool* renormalized = nullptr);

std::vector<double> sample(std::span<const double> u, const Params& params,
                           Rng& rng);

// Exact worst-case log-likelihood ratio of the mechanism:
//   logit(p) + ln P(<U,u> < gamma) - ln P(<U,u> >= gamma).
// Callers assert this does not exceed the claimed budget.
double privacy_log_ratio(const Params& params);

}  // namespace privfed::privunit

#endif  // PRIVFED_PRIVUNIT_HPP_
