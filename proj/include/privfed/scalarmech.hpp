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
// eps-DP release of a bounded scalar magnitude by randomized rounding
// to k+1 levels, (k+1)-ary randomized response, and debiasing. The
// absolute-error variant uses evenly spaced levels on [0, r_max]; the
// relative-error variant uses geometrically growing intervals.

#ifndef PRIVFED_SCALARMECH_HPP_
#define PRIVFED_SCALARMECH_HPP_

#include <cstdint>

#include "privfed/rng.hpp"

namespace privfed::scalarmech {

struct ScalarDPParams {
  double eps = 0.0;
  int64_t k = 1;
  double r_max = 1.0;
  double a = 0.0;  // debias scale ((e^eps + k)/(e^eps - 1)) * (r_max / k)
  double b = 0.0;  // debias offset k(k+1) / (2(e^eps + k))
};

struct ScalarRelDPParams {
  double eps = 0.0;
  int64_t k = 1;
  double alpha = 0.0;  // accuracy floor
  double nu = 2.0;     // interval growth factor (> 1)
  double r_max = 1.0;
  double a = 0.0;  // alpha * (e^eps + k)/(e^eps - 1)
  double b = 0.0;  // (sum_{j=1}^k nu^j) / (e^eps + k)
};

// Default level count ceil(e^{eps/3}).
int64_t k_for_eps(double eps);
// Conservative alternative ceil(e^{2 eps/3}), exposed as a config choice.
int64_t k_for_eps_conservative(double eps);

ScalarDPParams make_scalar_dp(double eps, int64_t k, double r_max);

// k < 1 selects the smallest k with nu^k * alpha >= r_max.
ScalarRelDPParams make_scalar_rel_dp(double eps, double alpha, double nu,
                                     double r_max, int64_t k = 0);

// One absolute-error release; unbiased for r in [0, r_max], values
// above r_max are clamped first. r < 0 throws.
double scalar_dp(double r, const ScalarDPParams& params, Rng& rng);

// One relative-error release; unbiased for r < r_max.
double scalar_rel_dp(double r, const ScalarRelDPParams& params, Rng& rng);

// Log-likelihood ratio of the (k+1)-ary randomized-response kernel;
// equals eps identically and serves as a self-check of the certificate.
double rr_privacy_ratio(int64_t k, double eps);

}  // namespace privfed::scalarmech

#endif  // PRIVFED_SCALARMECH_HPP_
