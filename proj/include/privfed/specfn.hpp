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
// Log-space special functions backing the release mechanisms: beta
// functions, the regularized incomplete beta and its inverse, binomial
// tail sums, and spherical-cap probabilities. Everything is carried in
// log space because quantities like (1 - gamma^2)^((d-1)/2) underflow
// far below double range at the dimensions we target (d ~ 10^6).

#ifndef PRIVFED_SPECFN_HPP_
#define PRIVFED_SPECFN_HPP_

#include <cstdint>

#include "privfed/common.hpp"

namespace privfed::specfn {

// ln B(alpha, beta) via log-gamma.
double log_beta(double alpha, double beta);

// ln C(n, k).
double log_choose(int64_t n, int64_t k);

// Regularized incomplete beta in log space: ln I_x(alpha, beta).
// Continued fraction (modified Lentz) with the symmetry
// I_x(a,b) = 1 - I_{1-x}(b,a) applied for x > (a+1)/(a+b+2).
LogProb reg_inc_beta(double x, double alpha, double beta);

// Inverse of I_x(alpha, beta): returns x with |I_x - q| <= 1e-12.
double inv_reg_inc_beta(double q, double alpha, double beta);

// Log-scale inverse: x with ln I_x(alpha, beta) = log_q. Usable for
// targets far below the double underflow threshold of q itself.
double inv_reg_inc_beta_log(double log_q, double alpha, double beta);

// ln P(<U, u> >= gamma) for U uniform on the unit sphere S^{d-1}.
LogProb sphere_cap_logprob(int64_t d, double gamma);

// ln sum_{l=lo}^{hi} C(d, l). A log-scaled count, not a probability
// (subtract d ln 2 for the Binomial(d, 1/2) tail mass).
double log_binom_tail(int64_t d, int64_t lo, int64_t hi);

// Cached-parameter evaluator for hot sampling loops: one log-beta
// evaluation at construction, then repeated CDF / inverse-CDF queries.
class IncompleteBeta {
 public:
  IncompleteBeta(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // ln I_x.
  double log_cdf(double x) const;

  // x such that ln I_x = log_q (bracketing bisection + Newton polish).
  double inv_log_cdf(double log_q) const;

  // ln of the Beta(alpha, beta) density at x.
  double log_density(double x) const;

 private:
  double alpha_;
  double beta_;
  double log_beta_ab_;
};

}  // namespace privfed::specfn

#endif  // PRIVFED_SPECFN_HPP_
