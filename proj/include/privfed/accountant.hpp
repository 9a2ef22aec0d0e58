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
// Central-privacy accounting for the aggregation loop: closed-form
// Renyi-2 cost per subsampled Gaussian round, noise sizing for a target
// budget, and Renyi <-> (eps, delta) conversions. Only the closed forms
// are implemented; the numerically optimized moments accountant is a
// different tool and is intentionally out of scope here. sigma is in
// the units of one clipped update, before the eta/(qN) server scaling
// (the bound depends only on the ratio rho/sigma, which that common
// scaling leaves unchanged).

#ifndef PRIVFED_ACCOUNTANT_HPP_
#define PRIVFED_ACCOUNTANT_HPP_

#include <cstdint>

namespace privfed::accountant {

// log(1 + (q^2/(1-q)) (e^{rho^2/sigma^2} - 1)): the Renyi-2 divergence
// cost of one round at subsampling rate q, clip radius rho, noise
// sigma. sigma == 0 returns +infinity.
double renyi2_per_round(double q, double rho, double sigma);

// Exact inversion of T * renyi2_per_round(q, rho, sigma) = eps:
//   sigma = rho / sqrt(log(1 + eps (1-q) / (T q^2))).
double sigma_for_budget(int64_t rounds, double q, double rho, double eps);

// First-order approximation sqrt(T q^2 rho^2 / eps), exposed for
// comparison with the exact inversion.
double sigma_for_budget_approx(int64_t rounds, double q, double rho,
                               double eps);

// (eps, lambda)-Renyi to (eps + log(1/delta)/(lambda-1), delta)-DP.
double renyi_to_dp(double eps_renyi, double lambda, double delta);

// eps-DP to (min(eps, 2 lambda eps^2), lambda)-Renyi.
double dp_to_renyi(double eps, double lambda);

// Accumulates identical rounds of the lambda = 2 bound.
class Accountant {
 public:
  Accountant(double q, double rho, double sigma);

  void record_round() { record_rounds(1); }
  void record_rounds(int64_t n);

  double total_renyi2() const { return total_; }
  int64_t rounds() const { return rounds_; }
  double to_dp(double delta) const { return renyi_to_dp(total_, 2.0, delta); }

  // The sigma sizing rule carries an o(1) term valid as q*lambda -> 0;
  // false signals that regime does not apply (q*lambda > 0.1).
  bool small_sampling_regime() const { return 2.0 * q_ <= 0.1; }

 private:
  double q_;
  double per_round_;
  double total_ = 0.0;
  int64_t rounds_ = 0;
};

}  // namespace privfed::accountant

#endif  // PRIVFED_ACCOUNTANT_HPP_
