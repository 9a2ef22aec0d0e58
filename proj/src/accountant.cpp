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

#include "privfed/accountant.hpp"

#include <cmath>
#include <stdexcept>

#include "privfed/common.hpp"

namespace privfed::accountant {

double renyi2_per_round(double q, double rho, double sigma) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("renyi2_per_round: q outside (0, 1)");
  }
  if (rho < 0.0) throw std::domain_error("renyi2_per_round: rho must be >= 0");
  if (sigma < 0.0) {
    throw std::domain_error("renyi2_per_round: sigma must be >= 0");
  }
  if (rho == 0.0) return 0.0;
  if (sigma == 0.0) return kInf;
  const double ratio2 = (rho / sigma) * (rho / sigma);
  return std::log1p(q * q / (1.0 - q) * std::expm1(ratio2));
}

double sigma_for_budget(int64_t rounds, double q, double rho, double eps) {
  if (rounds < 1) throw std::domain_error("sigma_for_budget: rounds >= 1");
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("sigma_for_budget: q outside (0, 1)");
  }
  if (!(rho > 0.0) || !(eps > 0.0)) {
    throw std::domain_error("sigma_for_budget: rho and eps must be > 0");
  }
  // Exact inversion of rounds * renyi2_per_round(q, rho, sigma) = eps;
  // replacing expm1(eps/T) by eps/T recovers the familiar display form
  // rho / sqrt(log(1 + eps (1-q)/(T q^2))), accurate as eps/T -> 0.
  const double t = static_cast<double>(rounds);
  return rho /
         std::sqrt(std::log1p(std::expm1(eps / t) * (1.0 - q) / (q * q)));
}

double sigma_for_budget_approx(int64_t rounds, double q, double rho,
                               double eps) {
  if (rounds < 1) throw std::domain_error("sigma_for_budget_approx: rounds");
  const double t = static_cast<double>(rounds);
  return std::sqrt(t * q * q * rho * rho / eps);
}

double renyi_to_dp(double eps_renyi, double lambda, double delta) {
  if (!(lambda > 1.0)) {
    throw std::domain_error("renyi_to_dp: lambda must be > 1");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("renyi_to_dp: delta outside (0, 1)");
  }
  return eps_renyi + std::log(1.0 / delta) / (lambda - 1.0);
}

double dp_to_renyi(double eps, double lambda) {
  if (eps < 0.0) throw std::domain_error("dp_to_renyi: eps must be >= 0");
  if (lambda < 1.0) throw std::domain_error("dp_to_renyi: lambda must be >= 1");
  return std::min(eps, 2.0 * lambda * eps * eps);
}

Accountant::Accountant(double q, double rho, double sigma)
    : q_(q), per_round_(renyi2_per_round(q, rho, sigma)) {}

void Accountant::record_rounds(int64_t n) {
  if (n < 0) throw std::domain_error("record_rounds: n must be >= 0");
  rounds_ += n;
  total_ += static_cast<double>(n) * per_round_;
}

}  // namespace privfed::accountant
