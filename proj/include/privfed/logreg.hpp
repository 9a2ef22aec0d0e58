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
// Simulated logistic regression under locally private SGD: synthetic
// data on the unit sphere, a Monte Carlo population-risk oracle with
// common random numbers, single-pass private SGD with Polyak averaging,
// and the repetition/budget-grid experiment driver.

#ifndef PRIVFED_LOGREG_HPP_
#define PRIVFED_LOGREG_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "privfed/rng.hpp"

namespace privfed::logreg {

struct Task {
  int64_t d = 0;
  int64_t n = 0;
  double tau = 1.0;  // signal strength ||theta*||
  uint64_t seed = 0;
  std::vector<double> theta_star;  // uniform on tau * S^{d-1}
};

Task make_task(int64_t d, int64_t n, double tau, uint64_t seed);

struct Dataset {
  int64_t d = 0;
  std::vector<double> x;  // n x d, row major, unit rows
  std::vector<int8_t> y;  // +-1
};

// x uniform on the sphere; P(y = 1 | x) = sigmoid(<theta*, x>).
Dataset generate(const Task& task, Rng& rng);

// grad = -y * sigmoid(-y <theta, x>) * x; returns <theta, x>.
double logistic_gradient(std::span<const double> theta,
                         std::span<const double> x, int y,
                         std::span<double> grad);

// Population risk E[softplus(-Y <theta, X>)] by fixed-seed Monte Carlo
// with the label integrated out analytically per draw:
//   E_Y[loss | x] = softplus(<theta,x>) - sigmoid(<theta*,x>) <theta,x>.
// Only the two projections (<theta,x>, <theta*,x>) matter, so draws are
// cached as projections onto an orthonormal basis of span{theta*, .}
// and every evaluation reuses them (common random numbers across all
// theta within a run). O(eval_draws) per query, independent of d.
class RiskEvaluator {
 public:
  RiskEvaluator(const Task& task, int64_t eval_draws, uint64_t eval_seed);

  double risk(std::span<const double> theta) const;
  // Serial reference with the identical block structure (bit-identical).
  double risk_reference(std::span<const double> theta) const;

  double risk_at_optimum() const { return risk_at_optimum_; }
  double excess(std::span<const double> theta) const {
    return risk(theta) - risk_at_optimum_;
  }
  // Excess risk of the zero model: ln 2 - risk(theta*).
  double zero_model_excess() const;

  int64_t draws() const { return static_cast<int64_t>(proj1_.size()); }

 private:
  double blocked_risk(double coef1, double coef2, bool parallel) const;

  const Task* task_;
  std::vector<double> proj1_;       // <e1, x>, e1 = theta*/tau
  std::vector<double> proj2_;       // <e2, x>, e2 orthonormal completion
  std::vector<double> sig_signal_;  // sigmoid(tau * proj1)
  double risk_at_optimum_ = 0.0;
};

// Full-dimensional Monte Carlo of the same risk; an independent check
// of the projected evaluator at small d.
double population_risk_direct(const Task& task, std::span<const double> theta,
                              int64_t draws, uint64_t seed);

struct Schedule {
  double eta0 = 1.0;
  double beta = 0.51;  // step t uses eta0 * t^{-beta}
};

// eta0 = sqrt(eps/d), capped at 1; non-private (eps = inf) uses 1.
Schedule default_schedule(double eps, int64_t d);

struct SgdResult {
  std::vector<double> theta_bar;  // Polyak average of the iterates
  std::vector<int64_t> checkpoint_steps;
  std::vector<double> excess_iterate;
  std::vector<double> excess_average;
  std::vector<double> param_error_average;
  double final_excess = 0.0;       // excess risk of theta_bar
  double final_param_error = 0.0;  // ||theta_bar - theta*||
  bool diverged = false;
};

// One pass of single-sample SGD over the dataset (T = n steps) with the
// gradient privatized per step at total budget eps (eps1 = 13 eps/16,
// flip eps/16, magnitude eps/8, r_max = 1 since ||grad|| <= ||x|| = 1);
// eps = +infinity runs the raw-gradient baseline.
SgdResult private_sgd(const Task& task, const Dataset& data, double eps,
                      const Schedule& schedule, const RiskEvaluator& evaluator,
                      int64_t checkpoints, uint64_t mech_seed);

struct SuiteConfig {
  int64_t d = 100;
  int64_t n = 20000;
  double tau = 4.0;
  std::vector<double> eps_grid;  // may contain +infinity
  int64_t repetitions = 10;
  uint64_t master_seed = 1;
  int64_t eval_draws = 1000000;
  int64_t checkpoints = 100;
};

struct CellResult {
  int64_t rep = 0;
  double eps = 0.0;
  double zero_model_excess = 0.0;  // per-repetition reference
  SgdResult sgd;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<CellResult> cells;  // ordered by (rep, eps index)
};

// Repetitions x budget grid; cells run in parallel, each with its own
// seed lineage, so results are independent of scheduling.
SuiteResult run_experiment_suite(const SuiteConfig& config,
                                 bool parallel = true);

// Trace of the empirical covariance of sqrt(T) (theta_bar - theta*)
// across repetitions at a fixed task (fresh data per repetition).
double asymptotic_covariance_trace(const Task& task, double eps,
                                   int64_t repetitions, uint64_t seed,
                                   bool parallel = true);

}  // namespace privfed::logreg

#endif  // PRIVFED_LOGREG_HPP_
