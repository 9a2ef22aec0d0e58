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

#include "privfed/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "privfed/common.hpp"
#include "privfed/parallel.hpp"
#include "privfed/separated.hpp"

namespace privfed::logreg {
namespace {

constexpr uint64_t kDataTag = 0x101;
constexpr uint64_t kStarTag = 0x102;
constexpr uint64_t kEvalTag = 0x103;
constexpr uint64_t kMechTag = 0x104;
constexpr uint64_t kTaskTag = 0x105;

constexpr double kDivergenceNorm = 1e6;

void fill_unit_sphere(Rng& rng, std::span<double> out) {
  double sq = 0.0;
  for (double& x : out) {
    x = rng.next_gaussian();
    sq += x * x;
  }
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : out) x *= inv;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Task make_task(int64_t d, int64_t n, double tau, uint64_t seed) {
  if (d < 2) throw std::domain_error("make_task: d must be >= 2");
  if (n < 1) throw std::domain_error("make_task: n must be >= 1");
  if (!(tau > 0.0)) throw std::domain_error("make_task: tau must be > 0");
  Task task;
  task.d = d;
  task.n = n;
  task.tau = tau;
  task.seed = seed;
  task.theta_star.resize(static_cast<size_t>(d));
  Rng rng(derive_seed(seed, kStarTag));
  fill_unit_sphere(rng, task.theta_star);
  for (double& x : task.theta_star) x *= tau;
  return task;
}

Dataset generate(const Task& task, Rng& rng) {
  Dataset data;
  data.d = task.d;
  data.x.resize(static_cast<size_t>(task.n * task.d));
  data.y.resize(static_cast<size_t>(task.n));
  for (int64_t i = 0; i < task.n; ++i) {
    const std::span<double> row(data.x.data() + i * task.d,
                                static_cast<size_t>(task.d));
    fill_unit_sphere(rng, row);
    const double margin = dot(row, task.theta_star);
    data.y[static_cast<size_t>(i)] =
        rng.next_double() < sigmoid(margin) ? int8_t{1} : int8_t{-1};
  }
  return data;
}

double logistic_gradient(std::span<const double> theta,
                         std::span<const double> x, int y,
                         std::span<double> grad) {
  const double margin = dot(theta, x);
  const double coef = -static_cast<double>(y) *
                      sigmoid(-static_cast<double>(y) * margin);
  for (size_t i = 0; i < x.size(); ++i) grad[i] = coef * x[i];
  return margin;
}

RiskEvaluator::RiskEvaluator(const Task& task, int64_t eval_draws,
                             uint64_t eval_seed)
    : task_(&task) {
  if (eval_draws < 1) {
    throw std::domain_error("RiskEvaluator: eval_draws must be >= 1");
  }
  proj1_.resize(static_cast<size_t>(eval_draws));
  proj2_.resize(static_cast<size_t>(eval_draws));
  sig_signal_.resize(static_cast<size_t>(eval_draws));
  // For x uniform on S^{d-1}, the projections onto two fixed
  // orthonormal directions equal (g1, g2)/sqrt(g1^2 + g2^2 + s) with
  // s ~ chi^2_{d-2}; draws are shared across all theta evaluations.
  Rng rng(derive_seed(eval_seed, kEvalTag));
  const double half_rest = 0.5 * static_cast<double>(task.d - 2);
  for (int64_t i = 0; i < eval_draws; ++i) {
    const double g1 = rng.next_gaussian();
    const double g2 = rng.next_gaussian();
    const double rest = 2.0 * rng.next_gamma(half_rest);
    const double inv = 1.0 / std::sqrt(g1 * g1 + g2 * g2 + rest);
    proj1_[static_cast<size_t>(i)] = g1 * inv;
    proj2_[static_cast<size_t>(i)] = g2 * inv;
    sig_signal_[static_cast<size_t>(i)] = sigmoid(task.tau * g1 * inv);
  }
  risk_at_optimum_ = risk(task.theta_star);
}

double RiskEvaluator::blocked_risk(double coef1, double coef2,
                                   bool parallel) const {
  const int64_t n = static_cast<int64_t>(proj1_.size());
  auto block = [&](int64_t lo, int64_t hi) {
    double acc = 0.0;
    for (int64_t i = lo; i < hi; ++i) {
      const double s = coef1 * proj1_[static_cast<size_t>(i)] +
                       coef2 * proj2_[static_cast<size_t>(i)];
      // E_Y[softplus(-Y s)] = softplus(s) - sigmoid(s*) s.
      acc += softplus(s) - sig_signal_[static_cast<size_t>(i)] * s;
    }
    return acc;
  };
  const double total = parallel ? blocked_sum(n, kDefaultBlock, block)
                                : blocked_sum_serial(n, kDefaultBlock, block);
  return total / static_cast<double>(n);
}

double RiskEvaluator::risk(std::span<const double> theta) const {
  const double along = dot(theta, task_->theta_star) / task_->tau;
  const double sq = dot(theta, theta);
  const double ortho = std::sqrt(std::max(0.0, sq - along * along));
  return blocked_risk(along, ortho, /*parallel=*/true);
}

double RiskEvaluator::risk_reference(std::span<const double> theta) const {
  const double along = dot(theta, task_->theta_star) / task_->tau;
  const double sq = dot(theta, theta);
  const double ortho = std::sqrt(std::max(0.0, sq - along * along));
  return blocked_risk(along, ortho, /*parallel=*/false);
}

double RiskEvaluator::zero_model_excess() const {
  return std::numbers::ln2 - risk_at_optimum_;
}

double population_risk_direct(const Task& task, std::span<const double> theta,
                              int64_t draws, uint64_t seed) {
  Rng rng(derive_seed(seed, kEvalTag));
  std::vector<double> x(static_cast<size_t>(task.d));
  double acc = 0.0;
  for (int64_t i = 0; i < draws; ++i) {
    fill_unit_sphere(rng, x);
    const double s = dot(theta, x);
    const double s_star = dot(task.theta_star, x);
    acc += softplus(s) - sigmoid(s_star) * s;
  }
  return acc / static_cast<double>(draws);
}

Schedule default_schedule(double eps, int64_t d) {
  Schedule schedule;
  schedule.eta0 = std::isinf(eps)
                      ? 1.0
                      : std::min(1.0, std::sqrt(eps / static_cast<double>(d)));
  schedule.beta = 0.51;
  return schedule;
}

SgdResult private_sgd(const Task& task, const Dataset& data, double eps,
                      const Schedule& schedule, const RiskEvaluator& evaluator,
                      int64_t checkpoints, uint64_t mech_seed) {
  if (!(schedule.beta > 0.5) || !(schedule.beta < 1.0)) {
    throw std::domain_error("private_sgd: beta outside (1/2, 1)");
  }
  const int64_t d = task.d;
  const int64_t steps = task.n;
  const bool is_private = !std::isinf(eps);
  separated::Mechanism mech;
  if (is_private) {
    if (!(eps > 0.0)) throw std::domain_error("private_sgd: eps must be > 0");
    mech = separated::build_logistic_split(eps, d, /*r_max=*/1.0);
  }
  Rng rng(derive_seed(mech_seed, kMechTag));

  std::vector<double> theta(static_cast<size_t>(d), 0.0);
  std::vector<double> theta_bar(static_cast<size_t>(d), 0.0);
  std::vector<double> grad(static_cast<size_t>(d));
  std::vector<double> step_vec(static_cast<size_t>(d));

  SgdResult result;
  checkpoints = std::clamp<int64_t>(checkpoints, 1, steps);

  int64_t next_checkpoint = 1;
  for (int64_t t = 1; t <= steps; ++t) {
    const std::span<const double> x(data.x.data() + (t - 1) * d,
                                    static_cast<size_t>(d));
    logistic_gradient(theta, x, data.y[static_cast<size_t>(t - 1)], grad);
    const double* z = grad.data();
    if (is_private) {
      separated::privatize(grad, mech, rng, step_vec);
      z = step_vec.data();
    }
    const double eta =
        schedule.eta0 * std::pow(static_cast<double>(t), -schedule.beta);
    double norm_sq = 0.0;
    for (int64_t i = 0; i < d; ++i) {
      theta[static_cast<size_t>(i)] -= eta * z[i];
      norm_sq += theta[static_cast<size_t>(i)] * theta[static_cast<size_t>(i)];
    }
    const double inv_t = 1.0 / static_cast<double>(t);
    for (int64_t i = 0; i < d; ++i) {
      theta_bar[static_cast<size_t>(i)] +=
          (theta[static_cast<size_t>(i)] - theta_bar[static_cast<size_t>(i)]) *
          inv_t;
    }
    if (norm_sq > kDivergenceNorm * kDivergenceNorm) {
      result.diverged = true;
      break;
    }
    if (t * checkpoints >= next_checkpoint * steps) {
      result.checkpoint_steps.push_back(t);
      result.excess_iterate.push_back(evaluator.excess(theta));
      result.excess_average.push_back(evaluator.excess(theta_bar));
      double err_sq = 0.0;
      for (int64_t i = 0; i < d; ++i) {
        const double diff = theta_bar[static_cast<size_t>(i)] -
                            task.theta_star[static_cast<size_t>(i)];
        err_sq += diff * diff;
      }
      result.param_error_average.push_back(std::sqrt(err_sq));
      while (t * checkpoints >= next_checkpoint * steps) ++next_checkpoint;
    }
  }

  result.theta_bar = theta_bar;
  result.final_excess = evaluator.excess(theta_bar);
  double err_sq = 0.0;
  for (int64_t i = 0; i < d; ++i) {
    const double diff = theta_bar[static_cast<size_t>(i)] -
                        task.theta_star[static_cast<size_t>(i)];
    err_sq += diff * diff;
  }
  result.final_param_error = std::sqrt(err_sq);
  return result;
}

SuiteResult run_experiment_suite(const SuiteConfig& config, bool parallel) {
  if (config.eps_grid.empty()) {
    throw std::domain_error("run_experiment_suite: empty eps grid");
  }
  SuiteResult result;
  result.config = config;
  const int64_t num_eps = static_cast<int64_t>(config.eps_grid.size());
  const int64_t cells = config.repetitions * num_eps;
  result.cells.resize(static_cast<size_t>(cells));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int64_t cell = 0; cell < cells; ++cell) {
    const int64_t rep = cell / num_eps;
    const int64_t j = cell % num_eps;
    const double eps = config.eps_grid[static_cast<size_t>(j)];
    const uint64_t task_seed =
        derive_seed(config.master_seed, static_cast<uint64_t>(rep), kTaskTag);
    const Task task = make_task(config.d, config.n, config.tau, task_seed);
    Rng data_rng(derive_seed(task_seed, kDataTag));
    const Dataset data = generate(task, data_rng);
    // One evaluator per cell keeps cells fully independent; the eval
    // seed is shared across the grid within a repetition so risk
    // comparisons between budgets use common random numbers. The inner
    // evaluator loop stays serial under the outer parallel loop.
    const RiskEvaluator evaluator(
        task, config.eval_draws,
        derive_seed(config.master_seed, static_cast<uint64_t>(rep), kEvalTag));
    CellResult& out = result.cells[static_cast<size_t>(cell)];
    out.rep = rep;
    out.eps = eps;
    out.zero_model_excess = evaluator.zero_model_excess();
    out.sgd = private_sgd(
        task, data, eps, default_schedule(eps, config.d), evaluator,
        config.checkpoints,
        derive_seed(config.master_seed, static_cast<uint64_t>(rep),
                    static_cast<uint64_t>(j), kMechTag));
  }
  return result;
}

double asymptotic_covariance_trace(const Task& task, double eps,
                                   int64_t repetitions, uint64_t seed,
                                   bool parallel) {
  if (repetitions < 2) {
    throw std::domain_error("asymptotic_covariance_trace: need >= 2 reps");
  }
  const int64_t d = task.d;
  const double sqrt_t = std::sqrt(static_cast<double>(task.n));
  std::vector<std::vector<double>> deviations(
      static_cast<size_t>(repetitions));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int64_t rep = 0; rep < repetitions; ++rep) {
    Rng data_rng(derive_seed(seed, static_cast<uint64_t>(rep), kDataTag));
    const Dataset data = generate(task, data_rng);
    // Risk evaluation is not needed here; a 1-draw evaluator keeps
    // construction cheap.
    const RiskEvaluator evaluator(task, 1, derive_seed(seed, kEvalTag));
    const SgdResult sgd = private_sgd(
        task, data, eps, default_schedule(eps, task.d), evaluator,
        /*checkpoints=*/1,
        derive_seed(seed, static_cast<uint64_t>(rep), kMechTag));
    std::vector<double> dev(static_cast<size_t>(d));
    for (int64_t i = 0; i < d; ++i) {
      dev[static_cast<size_t>(i)] =
          sqrt_t * (sgd.theta_bar[static_cast<size_t>(i)] -
                    task.theta_star[static_cast<size_t>(i)]);
    }
    deviations[static_cast<size_t>(rep)] = std::move(dev);
  }
  std::vector<double> mean(static_cast<size_t>(d), 0.0);
  for (const auto& dev : deviations) {
    for (int64_t i = 0; i < d; ++i) mean[static_cast<size_t>(i)] += dev[static_cast<size_t>(i)];
  }
  for (double& x : mean) x /= static_cast<double>(repetitions);
  double trace = 0.0;
  for (const auto& dev : deviations) {
    for (int64_t i = 0; i < d; ++i) {
      const double c = dev[static_cast<size_t>(i)] - mean[static_cast<size_t>(i)];
      trace += c * c;
    }
  }
  return trace / static_cast<double>(repetitions - 1);
}

}  // namespace privfed::logreg
