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

#include "privfed/fedsim.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "privfed/common.hpp"

namespace privfed::fedsim {
namespace {

// Stream tags for counter-based derivation.
constexpr uint64_t kInclusionTag = 0x11;
constexpr uint64_t kClientTag = 0x22;
constexpr uint64_t kServerTag = 0x33;

std::vector<int64_t> sample_batch(const RoundConfig& cfg, int64_t round,
                                  uint64_t master_seed) {
  std::vector<int64_t> batch;
  for (int64_t i = 0; i < cfg.population; ++i) {
    Rng incl(derive_seed(master_seed, static_cast<uint64_t>(round),
                         static_cast<uint64_t>(i), kInclusionTag));
    if (incl.next_double() < cfg.sample_rate) batch.push_back(i);
  }
  return batch;
}

double l2_norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

RoundMetrics finish_metrics(const ModelState& model, const RoundConfig& cfg,
                            const Objective& objective, int64_t batch_size,
                            double wallclock_ms) {
  RoundMetrics metrics;
  metrics.round = model.round;
  metrics.batch_size = batch_size;
  metrics.eps_local =
      cfg.mechanism != nullptr ? cfg.mechanism->eps_total : kInf;
  metrics.sigma = cfg.noise_sigma;
  metrics.loss = objective.population_loss(model.theta);
  const auto opt = objective.optimum();
  if (!opt.empty()) {
    metrics.excess_risk = metrics.loss - objective.population_loss(opt);
    double sq = 0.0;
    for (size_t i = 0; i < opt.size(); ++i) {
      const double diff = model.theta[i] - opt[i];
      sq += diff * diff;
    }
    metrics.param_error = std::sqrt(sq);
  } else {
    metrics.excess_risk = std::numeric_limits<double>::quiet_NaN();
    metrics.param_error = std::numeric_limits<double>::quiet_NaN();
  }
  metrics.wallclock_ms = wallclock_ms;
  return metrics;
}

}  // namespace

double Objective::population_loss(std::span<const double>) const {
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> local_update(const Objective& objective, int64_t client,
                                 std::span<const double> theta0,
                                 const RoundConfig& cfg) {
  const int64_t d = objective.dimension();
  std::vector<double> grad(static_cast<size_t>(d), 0.0);
  if (cfg.update_rule == UpdateRule::kGradient) {
    objective.mean_gradient(client, theta0, grad);
    for (double& g : grad) g = -g;  // Delta = -mean gradient
    for (double g : grad) {
      if (!std::isfinite(g)) {
        throw std::runtime_error("local_update: non-finite gradient, client " +
                                 std::to_string(client));
      }
    }
    return grad;
  }
  // Prox update: minimize mean_loss(theta) + ||theta-theta0||^2/(2 eta)
  // by cfg.local_steps gradient steps from theta0; the inner stepsize
  // 1/(smoothness_hint + 1/eta) is exact for an isotropic quadratic
  // with curvature smoothness_hint.
  std::vector<double> theta(theta0.begin(), theta0.end());
  const double inner_step =
      1.0 / (cfg.smoothness_hint + 1.0 / cfg.eta_local);
  for (int64_t s = 0; s < cfg.local_steps; ++s) {
    objective.mean_gradient(client, theta, grad);
    for (int64_t i = 0; i < d; ++i) {
      const double prox_pull =
          (theta[static_cast<size_t>(i)] - theta0[static_cast<size_t>(i)]) /
          cfg.eta_local;
      theta[static_cast<size_t>(i)] -=
          inner_step * (grad[static_cast<size_t>(i)] + prox_pull);
    }
  }
  std::vector<double> delta(static_cast<size_t>(d));
  for (int64_t i = 0; i < d; ++i) {
    delta[static_cast<size_t>(i)] =
        (theta[static_cast<size_t>(i)] - theta0[static_cast<size_t>(i)]) /
        cfg.eta_local;
    if (!std::isfinite(delta[static_cast<size_t>(i)])) {
      throw std::runtime_error("local_update: non-finite update, client " +
                               std::to_string(client));
    }
  }
  return delta;
}

void clip_l2(std::span<double> v, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("clip_l2: rho must be > 0");
  const double norm = l2_norm(v);
  if (norm > rho) {
    const double scale = rho / norm;
    for (double& x : v) x *= scale;
  }
}

PrivatizedUpdate privatize_update(std::span<const double> delta,
                                  const RoundConfig& cfg, Rng& rng) {
  if (cfg.mechanism == nullptr) {
    return PrivatizedUpdate(std::vector<double>(delta.begin(), delta.end()));
  }
  std::vector<double> out(delta.size());
  separated::privatize(delta, *cfg.mechanism, rng, out);
  return PrivatizedUpdate(std::move(out));
}

bool aggregate_round(ModelState& model,
                     std::span<const PrivatizedUpdate> updates,
                     const RoundConfig& cfg, Rng& server_rng) {
  if (updates.empty()) {
    ++model.round;
    return false;
  }
  const size_t d = model.theta.size();
  std::vector<double> total(d, 0.0);
  std::vector<double> clipped(d);
  for (const PrivatizedUpdate& update : updates) {
    const auto v = update.value();
    if (v.size() != d) {
      throw std::invalid_argument("aggregate_round: dimension mismatch");
    }
    std::copy(v.begin(), v.end(), clipped.begin());
    clip_l2(clipped, cfg.clip_radius);
    for (size_t i = 0; i < d; ++i) total[i] += clipped[i];
  }
  if (cfg.noise_sigma > 0.0) {
    for (size_t i = 0; i < d; ++i) {
      total[i] += cfg.noise_sigma * server_rng.next_gaussian();
    }
  }
  const double denom =
      cfg.divide_by_realized_batch
          ? static_cast<double>(updates.size())
          : cfg.sample_rate * static_cast<double>(cfg.population);
  const double scale = cfg.eta_server / denom;
  for (size_t i = 0; i < d; ++i) model.theta[i] += scale * total[i];
  ++model.round;
  return true;
}

namespace {

RoundMetrics run_round_generic(ModelState& model, const RoundConfig& cfg,
                               const Objective& objective,
                               uint64_t master_seed, bool parallel) {
  const auto start = std::chrono::steady_clock::now();
  const int64_t round = model.round;
  const std::vector<int64_t> batch = sample_batch(cfg, round, master_seed);
  const int64_t b = static_cast<int64_t>(batch.size());

  std::vector<std::vector<double>> results(static_cast<size_t>(b));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int64_t idx = 0; idx < b; ++idx) {
    const int64_t client = batch[static_cast<size_t>(idx)];
    Rng rng(derive_seed(master_seed, static_cast<uint64_t>(round),
                        static_cast<uint64_t>(client), kClientTag));
    std::vector<double> delta = local_update(objective, client, model.theta, cfg);
    if (cfg.mechanism == nullptr) {
      results[static_cast<size_t>(idx)] = std::move(delta);
    } else {
      std::vector<double> out(delta.size());
      separated::privatize(delta, *cfg.mechanism, rng, out);
      results[static_cast<size_t>(idx)] = std::move(out);
    }
  }

  // Aggregate in client-index order (batch is ascending by construction).
  const size_t d = model.theta.size();
  if (b > 0) {
    std::vector<double> total(d, 0.0);
    for (int64_t idx = 0; idx < b; ++idx) {
      clip_l2(results[static_cast<size_t>(idx)], cfg.clip_radius);
      const auto& v = results[static_cast<size_t>(idx)];
      for (size_t i = 0; i < d; ++i) total[i] += v[i];
    }
    Rng server(derive_seed(master_seed, static_cast<uint64_t>(round),
                           kServerTag));
    if (cfg.noise_sigma > 0.0) {
      for (size_t i = 0; i < d; ++i) {
        total[i] += cfg.noise_sigma * server.next_gaussian();
      }
    }
    const double denom =
        cfg.divide_by_realized_batch
            ? static_cast<double>(b)
            : cfg.sample_rate * static_cast<double>(cfg.population);
    const double scale = cfg.eta_server / denom;
    for (size_t i = 0; i < d; ++i) model.theta[i] += scale * total[i];
  }
  ++model.round;

  const auto stop = std::chrono::steady_clock::now();
  const double ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  return finish_metrics(model, cfg, objective, b, ms);
}

}  // namespace

RoundMetrics run_round(ModelState& model, const RoundConfig& cfg,
                       const Objective& objective, uint64_t master_seed) {
  return run_round_generic(model, cfg, objective, master_seed, true);
}

RoundMetrics run_round_reference(ModelState& model, const RoundConfig& cfg,
                                 const Objective& objective,
                                 uint64_t master_seed) {
  return run_round_generic(model, cfg, objective, master_seed, false);
}

Simulation simulation_from_config(const io::FlatConfig& config,
                                  int64_t dimension) {
  Simulation sim;
  sim.round.population = config.get_int("population_n");
  sim.round.sample_rate = config.get_double("sample_rate_q");
  sim.round.local_steps = config.get_int("local_steps", 1);
  sim.round.eta_local = config.get_double("eta_local", 1.0);
  sim.round.eta_server = config.get_double("eta_server", 1.0);
  sim.round.clip_radius = config.get_double("clip_radius_rho");
  sim.round.noise_sigma = config.get_double("sigma_update_units", 0.0);
  sim.round.divide_by_realized_batch =
      config.get_int("divide_by_realized_batch", 0) != 0;
  const std::string rule =
      config.has("update_rule") ? config.get_string("update_rule") : "gradient";
  if (rule == "gradient") {
    sim.round.update_rule = UpdateRule::kGradient;
  } else if (rule == "prox_point") {
    sim.round.update_rule = UpdateRule::kProxPoint;
  } else {
    throw std::runtime_error("config: unknown update_rule '" + rule + "'");
  }
  sim.rounds = config.get_int("rounds");
  sim.master_seed = static_cast<uint64_t>(config.get_int("master_seed"));

  const double eps_total = config.get_double("eps_local_total", kInf);
  if (std::isfinite(eps_total)) {
    const double r_max = config.get_double("r_max_update_norm");
    const std::string split = config.has("mech_split")
                                  ? config.get_string("mech_split")
                                  : "experiment";
    if (split == "theory") {
      const double eps2 = config.get_double("eps_magnitude");
      sim.mechanism = separated::build_theory(eps_total - eps2, eps2,
                                              dimension, r_max);
    } else if (split == "experiment") {
      const double eps2 = config.get_double("eps_magnitude");
      sim.mechanism = separated::build_experiment(eps_total - eps2, eps2,
                                                  dimension, r_max);
    } else if (split == "logistic") {
      sim.mechanism =
          separated::build_logistic_split(eps_total, dimension, r_max);
    } else {
      throw std::runtime_error("config: unknown mech_split '" + split + "'");
    }
    sim.has_mechanism = true;
  }
  return sim;
}

void write_metrics_csv(const std::string& path,
                       std::span<const RoundMetrics> metrics,
                       uint64_t manifest_hash) {
  io::CsvWriter csv(path, "privfed.round_metrics.v1", manifest_hash,
                    {"round", "epsilon_local", "sigma", "loss", "excess_risk",
                     "param_error", "wallclock_ms"});
  for (const RoundMetrics& m : metrics) {
    csv.write_row({std::to_string(m.round), io::format_double(m.eps_local),
                   io::format_double(m.sigma), io::format_double(m.loss),
                   io::format_double(m.excess_risk),
                   io::format_double(m.param_error),
                   io::format_double(m.wallclock_ms)});
  }
}

std::vector<RoundMetrics> run(ModelState& model, const RoundConfig& cfg,
                              const Objective& objective, int64_t rounds,
                              uint64_t master_seed, bool parallel) {
  if (!(cfg.sample_rate > 0.0) || !(cfg.sample_rate < 1.0)) {
    throw std::domain_error("run: sample_rate outside (0, 1)");
  }
  if (!(cfg.clip_radius > 0.0)) {
    throw std::domain_error("run: clip_radius must be > 0");
  }
  if (cfg.noise_sigma < 0.0) {
    throw std::domain_error("run: noise_sigma must be >= 0");
  }
  std::vector<RoundMetrics> metrics;
  metrics.reserve(static_cast<size_t>(rounds));
  for (int64_t t = 0; t < rounds; ++t) {
    metrics.push_back(parallel
                          ? run_round(model, cfg, objective, master_seed)
                          : run_round_reference(model, cfg, objective,
                                                master_seed));
  }
  return metrics;
}

}  // namespace privfed::fedsim
