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
// Round-synchronous federated learning loop: Bernoulli(q) client
// sampling, local updates (single gradient step or approximate proximal
// point), per-client privatization, l2 clipping, central Gaussian
// noise, and the server model update. Client work within a round runs
// under OpenMP with per-client counter-derived random streams and a
// reduction in fixed client order, so trajectories are bit-identical
// for any thread count; a plain serial implementation of the round is
// kept as the reference for equivalence tests and benchmarks.

#ifndef PRIVFED_FEDSIM_HPP_
#define PRIVFED_FEDSIM_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "privfed/io.hpp"
#include "privfed/rng.hpp"
#include "privfed/separated.hpp"

namespace privfed::fedsim {

// Client-sharded objective. Implementations provide the mean gradient
// of one client's local data; population-level quantities are optional
// and only feed metrics.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual int64_t dimension() const = 0;
  virtual int64_t client_count() const = 0;
  virtual void mean_gradient(int64_t client, std::span<const double> theta,
                             std::span<double> grad) const = 0;
  virtual double population_loss(std::span<const double> theta) const;
  virtual std::span<const double> optimum() const { return {}; }
};

enum class UpdateRule { kGradient, kProxPoint };

struct RoundConfig {
  int64_t population = 0;   // N
  double sample_rate = 0.0; // q; expected batch size qN
  int64_t local_steps = 1;  // gradient steps approximating the prox update
  double eta_local = 1.0;
  double eta_server = 1.0;
  double clip_radius = 1.0;    // rho
  double noise_sigma = 0.0;    // central noise std, clipped-update units
  UpdateRule update_rule = UpdateRule::kGradient;
  double smoothness_hint = 1.0;  // curvature guess for the inner prox steps
  const separated::Mechanism* mechanism = nullptr;  // null = pass-through
  bool divide_by_realized_batch = false;  // alternative to the qN divisor
};

struct ModelState {
  std::vector<double> theta;
  int64_t round = 0;
};

struct RoundMetrics {
  int64_t round = 0;
  int64_t batch_size = 0;
  double eps_local = 0.0;  // certified local budget per contribution
  double sigma = 0.0;
  double loss = 0.0;
  double excess_risk = 0.0;
  double param_error = 0.0;
  double wallclock_ms = 0.0;
};

// An update that already passed through the privatization step (or the
// explicit pass-through for non-private baselines). The aggregator
// admits only this type, so raw local updates cannot reach it.
class PrivatizedUpdate {
 public:
  std::span<const double> value() const { return value_; }

 private:
  friend PrivatizedUpdate privatize_update(std::span<const double> delta,
                                           const RoundConfig& cfg, Rng& rng);
  explicit PrivatizedUpdate(std::vector<double> v) : value_(std::move(v)) {}
  std::vector<double> value_;
};

// Scaled gradient mapping Delta_i = (theta_local - theta0) / eta_local.
// The gradient rule takes one step; the prox rule runs cfg.local_steps
// gradient steps on the proximal objective
//   mean_loss(theta) + ||theta - theta0||^2 / (2 eta_local).
std::vector<double> local_update(const Objective& objective, int64_t client,
                                 std::span<const double> theta0,
                                 const RoundConfig& cfg);

// min(rho/||v||, 1) * v, in place.
void clip_l2(std::span<double> v, double rho);

PrivatizedUpdate privatize_update(std::span<const double> delta,
                                  const RoundConfig& cfg, Rng& rng);

// theta += (eta_server / (qN)) (sum_i clip(update_i) + Z) with
// Z ~ N(0, sigma^2 I); contributions sum in index order. An empty batch
// leaves the model unchanged (reported via the return value).
bool aggregate_round(ModelState& model,
                     std::span<const PrivatizedUpdate> updates,
                     const RoundConfig& cfg, Rng& server_rng);

// One full round. Client inclusion, client streams, and the server
// noise stream are all pure functions of (master_seed, round, client),
// never of scheduling.
RoundMetrics run_round(ModelState& model, const RoundConfig& cfg,
                       const Objective& objective, uint64_t master_seed);

// Serial reference implementation of run_round; bit-identical results.
RoundMetrics run_round_reference(ModelState& model, const RoundConfig& cfg,
                                 const Objective& objective,
                                 uint64_t master_seed);

std::vector<RoundMetrics> run(ModelState& model, const RoundConfig& cfg,
                              const Objective& objective, int64_t rounds,
                              uint64_t master_seed, bool parallel = true);

// A round configuration plus the mechanism it points at, bundled so the
// pair can be built from a config document with key names that carry
// their units (eps_local_total, sigma_update_units, ...).
struct Simulation {
  RoundConfig round;               // mechanism pointer left unset
  separated::Mechanism mechanism;  // meaningful iff has_mechanism
  bool has_mechanism = false;
  int64_t rounds = 0;
  uint64_t master_seed = 0;

  // Copy of `round` with the mechanism attached; valid while this
  // Simulation is alive.
  RoundConfig wired_round() const {
    RoundConfig wired = round;
    wired.mechanism = has_mechanism ? &mechanism : nullptr;
    return wired;
  }
};

Simulation simulation_from_config(const io::FlatConfig& config,
                                  int64_t dimension);

// Per-round metrics CSV: header row plus one row per round
// (round, epsilon_local, sigma, loss, excess_risk, param_error,
// wallclock_ms). The wallclock column is measured, not replayable.
void write_metrics_csv(const std::string& path,
                       std::span<const RoundMetrics> metrics,
                       uint64_t manifest_hash);

}  // namespace privfed::fedsim

#endif  // PRIVFED_FEDSIM_HPP_
