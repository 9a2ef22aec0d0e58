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
// Compares the serial reference implementations against the OpenMP
// kernels and verifies they agree bit for bit while timing both.

#include <chrono>
#include <cstdio>
#include <vector>

#include "privfed/fedsim.hpp"
#include "privfed/logreg.hpp"
#include "privfed/parallel.hpp"
#include "privfed/privunit.hpp"
#include "privfed/rng.hpp"
#include "privfed/separated.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

class QuadraticObjective : public privfed::fedsim::Objective {
 public:
  QuadraticObjective(int64_t clients, int64_t d, uint64_t seed) : d_(d) {
    privfed::Rng rng(seed);
    targets_.resize(static_cast<size_t>(clients * d));
    for (double& x : targets_) x = rng.next_gaussian();
  }
  int64_t dimension() const override { return d_; }
  int64_t client_count() const override {
    return static_cast<int64_t>(targets_.size()) / d_;
  }
  void mean_gradient(int64_t client, std::span<const double> theta,
                     std::span<double> grad) const override {
    const double* t = targets_.data() + client * d_;
    for (int64_t i = 0; i < d_; ++i) {
      grad[static_cast<size_t>(i)] = theta[static_cast<size_t>(i)] - t[i];
    }
  }

 private:
  int64_t d_;
  std::vector<double> targets_;
};

void report(const char* name, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-28s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "bit-identical" : "MISMATCH");
}

void bench_fed_round() {
  const int64_t d = 2000;
  const int64_t clients = 400;
  QuadraticObjective objective(clients, d, 9);
  privfed::separated::Mechanism mech =
      privfed::separated::build_theory(8.0, 8.0, d, 4.0);
  privfed::fedsim::RoundConfig cfg;
  cfg.population = clients;
  cfg.sample_rate = 0.5;
  cfg.clip_radius = 3.0;
  cfg.noise_sigma = 0.1;
  cfg.mechanism = &mech;

  privfed::fedsim::ModelState serial;
  serial.theta.assign(static_cast<size_t>(d), 0.0);
  auto start = Clock::now();
  for (int r = 0; r < 4; ++r) {
    privfed::fedsim::run_round_reference(serial, cfg, objective, 7);
  }
  const double serial_ms = ms_since(start);

  privfed::fedsim::ModelState parallel;
  parallel.theta.assign(static_cast<size_t>(d), 0.0);
  start = Clock::now();
  for (int r = 0; r < 4; ++r) {
    privfed::fedsim::run_round(parallel, cfg, objective, 7);
  }
  const double parallel_ms = ms_since(start);
  report("federated round", serial_ms, parallel_ms,
         serial.theta == parallel.theta);
}

void bench_risk_eval() {
  const auto task = privfed::logreg::make_task(500, 10, 4.0, 3);
  const privfed::logreg::RiskEvaluator evaluator(task, 4000000, 11);
  privfed::Rng rng(5);
  std::vector<double> theta(500);
  for (double& x : theta) x = 0.1 * rng.next_gaussian();

  auto start = Clock::now();
  double serial_value = 0.0;
  for (int i = 0; i < 10; ++i) serial_value = evaluator.risk_reference(theta);
  const double serial_ms = ms_since(start);

  start = Clock::now();
  double parallel_value = 0.0;
  for (int i = 0; i < 10; ++i) parallel_value = evaluator.risk(theta);
  const double parallel_ms = ms_since(start);
  report("population risk (4M draws)", serial_ms, parallel_ms,
         serial_value == parallel_value);
}

void bench_privunit_batch() {
  const int64_t d = 10000;
  const auto params = privfed::privunit::make_params(
      d, privfed::privunit::solve_gamma(32.0, d), 0.5, 32.0);
  const int64_t n = 2000;
  std::vector<double> u(static_cast<size_t>(d), 0.0);
  u[0] = 1.0;

  auto draw_block = [&](int64_t lo, int64_t hi, uint64_t tag) {
    privfed::Rng rng(privfed::derive_seed(17, static_cast<uint64_t>(lo), tag));
    std::vector<double> out(static_cast<size_t>(d));
    double acc = 0.0;
    for (int64_t i = lo; i < hi; ++i) {
      privfed::privunit::sample(u, params, rng, out);
      acc += out[0];
    }
    return acc;
  };

  auto start = Clock::now();
  const double serial_sum = privfed::blocked_sum_serial(
      n, 64, [&](int64_t lo, int64_t hi) { return draw_block(lo, hi, 1); });
  const double serial_ms = ms_since(start);

  start = Clock::now();
  const double parallel_sum = privfed::blocked_sum(
      n, 64, [&](int64_t lo, int64_t hi) { return draw_block(lo, hi, 1); });
  const double parallel_ms = ms_since(start);
  report("privatized draws (d=10^4)", serial_ms, parallel_ms,
         serial_sum == parallel_sum);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", privfed::max_threads());
  bench_fed_round();
  bench_risk_eval();
  bench_privunit_batch();
  return 0;
}
