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

#include "privfed/simdriver.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <vector>

namespace privfed::simdriver {
namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

logreg::SuiteConfig suite_config_from(const io::FlatConfig& config) {
  // Collect every config problem before touching any compute.
  std::vector<std::string> errors;
  const auto require = [&](const char* key) {
    if (!config.has(key)) errors.push_back(std::string("missing key: ") + key);
  };
  require("dimension_d");
  require("sample_size_n");
  require("signal_tau");
  require("eps_local_grid");
  require("repetitions");
  require("master_seed");
  logreg::SuiteConfig suite;
  const auto parse = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
  };
  if (errors.empty()) {
    parse([&] { suite.d = config.get_int("dimension_d"); });
    parse([&] { suite.n = config.get_int("sample_size_n"); });
    parse([&] { suite.tau = config.get_double("signal_tau"); });
    parse([&] { suite.eps_grid = config.get_double_list("eps_local_grid"); });
    parse([&] { suite.repetitions = config.get_int("repetitions"); });
    parse([&] {
      suite.master_seed = static_cast<uint64_t>(config.get_int("master_seed"));
    });
    parse([&] { suite.eval_draws = config.get_int("eval_draws", 1000000); });
    parse([&] { suite.checkpoints = config.get_int("checkpoints", 100); });
    if (errors.empty()) {
      if (suite.d < 2) errors.push_back("dimension_d must be >= 2");
      if (suite.n < 1) errors.push_back("sample_size_n must be >= 1");
      if (!(suite.tau > 0.0)) errors.push_back("signal_tau must be > 0");
      if (suite.repetitions < 1) errors.push_back("repetitions must be >= 1");
      if (suite.eval_draws < 1) errors.push_back("eval_draws must be >= 1");
      if (suite.checkpoints < 1) errors.push_back("checkpoints must be >= 1");
      for (double eps : suite.eps_grid) {
        if (!(eps > 0.0)) errors.push_back("eps_local_grid entries must be > 0");
      }
    }
  }
  if (!errors.empty()) {
    std::string message = "invalid simulate config:";
    for (const std::string& e : errors) message += "\n  " + e;
    throw std::runtime_error(message);
  }
  return suite;
}

void run_and_write(const logreg::SuiteConfig& suite,
                   const io::FlatConfig& config,
                   const std::string& config_path, const std::string& out_dir,
                   bool parallel) {
  io::Manifest manifest;
  manifest.command = "simulate";
  manifest.config_path = config_path;
  manifest.master_seed = suite.master_seed;
  manifest.config_hash = io::manifest_hash(config.text(), suite.master_seed);
  manifest.out_dir = out_dir;
  manifest.started_at = utc_now();

  const logreg::SuiteResult result = logreg::run_experiment_suite(suite, parallel);

  std::filesystem::create_directories(out_dir);
  const uint64_t hash = manifest.config_hash;

  {
    io::CsvWriter csv(out_dir + "/trajectories.csv",
                      "privfed.trajectories.v1", hash,
                      {"rep", "eps_local", "step", "excess_iterate",
                       "excess_polyak", "param_error_polyak"});
    for (const auto& cell : result.cells) {
      for (size_t j = 0; j < cell.sgd.checkpoint_steps.size(); ++j) {
        csv.write_row({std::to_string(cell.rep),
                       io::format_double(cell.eps),
                       std::to_string(cell.sgd.checkpoint_steps[j]),
                       io::format_double(cell.sgd.excess_iterate[j]),
                       io::format_double(cell.sgd.excess_average[j]),
                       io::format_double(cell.sgd.param_error_average[j])});
      }
    }
  }
  {
    io::CsvWriter csv(out_dir + "/summary.csv", "privfed.summary.v1", hash,
                      {"rep", "eps_local", "final_excess",
                       "final_param_error", "zero_model_excess", "diverged"});
    for (const auto& cell : result.cells) {
      csv.write_row({std::to_string(cell.rep), io::format_double(cell.eps),
                     io::format_double(cell.sgd.final_excess),
                     io::format_double(cell.sgd.final_param_error),
                     io::format_double(cell.zero_model_excess),
                     cell.sgd.diverged ? "1" : "0"});
    }
  }
  {
    io::CsvWriter csv(out_dir + "/quantiles.csv", "privfed.quantiles.v1",
                      hash,
                      {"eps_local", "q25_final_excess", "median_final_excess",
                       "q75_final_excess"});
    for (double eps : suite.eps_grid) {
      std::vector<double> finals;
      for (const auto& cell : result.cells) {
        if (cell.eps == eps) finals.push_back(cell.sgd.final_excess);
      }
      std::sort(finals.begin(), finals.end());
      auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(finals.size() - 1);
        const size_t lo = static_cast<size_t>(pos);
        const size_t hi = std::min(lo + 1, finals.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return finals[lo] * (1.0 - frac) + finals[hi] * frac;
      };
      csv.write_row({io::format_double(eps), io::format_double(quantile(0.25)),
                     io::format_double(quantile(0.5)),
                     io::format_double(quantile(0.75))});
    }
  }
  manifest.finished_at = utc_now();
  manifest.write(out_dir + "/manifest.json");
}

}  // namespace privfed::simdriver
