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
// Shared driver behind the `simulate` subcommand: config parsing,
// experiment execution, and CSV/manifest emission. Output bytes are a
// pure function of (config text, master seed), independent of thread
// count, so reruns are byte-identical.

#ifndef PRIVFED_SIMDRIVER_HPP_
#define PRIVFED_SIMDRIVER_HPP_

#include <string>

#include "privfed/io.hpp"
#include "privfed/logreg.hpp"

namespace privfed::simdriver {

// Required keys: dimension_d, sample_size_n, signal_tau,
// eps_local_grid, repetitions, master_seed. Optional: eval_draws,
// checkpoints.
logreg::SuiteConfig suite_config_from(const io::FlatConfig& config);

// Runs the suite and writes trajectories.csv, summary.csv,
// quantiles.csv, and manifest.json under out_dir (created on demand).
void run_and_write(const logreg::SuiteConfig& suite,
                   const io::FlatConfig& config,
                   const std::string& config_path, const std::string& out_dir,
                   bool parallel = true);

}  // namespace privfed::simdriver

#endif  // PRIVFED_SIMDRIVER_HPP_
