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
// Product mechanism releasing a vector as (privatized direction) x
// (privatized magnitude). The direction budget eps1 and magnitude
// budget eps2 compose to an (eps1 + eps2)-locally-private release.

#ifndef PRIVFED_SEPARATED_HPP_
#define PRIVFED_SEPARATED_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "privfed/privunit.hpp"
#include "privfed/rng.hpp"
#include "privfed/scalarmech.hpp"

namespace privfed::separated {

enum class Split {
  kTheory,      // gamma(eps1), p = 1/2, k = ceil(e^{eps2/3})
  kExperiment,  // gamma(0.99 eps1), p = logistic(0.01 eps1)
  kLogistic,    // eps1 = 13 eps/16, flip eps/16, magnitude eps/8
};

struct Mechanism {
  privunit::Params direction;
  scalarmech::ScalarDPParams magnitude;
  double eps1 = 0.0;       // direction budget (cap threshold + flip)
  double eps2 = 0.0;       // magnitude budget
  double eps_total = 0.0;  // eps1 + eps2
  Split split = Split::kTheory;
};

Mechanism build_theory(double eps1, double eps2, int64_t d, double r_max);
Mechanism build_experiment(double eps1, double eps2, int64_t d, double r_max);
Mechanism build_logistic_split(double eps, int64_t d, double r_max);

// Z = Z1 * Z2 with E[Z] = w for ||w|| <= r_max. Near-zero inputs
// (||w|| < 1e-12) release a privatized fresh uniform direction scaled
// by a magnitude draw at r = 0, preserving unbiasedness.
void privatize(std::span<const double> w, const Mechanism& mech, Rng& rng,
               std::span<double> out);

std::vector<double> privatize(std::span<const double> w, const Mechanism& mech,
                              Rng& rng);

}  // namespace privfed::separated

#endif  // PRIVFED_SEPARATED_HPP_
