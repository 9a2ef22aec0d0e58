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
// Calculators bounding an onlooker's probability of reconstructing
// private data from a locally private release: posterior protection
// under a diffuse prior on the sphere, and precision/recall bounds for
// sparse indicator vectors under a Zipf prior.

#ifndef PRIVFED_RECONGUARD_HPP_
#define PRIVFED_RECONGUARD_HPP_

#include <cstdint>

namespace privfed::recon {

struct SphereQuery {
  int64_t k = 4;      // target dimension (>= 4)
  double a = 0.0;     // accuracy level in [0, 1]; loss radius sqrt(2 - 2a)
  double rho0 = 0.0;  // prior-divergence budget
  double eps = 0.0;   // local privacy level of the release
};

struct ZipfQuery {
  int64_t d = 0;       // dictionary size
  int64_t m = 0;       // minimum item count before participation
  double gamma = 2.0;  // prediction-budget multiple (>= 2)
  double p = 0.0;      // precision target
  double r = 0.0;      // recall target
};

// Upper bound on P(reconstruction within sqrt(2 - 2a) | any output):
// the minimum over the two applicable branches
//   exp(eps + rho0 + (k/2) ln(1 - a^2))               for a <= 1/sqrt(2)
//   exp(eps + rho0 + ((k-1)/2) ln(1-a^2) - ln(2a k^{1/2}))
//                                                      for a >= sqrt(2/k)
// clamped to <= 1.
double breach_prob_sphere(const SphereQuery& q);

// min(1, e^eps * p0): prior guessing probability inflated by the
// privacy level.
double protection_factor(double p0, double eps);

// The sub-Gaussian/sub-exponential exponent constant for the precision
// bound: the derivation supports denominator 4 ln(gamma); the stated
// form with 2 ln(gamma) is exposed as an option but is not the default
// (never emit a bound tighter than what is established).
enum class PrecisionConstant { kDerived, kStated };

double zipf_precision_bound(const ZipfQuery& q,
                            PrecisionConstant c = PrecisionConstant::kDerived);

double zipf_recall_bound(const ZipfQuery& q);

}  // namespace privfed::recon

#endif  // PRIVFED_RECONGUARD_HPP_
