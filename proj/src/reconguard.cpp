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

#include "privfed/reconguard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "privfed/common.hpp"

namespace privfed::recon {
namespace {

double clamp_prob_from_log(double log_p) {
  return log_p >= 0.0 ? 1.0 : std::exp(log_p);
}

}  // namespace

double breach_prob_sphere(const SphereQuery& q) {
  if (q.k < 4) throw std::domain_error("breach_prob_sphere: k must be >= 4");
  if (q.a < 0.0 || q.a > 1.0) {
    throw std::domain_error("breach_prob_sphere: a outside [0, 1]");
  }
  if (q.rho0 < 0.0) {
    throw std::domain_error("breach_prob_sphere: rho0 must be >= 0");
  }
  const double kk = static_cast<double>(q.k);
  const double base = q.eps + q.rho0;
  double best = kInf;
  if (q.a <= 1.0 / std::sqrt(2.0)) {
    best = std::min(best, base + 0.5 * kk * std::log1p(-q.a * q.a));
  }
  if (q.a >= std::sqrt(2.0 / kk) && q.a > 0.0) {
    const double log_cap = q.a < 1.0 ? 0.5 * (kk - 1.0) * std::log1p(-q.a * q.a)
                                     : kNegInf;
    best = std::min(best,
                    base + log_cap - std::log(2.0 * q.a * std::sqrt(kk)));
  }
  return clamp_prob_from_log(best);
}

double protection_factor(double p0, double eps) {
  if (p0 < 0.0 || p0 > 1.0) {
    throw std::domain_error("protection_factor: p0 outside [0, 1]");
  }
  if (eps < 0.0) throw std::domain_error("protection_factor: eps must be >= 0");
  if (p0 == 0.0) return 0.0;
  return clamp_prob_from_log(eps + std::log(p0));
}

double zipf_precision_bound(const ZipfQuery& q, PrecisionConstant c) {
  if (q.gamma < 2.0) {
    throw std::domain_error("zipf_precision_bound: gamma must be >= 2");
  }
  if (q.m < 1 || q.m > q.d) {
    throw std::domain_error("zipf_precision_bound: need 1 <= m <= d");
  }
  const double lg = std::log(q.gamma);
  const double hinge = std::max(0.0, q.p * q.gamma - 1.0 - lg);
  if (hinge == 0.0) return 1.0;
  const double mm = static_cast<double>(q.m);
  const double denom = (c == PrecisionConstant::kDerived ? 4.0 : 2.0) * lg;
  const double expo = std::min(hinge * hinge * mm / denom, 0.75 * hinge * mm);
  return std::exp(-expo);
}

double zipf_recall_bound(const ZipfQuery& q) {
  if (q.gamma < 2.0) {
    throw std::domain_error("zipf_recall_bound: gamma must be >= 2");
  }
  if (q.m < 1 || q.m > q.d) {
    throw std::domain_error("zipf_recall_bound: need 1 <= m <= d");
  }
  if (q.r < 0.0 || q.r > 1.0) {
    throw std::domain_error("zipf_recall_bound: r outside [0, 1]");
  }
  const double dd = static_cast<double>(q.d);
  const double mm = static_cast<double>(q.m);
  const double tau =
      q.r * (1.0 + std::log(dd / (mm + 1.0))) - 1.0 - std::log(q.gamma);
  if (tau <= 0.0) return 1.0;
  const double denom = 4.0 * (1.0 - q.r * q.r) * std::log(dd / mm);
  double expo = 0.75 * tau * mm;
  if (denom > 0.0) expo = std::min(expo, tau * tau * mm / denom);
  return std::exp(-expo);
}

}  // namespace privfed::recon
