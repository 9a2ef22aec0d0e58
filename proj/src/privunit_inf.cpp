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

#include "privfed/privunit_inf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "privfed/common.hpp"
#include "privfed/specfn.hpp"

namespace privfed::privunit_inf {
namespace {

int64_t dtau_for(int64_t d, int64_t kappa) { return (d + kappa + 1 + 1) / 2; }
// ceil((d + kappa + 1) / 2) == (d + kappa + 2) / 2 in integer division.

// Samples the match count A from Binomial(d, 1/2) truncated to
// [lo, hi], scanning positions in decreasing-pmf order so the expected
// number of visited terms is O(sqrt(d)). log_total is
// ln sum_{l in [lo,hi]} C(d,l); weights are handled as counts relative
// to it, which cancels the common 2^{-d}.
int64_t sample_truncated_matches(int64_t d, int64_t lo, int64_t hi,
                                 double log_total, Rng& rng) {
  const double u = rng.next_double();
  const int64_t mode = std::clamp(d / 2, lo, hi);
  double w_mode = std::exp(specfn::log_choose(d, mode) - log_total);
  double cum = w_mode;
  if (cum >= u) return mode;

  int64_t down = mode;       // next candidate below: down - 1
  int64_t up = mode;         // next candidate above: up + 1
  double w_down = w_mode;    // weight at `down`
  double w_up = w_mode;      // weight at `up`
  int64_t last = mode;
  while (down > lo || up < hi) {
    // Peek weights of the two frontier candidates.
    const double cand_down =
        down > lo ? w_down * static_cast<double>(down) /
                        static_cast<double>(d - down + 1)
                  : -1.0;
    const double cand_up =
        up < hi ? w_up * static_cast<double>(d - up) /
                      static_cast<double>(up + 1)
                : -1.0;
    if (cand_down >= cand_up) {
      --down;
      w_down = cand_down;
      cum += cand_down;
      last = down;
    } else {
      ++up;
      w_up = cand_up;
      cum += cand_up;
      last = up;
    }
    if (cum >= u) return last;
  }
  // Rounding left a sliver of mass unassigned; return the last visited
  // (least likely) position.
  return last;
}

}  // namespace

double exact_condition_lhs(int64_t d, int64_t kappa) {
  const int64_t dtau = dtau_for(d, kappa);
  if (dtau > d) return kInf;  // empty cap
  return specfn::log_binom_tail(d, 0, dtau - 1) -
         specfn::log_binom_tail(d, dtau, d);
}

std::optional<int64_t> solve_kappa(double eps, int64_t d) {
  if (d < 1) throw std::domain_error("solve_kappa: d must be >= 1");
  if (eps < 0.0) throw std::domain_error("solve_kappa: eps must be >= 0");
  // Slack covering log-gamma rounding in the tail sums; without it the
  // exactly-symmetric odd-d case (true left side 0) can evaluate to a
  // few ulps above an eps of 0.
  constexpr double kRoundingSlack = 1e-11;
  const auto feasible = [&](int64_t kappa) {
    return exact_condition_lhs(d, kappa) <= eps + kRoundingSlack;
  };
  if (!feasible(0)) return std::nullopt;
  int64_t lo = 0;      // feasible
  int64_t hi = d - 1;  // maybe infeasible
  if (feasible(hi)) return hi;
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double kappa_bound_small(double eps, int64_t d) {
  // eps >= ln(1 + k*s) - ln(1 - k*s) with s = sqrt(2/(3d+2)) solves to
  // k <= tanh(eps/2)/s, subject to kappa < sqrt(1.5 d + 1).
  const double s = std::sqrt(2.0 / (3.0 * static_cast<double>(d) + 2.0));
  const double k = std::tanh(0.5 * eps) / s;
  const double cap = std::sqrt(1.5 * static_cast<double>(d) + 1.0);
  return std::min(k, std::nextafter(cap, 0.0));
}

double kappa_bound_large(double eps, int64_t d) {
  // Solve eps = (1/2)ln 2 + (1/2)ln(d - k2^2/d) + (d/2) * h(k2/d) for
  // k2 = kappa + 2, where h(x) = (1+x)ln(1+x) + (1-x)ln(1-x); the right
  // side is increasing in k2.
  const double dd = static_cast<double>(d);
  auto rhs = [dd](double k2) {
    const double x = k2 / dd;
    const double h = (1.0 + x) * std::log1p(x) + (1.0 - x) * std::log1p(-x);
    return 0.5 * std::numbers::ln2 + 0.5 * std::log(dd - k2 * k2 / dd) +
           0.5 * dd * h;
  };
  double lo = 0.0;
  double hi = dd - 1.0;
  if (rhs(lo) > eps) return 0.0;
  if (rhs(hi) <= eps) return hi - 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rhs(mid) <= eps ? lo : hi) = mid;
  }
  return std::max(0.0, lo - 2.0);
}

double norm_constant(int64_t d, int64_t kappa, double p) {
  if (d < 1) throw std::domain_error("norm_constant: d must be >= 1");
  if (kappa < 0 || kappa >= d) {
    throw std::domain_error("norm_constant: kappa outside {0,...,d-1}");
  }
  if (p < 0.5 || p > 1.0) {
    throw std::domain_error("norm_constant: p outside [1/2, 1]");
  }
  const int64_t dtau = dtau_for(d, kappa);
  const double log_corner = specfn::log_choose(d - 1, dtau - 1);
  const double log_kplus = log_corner - specfn::log_binom_tail(d, dtau, d);
  const double log_kminus_abs =
      log_corner - specfn::log_binom_tail(d, 0, dtau - 1);
  const double log_pos = std::log(p) + log_kplus;
  if (p == 1.0) return std::exp(log_pos);
  const double log_neg = std::log1p(-p) + log_kminus_abs;
  if (log_pos <= log_neg) {
    throw std::invalid_argument(
        "norm_constant: m <= 0 for d=" + std::to_string(d) +
        " kappa=" + std::to_string(kappa) + " p=" + std::to_string(p));
  }
  return std::exp(log_pos + log1mexp(log_neg - log_pos));
}

Params make_params(int64_t d, int64_t kappa, double p, double eps_direction) {
  Params params;
  params.dim = d;
  params.kappa = kappa;
  params.p = p;
  params.dtau = dtau_for(d, kappa);
  params.m = norm_constant(d, kappa, p);
  params.eps_direction = eps_direction;
  params.log_tail_hi = specfn::log_binom_tail(d, params.dtau, d);
  params.log_tail_lo = specfn::log_binom_tail(d, 0, params.dtau - 1);
  return params;
}

void sample(std::span<const double> u, const Params& params, Rng& rng,
            std::span<double> out, bool* clamped) {
  const int64_t d = params.dim;
  if (static_cast<int64_t>(u.size()) != d ||
      static_cast<int64_t>(out.size()) != d) {
    throw std::invalid_argument("privunit_inf::sample: dimension mismatch");
  }
  bool any_clamped = false;
  // Round each coordinate to a corner, P(+1) = (1 + u_j)/2; the corner
  // sign is stored in out for the moment.
  for (int64_t j = 0; j < d; ++j) {
    double uj = u[static_cast<size_t>(j)];
    if (uj < -1.0 || uj > 1.0) {
      if (std::abs(uj) > 1.0 + 1e-6) {
        throw std::invalid_argument(
            "privunit_inf::sample: coordinate outside [-1, 1]");
      }
      uj = std::clamp(uj, -1.0, 1.0);
      any_clamped = true;
    }
    out[static_cast<size_t>(j)] =
        rng.next_double() < 0.5 * (1.0 + uj) ? 1.0 : -1.0;
  }
  if (clamped != nullptr) *clamped = any_clamped;

  const bool in_cap = rng.next_bernoulli(params.p);
  const int64_t matches =
      in_cap ? sample_truncated_matches(d, params.dtau, d, params.log_tail_hi,
                                        rng)
             : sample_truncated_matches(d, 0, params.dtau - 1,
                                        params.log_tail_lo, rng);

  // Choose the agreeing positions as a uniform subset of size
  // `matches` (partial Fisher-Yates), then emit V / m.
  std::vector<int64_t> idx(static_cast<size_t>(d));
  for (int64_t j = 0; j < d; ++j) idx[static_cast<size_t>(j)] = j;
  const int64_t disagreements = d - matches;
  // Shuffle the smaller side.
  const int64_t k = std::min(matches, disagreements);
  for (int64_t j = 0; j < k; ++j) {
    const int64_t swap_with =
        j + static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(d - j)));
    std::swap(idx[static_cast<size_t>(j)], idx[static_cast<size_t>(swap_with)]);
  }
  const bool flip_selected = disagreements <= matches;
  const double inv_m = 1.0 / params.m;
  if (flip_selected) {
    // k == disagreements: the selected positions disagree with the corner.
    for (int64_t j = 0; j < k; ++j) {
      out[static_cast<size_t>(idx[static_cast<size_t>(j)])] *= -1.0;
    }
  } else {
    // k == matches: the selected positions agree; flip everything else.
    std::vector<bool> keep(static_cast<size_t>(d), false);
    for (int64_t j = 0; j < k; ++j) {
      keep[static_cast<size_t>(idx[static_cast<size_t>(j)])] = true;
    }
    for (int64_t j = 0; j < d; ++j) {
      if (!keep[static_cast<size_t>(j)]) out[static_cast<size_t>(j)] *= -1.0;
    }
  }
  for (int64_t j = 0; j < d; ++j) out[static_cast<size_t>(j)] *= inv_m;
}

std::vector<double> sample(std::span<const double> u, const Params& params,
                           Rng& rng) {
  std::vector<double> out(u.size());
  sample(u, params, rng, out);
  return out;
}

double privacy_log_ratio(const Params& params) {
  return logit(params.p) + params.log_tail_lo - params.log_tail_hi;
}

}  // namespace privfed::privunit_inf
