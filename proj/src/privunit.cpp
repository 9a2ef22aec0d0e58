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

#include "privfed/privunit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "privfed/common.hpp"
#include "privfed/specfn.hpp"

namespace privfed::privunit {
namespace {

// Residual of the large-threshold sufficient condition,
//   eps - [ (1/2) ln d + ln 6 - ((d-1)/2) ln(1 - g^2) + ln g ],
// strictly decreasing in g on (0, 1).
double large_branch_residual(double eps, int64_t d, double g) {
  const double dd = static_cast<double>(d);
  return eps - (0.5 * std::log(dd) + std::log(6.0) -
                0.5 * (dd - 1.0) * std::log1p(-g * g) + std::log(g));
}

}  // namespace

double solve_gamma(double eps, int64_t d) {
  if (!(eps > 0.0)) throw std::domain_error("solve_gamma: eps must be > 0");
  if (d < 2) throw std::domain_error("solve_gamma: d must be >= 2");
  const double dd = static_cast<double>(d);

  // Small-threshold branch, closed form. tanh(eps/2) = (e^eps-1)/(e^eps+1)
  // without overflow for large eps.
  double best = std::tanh(0.5 * eps) *
                std::sqrt(std::numbers::pi / (2.0 * (dd - 1.0)));
  best = std::min(best, 1.0 - 1e-12);

  // Large-threshold branch, valid only for gamma >= sqrt(2/d).
  const double lo0 = std::sqrt(2.0 / dd);
  if (lo0 < 1.0 && large_branch_residual(eps, d, lo0) >= 0.0) {
    double lo = lo0;
    double hi = 1.0 - 1e-15;
    if (large_branch_residual(eps, d, hi) >= 0.0) {
      best = std::max(best, hi);
    } else {
      // Bisection on the monotone residual to 1e-12.
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (large_branch_residual(eps, d, mid) >= 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      best = std::max(best, lo);
    }
  }
  return best;
}

double norm_constant(int64_t d, double gamma, double p) {
  if (d < 2) throw std::domain_error("norm_constant: d must be >= 2");
  if (gamma < 0.0 || gamma >= 1.0) {
    throw std::domain_error("norm_constant: gamma outside [0, 1)");
  }
  if (p < 0.5 || p > 1.0) {
    throw std::domain_error("norm_constant: p outside [1/2, 1]");
  }
  const double dd = static_cast<double>(d);
  const double alpha = 0.5 * (dd - 1.0);
  const double tau = 0.5 * (1.0 + gamma);

  // g_plus = (1-g^2)^a / (a 2^{d-1} [B(a,a) - B(tau;a,a)]) and
  // g_minus = -(1-g^2)^a / (a 2^{d-1} B(tau;a,a)); the bracketed terms
  // are B(a,a) I_{1-tau}(a,a) and B(a,a) I_tau(a,a) respectively.
  const double log_common = alpha * std::log1p(-gamma * gamma) -
                            std::log(alpha) - (dd - 1.0) * std::numbers::ln2 -
                            specfn::log_beta(alpha, alpha);
  const double log_gplus =
      log_common - specfn::reg_inc_beta(1.0 - tau, alpha, alpha).log();
  const double log_gminus_abs =
      log_common - specfn::reg_inc_beta(tau, alpha, alpha).log();

  const double log_pos = std::log(p) + log_gplus;
  if (p == 1.0) return std::exp(log_pos);
  const double log_neg = std::log1p(-p) + log_gminus_abs;
  if (log_pos <= log_neg) {
    throw std::invalid_argument(
        "norm_constant: m <= 0 for d=" + std::to_string(d) +
        " gamma=" + std::to_string(gamma) + " p=" + std::to_string(p));
  }
  return std::exp(log_pos + log1mexp(log_neg - log_pos));
}

Params make_params(int64_t d, double gamma, double p, double eps_direction) {
  Params params;
  params.dim = d;
  params.gamma = gamma;
  params.p = p;
  params.m = norm_constant(d, gamma, p);
  params.eps_direction = eps_direction;
  params.log_cap_prob = specfn::sphere_cap_logprob(d, gamma).log();
  params.log_comp_prob = log1mexp(params.log_cap_prob);
  return params;
}

void sample(std::span<const double> u, const Params& params, Rng& rng,
            std::span<double> out, bool* renormalized) {
  const int64_t d = params.dim;
  if (static_cast<int64_t>(u.size()) != d ||
      static_cast<int64_t>(out.size()) != d) {
    throw std::invalid_argument("privunit::sample: dimension mismatch");
  }
  double sq = 0.0;
  for (double x : u) sq += x * x;
  const double norm = std::sqrt(sq);
  if (std::abs(norm - 1.0) > 1e-6) {
    throw std::invalid_argument("privunit::sample: input is not unit norm");
  }
  const bool needs_rescale = std::abs(norm - 1.0) > 1e-9;
  if (renormalized != nullptr) *renormalized = needs_rescale;
  const double inv_norm = needs_rescale ? 1.0 / norm : 1.0;

  const double alpha = 0.5 * (static_cast<double>(d) - 1.0);
  const double tau = 0.5 * (1.0 + params.gamma);
  const specfn::IncompleteBeta ib(alpha, alpha);

  // First coordinate T = 2B - 1 with B ~ Beta(a, a) truncated to
  // [tau, 1] (cap) or [0, tau) (complement), drawn by inverse CDF on a
  // log-rescaled uniform so thin caps with mass below double-underflow
  // still sample correctly.
  const bool in_cap = rng.next_bernoulli(params.p);
  const double v = rng.next_double_pos();
  double b;
  if (in_cap) {
    // By symmetry B >= tau iff B' = 1 - B <= 1 - tau, with
    // ln P(B' <= 1-tau) = log_cap_prob.
    const double target = std::log(v) + params.log_cap_prob;
    b = 1.0 - ib.inv_log_cdf(target);
  } else {
    const double target = std::log(v) + params.log_comp_prob;
    b = ib.inv_log_cdf(target);
    if (b >= tau) b = std::nextafter(tau, 0.0);
  }
  const double t = 2.0 * b - 1.0;

  // Remaining d-1 coordinates: scaled uniform direction on S^{d-2}.
  double wsq = 0.0;
  for (int64_t i = 1; i < d; ++i) {
    const double g = rng.next_gaussian();
    out[static_cast<size_t>(i)] = g;
    wsq += g * g;
  }
  const double scale =
      d > 1 ? std::sqrt(std::max(0.0, 1.0 - t * t) / wsq) : 0.0;
  out[0] = t;
  for (int64_t i = 1; i < d; ++i) out[static_cast<size_t>(i)] *= scale;

  // Map from the e1 frame to the u frame with the Householder
  // reflection through (e1 - u); identity when u is already e1.
  double hsq = 0.0;
  double hdotv = 0.0;
  {
    // h = e1 - u; accumulate <h, h> and <h, V'> without materializing h.
    const double h0 = 1.0 - u[0] * inv_norm;
    hsq = h0 * h0;
    hdotv = h0 * out[0];
    for (int64_t i = 1; i < d; ++i) {
      const double hi = -u[static_cast<size_t>(i)] * inv_norm;
      hsq += hi * hi;
      hdotv += hi * out[static_cast<size_t>(i)];
    }
  }
  if (hsq > 1e-24) {
    const double coef = 2.0 * hdotv / hsq;
    out[0] -= coef * (1.0 - u[0] * inv_norm);
    for (int64_t i = 1; i < d; ++i) {
      out[static_cast<size_t>(i)] -=
          coef * (-u[static_cast<size_t>(i)] * inv_norm);
    }
  }

  const double inv_m = 1.0 / params.m;
  for (int64_t i = 0; i < d; ++i) out[static_cast<size_t>(i)] *= inv_m;
}

std::vector<double> sample(std::span<const double> u, const Params& params,
                           Rng& rng) {
  std::vector<double> out(u.size());
  sample(u, params, rng, out);
  return out;
}

double privacy_log_ratio(const Params& params) {
  return logit(params.p) + params.log_comp_prob - params.log_cap_prob;
}

}  // namespace privfed::privunit
