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

#include "privfed/specfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace privfed::specfn {
namespace {

constexpr int kMaxContinuedFractionIters = 500;
constexpr double kContinuedFractionTol = 1e-15;
constexpr int kBisectIters = 80;
constexpr int kNewtonPolishIters = 8;

// Modified Lentz evaluation of the incomplete-beta continued fraction;
// valid (and fast) for x <= (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionIters; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kContinuedFractionTol) return h;
  }
  // The fraction is still contracting at this point; the partial value
  // is accurate to well below the tolerances we promise.
  return h;
}

double log_reg_inc_beta_impl(double x, double a, double b, double log_beta_ab) {
  if (x <= 0.0) return kNegInf;
  if (x >= 1.0) return 0.0;
  // Symmetric midpoint identity I_{1/2}(a, a) = 1/2, exact; the
  // continued fraction is at its slowest right there.
  if (x == 0.5 && a == b) return -std::numbers::ln2;
  if (x > (a + 1.0) / (a + b + 2.0)) {
    const double other =
        log_reg_inc_beta_impl(1.0 - x, b, a, log_beta_ab);
    return other == 0.0 ? kNegInf : log1mexp(other);
  }
  const double log_front = a * std::log(x) + b * std::log1p(-x) -
                           log_beta_ab - std::log(a);
  const double lp = log_front + std::log(beta_cf(a, b, x));
  return lp > 0.0 ? 0.0 : lp;
}

}  // namespace

double log_beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("log_beta: parameters must be positive");
  }
  return std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
}

double log_choose(int64_t n, int64_t k) {
  if (k < 0 || k > n) {
    throw std::domain_error("log_choose: k outside [0, n]");
  }
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

LogProb reg_inc_beta(double x, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("reg_inc_beta: parameters must be positive");
  }
  if (x < 0.0 || x > 1.0) {
    throw std::domain_error("reg_inc_beta: x outside [0, 1]");
  }
  return LogProb::from_log(
      log_reg_inc_beta_impl(x, alpha, beta, log_beta(alpha, beta)));
}

IncompleteBeta::IncompleteBeta(double alpha, double beta)
    : alpha_(alpha), beta_(beta), log_beta_ab_(log_beta(alpha, beta)) {}

double IncompleteBeta::log_cdf(double x) const {
  if (x < 0.0 || x > 1.0) {
    throw std::domain_error("IncompleteBeta::log_cdf: x outside [0, 1]");
  }
  return log_reg_inc_beta_impl(x, alpha_, beta_, log_beta_ab_);
}

double IncompleteBeta::log_density(double x) const {
  if (x <= 0.0 || x >= 1.0) return kNegInf;
  return (alpha_ - 1.0) * std::log(x) + (beta_ - 1.0) * std::log1p(-x) -
         log_beta_ab_;
}

double IncompleteBeta::inv_log_cdf(double log_q) const {
  if (log_q > 0.0) {
    throw std::domain_error("inv_log_cdf: log target must be <= 0");
  }
  if (log_q == 0.0) return 1.0;
  if (log_q == kNegInf) return 0.0;
  // Bisection on t = ln x so targets deep in the left tail (where x
  // itself is far below any fixed linear grid) stay reachable; ln I_x
  // is increasing in t.
  double lo = -745.0;  // exp(lo) is the smallest positive double
  double hi = 0.0;
  for (int i = 0; i < kBisectIters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_cdf(std::exp(mid)) < log_q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Newton polish on g(t) = ln I_{e^t} - log_q, with
  // g'(t) = x f(x) / I_x at x = e^t.
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < kNewtonPolishIters; ++i) {
    const double x = std::exp(t);
    const double g = log_cdf(x) - log_q;
    const double log_deriv = t + log_density(x) - log_cdf(x);
    if (!std::isfinite(log_deriv)) break;
    const double step = g * std::exp(-log_deriv);
    const double next = t - step;
    if (!(next > lo && next < hi)) break;  // keep the bisection bracket
    t = next;
    if (std::abs(step) < 1e-16) break;
  }
  return std::exp(t);
}

double inv_reg_inc_beta(double q, double alpha, double beta) {
  if (q < 0.0 || q > 1.0) {
    throw std::domain_error("inv_reg_inc_beta: q outside [0, 1]");
  }
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;
  return IncompleteBeta(alpha, beta).inv_log_cdf(std::log(q));
}

double inv_reg_inc_beta_log(double log_q, double alpha, double beta) {
  return IncompleteBeta(alpha, beta).inv_log_cdf(log_q);
}

LogProb sphere_cap_logprob(int64_t d, double gamma) {
  if (d < 2) throw std::domain_error("sphere_cap_logprob: d must be >= 2");
  if (gamma < -1.0 || gamma > 1.0) {
    throw std::domain_error("sphere_cap_logprob: gamma outside [-1, 1]");
  }
  // <U, u> = 2B - 1 marginally with B ~ Beta(a, a), a = (d-1)/2, so
  // P(<U,u> >= gamma) = P(B >= (1+gamma)/2) = I_{(1-gamma)/2}(a, a)
  // by the symmetry of Beta(a, a).
  const double a = 0.5 * (static_cast<double>(d) - 1.0);
  return reg_inc_beta(0.5 * (1.0 - gamma), a, a);
}

double log_binom_tail(int64_t d, int64_t lo, int64_t hi) {
  if (d < 0 || lo < 0 || lo > hi || hi > d) {
    throw std::domain_error("log_binom_tail: need 0 <= lo <= hi <= d");
  }
  // Online log-sum-exp with an O(1) incremental log-binomial update.
  double lc = log_choose(d, lo);
  double running_max = lc;
  double shifted_sum = 1.0;
  for (int64_t l = lo + 1; l <= hi; ++l) {
    lc += std::log(static_cast<double>(d - l + 1)) -
          std::log(static_cast<double>(l));
    if (lc <= running_max) {
      shifted_sum += std::exp(lc - running_max);
    } else {
      shifted_sum = shifted_sum * std::exp(running_max - lc) + 1.0;
      running_max = lc;
    }
  }
  return running_max + std::log(shifted_sum);
}

}  // namespace privfed::specfn
