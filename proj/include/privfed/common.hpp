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

#ifndef PRIVFED_COMMON_HPP_
#define PRIVFED_COMMON_HPP_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace privfed {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ln(1 - e^x) for x <= 0, stable on both ends.
inline double log1mexp(double x) {
  if (x >= 0.0) {
    if (x == 0.0) return kNegInf;
    throw std::domain_error("log1mexp: argument must be <= 0");
  }
  static const double kLogHalf = std::log(0.5);
  return x > kLogHalf ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

// ln(e^a + e^b).
inline double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-(a > b ? a - b : b - a)));
}

// A probability carried as its natural log. value() <= 0 and
// exp(value()) in [0, 1]; p = 0 is represented by -infinity.
class LogProb {
 public:
  LogProb() : log_(kNegInf) {}

  static LogProb from_log(double log_p) {
    // Tolerate tiny positive rounding residue from upstream arithmetic.
    if (log_p > 1e-9) {
      throw std::domain_error("LogProb: log value " + std::to_string(log_p) +
                              " is positive");
    }
    LogProb lp;
    lp.log_ = log_p > 0.0 ? 0.0 : log_p;
    return lp;
  }

  static LogProb from_linear(double p) {
    if (p < 0.0 || p > 1.0) {
      throw std::domain_error("LogProb: probability outside [0, 1]");
    }
    LogProb lp;
    lp.log_ = p == 0.0 ? kNegInf : std::log(p);
    return lp;
  }

  double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  bool is_zero() const { return log_ == kNegInf; }

  // 1 - p.
  LogProb complement() const {
    if (is_zero()) return from_log(0.0);
    if (log_ == 0.0) return LogProb();
    return from_log(log1mexp(log_));
  }

 private:
  double log_;
};

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

// ln(1 + e^x).
inline double softplus(double x) {
  const double m = x > 0.0 ? x : 0.0;
  return m + std::log1p(std::exp(-std::abs(x)));
}

// ln(p / (1 - p)); p = 1 maps to +infinity.
inline double logit(double p) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("logit: p outside [0, 1]");
  if (p == 1.0) return kInf;
  if (p == 0.0) return kNegInf;
  return std::log(p) - std::log1p(-p);
}

}  // namespace privfed

#endif  // PRIVFED_COMMON_HPP_
