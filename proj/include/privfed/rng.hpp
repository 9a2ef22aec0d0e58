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

#ifndef PRIVFED_RNG_HPP_
#define PRIVFED_RNG_HPP_

#include <array>
#include <cstdint>
#include <span>

namespace privfed {

// splitmix64 finalizer; used both for seeding and for counter-based
// stream derivation so that per-client / per-round streams are a pure
// function of (base seed, indices) and never of scheduling order.
uint64_t mix64(uint64_t x);

uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0);

// xoshiro256++ with explicit seeding. The engine and all variate
// transforms are self-contained so that identical seeds give identical
// streams across standard libraries and build modes.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double next_double();

  // Uniform on (0, 1]; safe as an argument to log().
  double next_double_pos();

  bool next_bernoulli(double p) { return next_double() < p; }

  // Unbiased integer in {0, ..., n-1}.
  uint64_t next_below(uint64_t n);

  // Standard normal via the Marsaglia polar method (one spare cached).
  double next_gaussian();

  void fill_gaussian(std::span<double> out);

  // Gamma(shape, 1) via Marsaglia-Tsang; shape == 0 returns 0.
  double next_gamma(double shape);

 private:
  std::array<uint64_t, 4> s_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace privfed

#endif  // PRIVFED_RNG_HPP_
