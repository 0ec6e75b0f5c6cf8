// Copyright 2026 The QSL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>

namespace qsl {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used for seed expansion
/// and for deriving independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` derived from a parent seed: seed XOR hash(index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return seed ^ splitmix64(index + 1);
}

/**
 * xorshift64* generator (Vigna 2016, shifts 12/25/27, multiplier
 * 0x2545F4914F6CDD1D). The seed is passed through splitmix64 so that every
 * seed, including 0, yields a nonzero state.
 *
 * Only integer arithmetic is used to produce raw words, so a given seed
 * produces the same sequence on every platform. The floating-point helpers
 * below are built from those words with exactly specified formulas.
 */
class Prng {
 public:
  explicit Prng(std::uint64_t seed = 0) noexcept : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next_u64() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unit-rate exponential variate, -ln(1 - u).
  double exponential() noexcept { return -std::log1p(-uniform()); }

  /// Uniform integer in [0, bound); bound must be positive. Unbiased
  /// (rejects the short tail of the 64-bit range).
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace qsl
