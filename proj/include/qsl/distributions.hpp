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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qsl/core.hpp"

namespace qsl {

/// n-bit mask y selecting the bits whose parity mod(k . y, 2) is taken.
struct SubsetMask {
  std::uint64_t y = 0;
  int n = 0;

  SubsetMask(std::uint64_t mask, int width);
  /// Mask with exactly m set bits at positions drawn without replacement.
  static SubsetMask random(int n, int m, Prng& rng);

  int m() const;
  int parity(std::uint64_t k) const;
};

struct IntegerOrder {};
struct SubsetParityOrder {
  SubsetMask mask;
};
struct RandomPermutation {
  std::uint64_t seed = 0;
};

/// Each alternative denotes a bijection on {0, ..., 2^n - 1}.
using Ordering = std::variant<IntegerOrder, SubsetParityOrder, RandomPermutation>;

/// Short tag used in file names and metadata: "integer", "parity-mM",
/// "permute-pSEED".
std::string ordering_tag(const Ordering& ord);

/// 2^n i.i.d. unit-rate exponentials, normalized to sum 1 (the Porter-Thomas
/// profile of a Haar-random state).
ExplicitDistribution porter_thomas_probs(int n, Prng& rng, const ResourceCap& cap = {});

/**
 * Reassigns the probability multiset according to `ord`. The probabilities
 * are first sorted in nonincreasing order; then
 *  - IntegerOrder gives rank r to bitstring r;
 *  - SubsetParityOrder stably partitions 0..2^n-1 into even then odd parity
 *    and hands out ranks along that sequence;
 *  - RandomPermutation gives rank r to bitstring perm[r], with perm drawn by
 *    Fisher-Yates from the seed.
 * Throws ValidationError when a mask width differs from the distribution's.
 */
ExplicitDistribution apply_ordering(const ExplicitDistribution& dist, const Ordering& ord);

/// Uniform random permutation of 0..2^n-1 (Fisher-Yates).
std::vector<std::uint64_t> random_permutation(int n, std::uint64_t seed);
std::vector<std::uint64_t> invert_permutation(const std::vector<std::uint64_t>& perm);
/// out[perm[i]] = dist[i].
ExplicitDistribution apply_permutation(const ExplicitDistribution& dist,
                                       const std::vector<std::uint64_t>& perm);

struct Dataset {
  ExplicitDistribution distribution;
  SampleSet samples;
};

/// Porter-Thomas profile from Prng(seed), reordered, then sampled with a
/// seed derived from `seed`. All seeds are recorded in the sample metadata.
Dataset make_dataset(int n, const Ordering& ord, std::uint64_t sample_count, std::uint64_t seed,
                     const ResourceCap& cap = {}, int threads = 1);

/// "qNN_<ordering>_sSEED".
std::string dataset_stem(int n, const Ordering& ord, std::uint64_t seed);

}  // namespace qsl
