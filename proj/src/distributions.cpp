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

#include "qsl/distributions.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>

namespace qsl {

SubsetMask::SubsetMask(std::uint64_t mask, int width) : y(mask), n(width) {
  if (width < 1 || width > kMaxQubits) throw ValidationError("mask width outside [1, 30]");
  if ((mask >> width) != 0) throw ValidationError("mask has bits above width " + std::to_string(width));
}

SubsetMask SubsetMask::random(int n, int m, Prng& rng) {
  if (m < 0 || m > n) {
    throw ValidationError("mask bit count " + std::to_string(m) + " must satisfy 0 <= m <= n = " +
                          std::to_string(n));
  }
  std::vector<int> positions(static_cast<std::size_t>(n));
  std::iota(positions.begin(), positions.end(), 0);
  std::uint64_t y = 0;
  for (int k = 0; k < m; ++k) {
    const auto pick = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - k)));
    std::swap(positions[k], positions[pick]);
    y |= std::uint64_t{1} << positions[k];
  }
  return {y, n};
}

int SubsetMask::m() const { return std::popcount(y); }

int SubsetMask::parity(std::uint64_t k) const { return std::popcount(k & y) & 1; }

std::string ordering_tag(const Ordering& ord) {
  struct Visitor {
    std::string operator()(const IntegerOrder&) const { return "integer"; }
    std::string operator()(const SubsetParityOrder& o) const {
      return "parity-m" + std::to_string(o.mask.m());
    }
    std::string operator()(const RandomPermutation& o) const {
      return "permute-p" + std::to_string(o.seed);
    }
  };
  return std::visit(Visitor{}, ord);
}

ExplicitDistribution porter_thomas_probs(int n, Prng& rng, const ResourceCap& cap) {
  if (n < 1) throw ValidationError("Porter-Thomas profile needs n >= 1");
  cap.check(n);
  std::vector<double> probs(std::uint64_t{1} << n);
  double sum = 0.0;
  for (double& p : probs) {
    p = rng.exponential();
    sum += p;
  }
  for (double& p : probs) p /= sum;
  return {n, std::move(probs)};
}

std::vector<std::uint64_t> random_permutation(int n, std::uint64_t seed) {
  std::vector<std::uint64_t> perm(std::uint64_t{1} << n);
  std::iota(perm.begin(), perm.end(), std::uint64_t{0});
  Prng rng(seed);
  for (std::uint64_t i = perm.size() - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.below(i + 1)]);
  }
  return perm;
}

std::vector<std::uint64_t> invert_permutation(const std::vector<std::uint64_t>& perm) {
  std::vector<std::uint64_t> inv(perm.size());
  for (std::uint64_t i = 0; i < perm.size(); ++i) inv.at(perm[i]) = i;
  return inv;
}

ExplicitDistribution apply_permutation(const ExplicitDistribution& dist,
                                       const std::vector<std::uint64_t>& perm) {
  if (perm.size() != dist.size()) throw ValidationError("permutation size differs from distribution");
  std::vector<double> out(dist.size());
  for (std::uint64_t i = 0; i < dist.size(); ++i) out.at(perm[i]) = dist[i];
  return {dist.n(), std::move(out)};
}

ExplicitDistribution apply_ordering(const ExplicitDistribution& dist, const Ordering& ord) {
  std::vector<double> ranked(dist.probs().begin(), dist.probs().end());
  std::sort(ranked.begin(), ranked.end(), std::greater<>());
  const std::uint64_t size = ranked.size();

  if (std::holds_alternative<IntegerOrder>(ord)) return {dist.n(), std::move(ranked)};

  std::vector<double> out(size);
  if (const auto* sp = std::get_if<SubsetParityOrder>(&ord)) {
    if (sp->mask.n != dist.n()) {
      throw ValidationError("mask width " + std::to_string(sp->mask.n) +
                            " differs from distribution width " + std::to_string(dist.n()));
    }
    std::uint64_t rank = 0;
    for (int parity = 0; parity <= 1; ++parity) {
      for (std::uint64_t k = 0; k < size; ++k) {
        if (sp->mask.parity(k) == parity) out[k] = ranked[rank++];
      }
    }
    return {dist.n(), std::move(out)};
  }

  const auto& rp = std::get<RandomPermutation>(ord);
  const auto perm = random_permutation(dist.n(), rp.seed);
  for (std::uint64_t r = 0; r < size; ++r) out[perm[r]] = ranked[r];
  return {dist.n(), std::move(out)};
}

Dataset make_dataset(int n, const Ordering& ord, std::uint64_t sample_count, std::uint64_t seed,
                     const ResourceCap& cap, int threads) {
  if (sample_count == 0) throw ValidationError("dataset needs at least one sample");
  Prng profile_rng(seed);
  ExplicitDistribution dist = apply_ordering(porter_thomas_probs(n, profile_rng, cap), ord);
  const std::uint64_t sample_seed = derive_seed(seed, 1);
  Prng sample_rng(sample_seed);
  SampleSet samples = sample_from_distribution(dist, sample_count, sample_rng, threads);
  samples.seed = seed;
  samples.source_tag = "porter-thomas n=" + std::to_string(n) + " order=" + ordering_tag(ord) +
                       " profile_seed=" + std::to_string(seed) +
                       " sample_seed=" + std::to_string(sample_seed);
  if (const auto* sp = std::get_if<SubsetParityOrder>(&ord)) {
    samples.source_tag += " mask=" + std::to_string(sp->mask.y);
  }
  return {std::move(dist), std::move(samples)};
}

std::string dataset_stem(int n, const Ordering& ord, std::uint64_t seed) {
  char nn[8];
  std::snprintf(nn, sizeof nn, "q%02d", n);
  return std::string(nn) + "_" + ordering_tag(ord) + "_s" + std::to_string(seed);
}

}  // namespace qsl
