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

#include "qsl/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "qsl/parallel.hpp"

namespace qsl {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QSL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

BasisIndex::BasisIndex(std::uint64_t v, int w) : value(v), width(w) {
  if (w < 1 || w > kMaxQubits) {
    throw ValidationError("basis index width " + std::to_string(w) + " outside [1, 30]");
  }
  if ((v >> w) != 0) {
    throw ValidationError("basis index " + std::to_string(v) + " does not fit in " +
                          std::to_string(w) + " bits");
  }
}

std::string BasisIndex::to_bitstring() const {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int q = 0; q < width; ++q) {
    if (bit(q)) s[static_cast<std::size_t>(width - 1 - q)] = '1';
  }
  return s;
}

BasisIndex BasisIndex::from_bitstring(std::string_view text) {
  const int w = static_cast<int>(text.size());
  if (w < 1 || w > kMaxQubits) {
    throw ParseError("bitstring length " + std::to_string(w) + " outside [1, 30]");
  }
  std::uint64_t v = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ParseError(std::string("invalid character '") + c + "' in bitstring");
    }
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return {v, w};
}

int ResourceCap::max_qubits() const {
  int n = 0;
  while (n < kMaxQubits && std::ldexp(16.0, n + 1) <= gib * std::ldexp(1.0, 30)) ++n;
  return n;
}

void ResourceCap::check(int n) const {
  if (n > kMaxQubits) {
    throw ResourceError("n = " + std::to_string(n) + " exceeds the hard limit of 30 qubits");
  }
  if (n > max_qubits()) {
    throw ResourceError("n = " + std::to_string(n) + " needs " +
                        std::to_string(std::ldexp(16.0, n) / std::ldexp(1.0, 30)) +
                        " GiB, over the configured cap of " + std::to_string(gib) + " GiB");
  }
}

ExplicitDistribution::ExplicitDistribution(int n, std::vector<double> probs)
    : n_(n), probs_(std::move(probs)) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("distribution width " + std::to_string(n) + " outside [1, 30]");
  }
  if (probs_.size() != (std::uint64_t{1} << n)) {
    throw ValidationError("distribution over " + std::to_string(n) + " bits needs " +
                          std::to_string(std::uint64_t{1} << n) + " entries, got " +
                          std::to_string(probs_.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValidationError("probability at index " + std::to_string(i) +
                            " is negative or not finite");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw ValidationError("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

ExplicitDistribution ExplicitDistribution::uniform(int n) {
  if (n < 1 || n > kMaxQubits) throw ValidationError("width outside [1, 30]");
  const std::uint64_t size = std::uint64_t{1} << n;
  return {n, std::vector<double>(size, 1.0 / static_cast<double>(size))};
}

ExplicitDistribution ExplicitDistribution::point_mass(int n, std::uint64_t index) {
  if (n < 1 || n > kMaxQubits) throw ValidationError("width outside [1, 30]");
  std::vector<double> probs(std::uint64_t{1} << n, 0.0);
  if (index >= probs.size()) throw ValidationError("point-mass index out of range");
  probs[index] = 1.0;
  return {n, std::move(probs)};
}

void SampleSet::validate() const {
  if (n < 1 || n > kMaxQubits) throw ValidationError("sample width outside [1, 30]");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if ((samples[i] >> n) != 0) {
      throw ValidationError("sample " + std::to_string(i) + " has bits above width " +
                            std::to_string(n));
    }
  }
}

std::vector<double> cumulative(const ExplicitDistribution& dist) {
  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  for (std::uint64_t i = 0; i < dist.size(); ++i) {
    acc += dist[i];
    cdf[i] = acc;
  }
  // Entries that never receive mass stay below u for every draw; pin the tail
  // so that rounding in the running sum cannot leave a gap at the top.
  for (std::uint64_t i = dist.size(); i-- > 0;) {
    if (dist[i] > 0.0) {
      for (std::uint64_t j = i; j < dist.size(); ++j) cdf[j] = 1.0;
      break;
    }
  }
  return cdf;
}

std::uint64_t inverse_cdf(std::span<const double> cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return cdf.size() - 1;
  return static_cast<std::uint64_t>(it - cdf.begin());
}

SampleSet sample_from_distribution(const ExplicitDistribution& dist, std::uint64_t count,
                                   Prng& rng, int threads) {
  if (count == 0) throw ValidationError("sample request for zero draws");
  const std::vector<double> cdf = cumulative(dist);
  const std::uint64_t base = rng.next_u64();
  SampleSet out;
  out.n = dist.n();
  out.samples.resize(count);
  const std::uint64_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, threads, [&](std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t c = first; c < last; ++c) {
      Prng local(derive_seed(base, c));
      const std::uint64_t begin = c * kSampleChunk;
      const std::uint64_t end = std::min(count, begin + kSampleChunk);
      for (std::uint64_t i = begin; i < end; ++i) {
        out.samples[i] = inverse_cdf(cdf, local.uniform());
      }
    }
  });
  return out;
}

std::vector<std::uint64_t> count_samples(const SampleSet& samples) {
  if (samples.n < 1 || samples.n > kDefaultQubitCap) {
    throw ResourceError("histogram over " + std::to_string(samples.n) +
                        " bits exceeds the 26-bit limit");
  }
  std::vector<std::uint64_t> counts(std::uint64_t{1} << samples.n, 0);
  for (std::uint64_t s : samples.samples) {
    if (s >= counts.size()) throw ValidationError("sample wider than the set's width");
    ++counts[s];
  }
  return counts;
}

ExplicitDistribution empirical_distribution(const SampleSet& samples) {
  if (samples.empty()) throw ValidationError("empirical distribution of an empty sample set");
  const auto counts = count_samples(samples);
  const double total = static_cast<double>(samples.size());
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = static_cast<double>(counts[i]) / total;
  }
  return {samples.n, std::move(probs)};
}

}  // namespace qsl
