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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/error.hpp"
#include "qsl/prng.hpp"

namespace qsl {

// Bit convention, used everywhere: bit q of a basis index is the state of
// qubit q (qubit 0 is the least significant bit). Text renderings put qubit
// n-1 leftmost.

inline constexpr int kMaxQubits = 30;
inline constexpr int kDefaultQubitCap = 26;

/// An n-bit computational basis label.
struct BasisIndex {
  std::uint64_t value = 0;
  int width = 0;

  BasisIndex() = default;
  BasisIndex(std::uint64_t v, int w);

  bool bit(int q) const { return ((value >> q) & 1U) != 0; }
  BasisIndex flipped(int q) const { return {value ^ (std::uint64_t{1} << q), width}; }
  std::string to_bitstring() const;
  static BasisIndex from_bitstring(std::string_view text);

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Memory budget for explicit 2^n arrays, expressed in GiB of complex
/// amplitudes (16 bytes per entry). The default admits n <= 26.
struct ResourceCap {
  double gib = 1.0;

  int max_qubits() const;
  /// Throws ResourceError when n exceeds the cap or the hard limit of 30.
  void check(int n) const;
};

/// 2^n nonnegative probabilities summing to 1.
class ExplicitDistribution {
 public:
  static constexpr double kNormTolerance = 1e-9;

  /// Validates nonnegativity and normalization; throws ValidationError.
  ExplicitDistribution(int n, std::vector<double> probs);

  /// Uniform distribution over n bits.
  static ExplicitDistribution uniform(int n);
  static ExplicitDistribution point_mass(int n, std::uint64_t index);

  int n() const { return n_; }
  std::uint64_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::uint64_t i) const { return probs_[i]; }

  friend bool operator==(const ExplicitDistribution&, const ExplicitDistribution&) = default;

 private:
  int n_;
  std::vector<double> probs_;
};

/// Ordered multiset of n-bit basis indices plus provenance metadata.
struct SampleSet {
  int n = 0;
  std::vector<std::uint64_t> samples;
  std::string source_tag;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  BasisIndex at(std::size_t i) const { return {samples.at(i), n}; }

  /// Throws ValidationError if any sample has bits at or above n.
  void validate() const;

  friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

/// Draws per chunk when sampling. Chunk c uses a generator seeded with
/// derive_seed(base, c), so the output does not depend on the thread count.
inline constexpr std::uint64_t kSampleChunk = 1 << 16;

/**
 * Draws `count` i.i.d. samples by inverse-CDF lookup (binary search over the
 * cumulative array). Consumes exactly one word from `rng` to seed the chunk
 * streams. Throws ValidationError for count == 0.
 */
SampleSet sample_from_distribution(const ExplicitDistribution& dist, std::uint64_t count,
                                   Prng& rng, int threads = 1);

/// Cumulative sums of the probabilities, last entry forced to exactly 1.
std::vector<double> cumulative(const ExplicitDistribution& dist);

/// Maps a uniform draw in [0,1) to an index through a cumulative array.
std::uint64_t inverse_cdf(std::span<const double> cdf, double u);

/// Relative frequencies; requires a nonempty set and n <= 26.
ExplicitDistribution empirical_distribution(const SampleSet& samples);

/// Per-index counts (length 2^n).
std::vector<std::uint64_t> count_samples(const SampleSet& samples);

// Sample file: one bitstring per line, exactly n characters of {0,1},
// qubit n-1 leftmost, LF line endings, no header.
void write_samples(std::ostream& out, const SampleSet& samples);
void write_samples_file(const std::string& path, const SampleSet& samples);
/// Throws ParseError on ragged lines, foreign characters, CR, or empty input.
SampleSet read_samples(std::istream& in, std::string source_tag = {});
SampleSet read_samples_file(const std::string& path);

}  // namespace qsl
