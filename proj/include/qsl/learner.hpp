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
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "qsl/core.hpp"

namespace qsl {

/**
 * Autoregressive table model. Bits are generated from position 0 (least
 * significant) to n - 1. The context of position t is the c = min(t, k)
 * preceding bits, packed as (z >> (t - c)) & (2^c - 1).
 */
struct ArTableModel {
  int n = 0;
  int k = 0;
  double alpha = 0.5;
  /// table[t][context] = P(bit t = 1 | context). Unobserved contexts give 1/2.
  std::vector<std::unordered_map<std::uint64_t, double>> table;

  int context_length(int t) const { return t < k ? t : k; }
  std::uint64_t context_of(int t, std::uint64_t z) const;
  double p1(int t, std::uint64_t z) const;
  std::uint64_t parameter_count() const;
};

/// Independent bits with P(bit t = 1) = p[t].
struct ProductModel {
  int n = 0;
  std::vector<double> p;

  std::uint64_t parameter_count() const { return p.size(); }
};

using Model = std::variant<ArTableModel, ProductModel>;

inline constexpr double kDefaultSmoothing = 0.5;

/// Counting estimate (ones + alpha) / (total + 2 alpha) for every observed
/// (position, context). alpha = 0 gives the maximum-likelihood table.
ArTableModel fit_ar(const SampleSet& samples, int k, double alpha = kDefaultSmoothing);
ProductModel fit_product(const SampleSet& samples);

/// Chunked like sample_from_distribution: one draw from rng, then chunk c of
/// kSampleChunk samples uses Prng(derive_seed(base, c)). Thread-count
/// independent.
SampleSet model_sample(const Model& model, std::uint64_t count, Prng& rng, int threads = 1);
/// Probability of every n-bit string (n <= 20).
ExplicitDistribution model_distribution(const Model& model);

int model_width(const Model& model);
std::uint64_t model_parameter_count(const Model& model);

/// {"type":"ar"|"product","n","k","alpha","entries":[[t,"context bits",p1],...]}
/// Context text puts the most recent bit leftmost. Entries are sorted.
std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

struct CapacityDataset {
  std::string tag;
  ExplicitDistribution truth;
  SampleSet samples;
};

struct CapacityRow {
  int k = 0;
  std::uint64_t params = 0;
  double fidelity = 0.0;
  std::string dataset_tag;
};

inline constexpr std::uint64_t kCapacityEvalSamples = 200000;

/// One AR fit per (dataset, k); fidelity is XEB of eval_samples model draws
/// against the dataset's truth. Row r draws with Prng(derive_seed(seed, r)).
std::vector<CapacityRow> capacity_sweep(const std::vector<CapacityDataset>& datasets,
                                        const std::vector<int>& orders, std::uint64_t seed,
                                        double alpha = kDefaultSmoothing,
                                        std::uint64_t eval_samples = kCapacityEvalSamples, int threads = 1);

/// k,params,fidelity,dataset_tag
void write_capacity_csv(std::ostream& out, const std::vector<CapacityRow>& rows);
std::vector<CapacityRow> read_capacity_csv(std::istream& in);

}  // namespace qsl
