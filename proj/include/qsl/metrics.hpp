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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qsl/core.hpp"

namespace qsl {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct XebResult {
  double fidelity = 0.0;
  std::uint64_t sample_count = 0;
  double standard_error = 0.0;
};

/**
 * Linear cross-entropy fidelity F = (2^n / N) * sum_s truth[s] - 1.
 * Uniform samples give E[F] = 0; samples drawn from a Porter-Thomas truth
 * give E[F] = 2^n sum_j P(j)^2 - 1, which tends to 1.
 * standard_error is the sample standard deviation of 2^n truth[s] over sqrt(N).
 */
XebResult xeb(const SampleSet& samples, const ExplicitDistribution& truth);

/// Literal form 2 * sum_{s in samples} truth[s] - 1 (no 2^n/N normalization).
double xeb_raw(const SampleSet& samples, const ExplicitDistribution& truth);

/// Expected fidelity 2^n sum_j q(j) p(j) - 1 of a generator q against truth p.
double expected_xeb(const ExplicitDistribution& generator, const ExplicitDistribution& truth);

struct Chi2Result {
  double statistic = 0.0;
  int degrees_of_freedom = 1;
  double p_value = 1.0;
};

/**
 * Pearson goodness of fit: sum over bins with p_i > 0 of (x_i - N p_i)^2 /
 * (N p_i); p-value Q(dof/2, chi2/2) with dof = (#bins with p_i > 0) - 1.
 * Throws ValidationError for a count in a bin with p_i = 0, a bin-count
 * mismatch, or N = 0.
 */
Chi2Result chi2_test(std::span<const std::uint64_t> observed, const ExplicitDistribution& null);
Chi2Result chi2_test(const SampleSet& samples, const ExplicitDistribution& null);

/// Regularized lower / upper incomplete gamma functions P(a, x), Q(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Shannon entropy in nats, -sum_{p > 0} p ln p.
double entropy(const ExplicitDistribution& dist);
/// n ln 2 - 1 + gamma: entropy of a Porter-Thomas profile over n bits.
double pt_reference_entropy(int n);

/// Raw L1 sum sum_j |a_j - b_j|; total variation is half of it.
double l1_distance(const ExplicitDistribution& a, const ExplicitDistribution& b);
double total_variation(const ExplicitDistribution& a, const ExplicitDistribution& b);

/// P(target = 1 | conditioning bits = assignment). Bit k of `assignment` is
/// the value of conditioning[k]. Undefined entries have probability nullopt.
struct ConditionalEntry {
  int order = 1;
  int target = 0;
  std::vector<int> conditioning;
  std::uint32_t assignment = 0;
  std::optional<double> probability;
};

struct ConditionalReport {
  int n = 0;
  int max_order = 0;
  std::vector<ConditionalEntry> entries;
  /// max |P - 1/2| over defined entries, indexed by order - 1.
  std::vector<double> max_deviation;

  double deviation(int order) const { return max_deviation.at(static_cast<std::size_t>(order - 1)); }
};

/// Events with probability at or below this are treated as impossible.
inline constexpr double kConditionalEventFloor = 1e-14;

/**
 * Every (target, conditioning set, assignment) for conditioning sets of size
 * 1..max_order (max_order <= 3, and n <= 20 when max_order is 3). Marginals
 * come from one Walsh-Hadamard transform of the distribution.
 */
ConditionalReport conditional_report(const ExplicitDistribution& dist, int max_order);

/// In-place unnormalized Walsh-Hadamard transform: f[T] = sum_x f[x] (-1)^{|x & T|}.
void walsh_hadamard(std::span<double> values);

struct ExpFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
  bool degenerate = false;
};

/**
 * Least-squares fit of y = a exp(b x) + c. (a, c) are solved in closed form
 * for each b; b is located by a 401-point scan of [-20/span, 20/span]
 * (span = max x - min x) followed by golden-section refinement between the
 * neighbours of the best scan point. Constant y returns (0, 0, mean) with
 * `degenerate` set. Requires >= 4 points with distinct x.
 */
ExpFit fit_exponential(std::span<const std::pair<double, double>> points);

void write_xeb_csv(std::ostream& out, const XebResult& r);
void write_chi2_csv(std::ostream& out, const Chi2Result& r);
void write_conditional_csv(std::ostream& out, const ConditionalReport& r);

}  // namespace qsl
