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
#include <span>
#include <string>
#include <vector>

#include "qsl/circuit.hpp"
#include "qsl/core.hpp"

namespace qsl {

/// Full Schrodinger state: 2^n amplitudes stored as interleaved (re, im)
/// doubles, qubit q at stride 2^q.
class StateVector {
 public:
  /// |0...0>; checks n against `cap`.
  explicit StateVector(int n, const ResourceCap& cap = {});
  StateVector(int n, std::vector<Complex> amps);

  /// Uniform superposition H^n |0...0>.
  static StateVector plus_state(int n, const ResourceCap& cap = {});
  static StateVector basis_state(int n, std::uint64_t index, const ResourceCap& cap = {});

  int n() const { return n_; }
  std::uint64_t size() const { return amps_.size(); }
  std::span<const Complex> amps() const { return amps_; }
  std::span<Complex> amps() { return amps_; }
  Complex operator[](std::uint64_t i) const { return amps_[i]; }

  double norm_squared() const;

 private:
  int n_;
  std::vector<Complex> amps_;
};

struct SimulatorOptions {
  int threads = 1;
  ResourceCap cap{};
};

/// For every index pair (l, l + 2^q) with bit q of l clear, replaces the pair
/// by m * pair. Throws ValidationError if q is out of range.
void apply_single_qubit(StateVector& state, int q, const Matrix2& m, int threads = 1);

/**
 * Applies a 4x4 matrix whose local basis is r = b(q1) + 2*b(q2). For q1 < q2
 * this is the stride-loop kernel over groups
 * (l, l + 2^q1, l + 2^q2, l + 2^q1 + 2^q2); q1 > q2 is handled by permuting
 * the matrix. Throws ValidationError if q1 == q2 or either is out of range.
 */
void apply_two_qubit(StateVector& state, int q1, int q2, const Matrix4& m, int threads = 1);

/// Applies every cycle in order: the single-qubit layer, then the pairs.
void apply_circuit(StateVector& state, const Circuit& c, int threads = 1);

/// Runs `c` on |0...0>.
StateVector simulate(const Circuit& c, const SimulatorOptions& options = {});

/// Born-rule probabilities |amp|^2.
ExplicitDistribution probabilities(const StateVector& state, int threads = 1);

ExplicitDistribution output_distribution(const Circuit& c, const SimulatorOptions& options = {});

/// Uniform-admixture noise model for imperfect hardware.
struct NoiseModel {
  double fidelity_f = 1.0;

  explicit NoiseModel(double f);
};

/// f * P + (1 - f) * Uniform.
ExplicitDistribution apply_noise(const ExplicitDistribution& dist, const NoiseModel& noise);

// Distribution file (QSLD): magic "QSLD", 1-byte version (1), 1-byte n, then
// 2^n little-endian IEEE-754 doubles. CSV alternative for n <= 16: header
// "index,probability" and one row per index.
void write_distribution(std::ostream& out, const ExplicitDistribution& dist);
void write_distribution_csv(std::ostream& out, const ExplicitDistribution& dist);
/// Reads either format (detected by the magic bytes).
ExplicitDistribution read_distribution(std::istream& in);

void write_distribution_file(const std::string& path, const ExplicitDistribution& dist);
void write_distribution_csv_file(const std::string& path, const ExplicitDistribution& dist);
ExplicitDistribution read_distribution_file(const std::string& path);

}  // namespace qsl
