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
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/error.hpp"
#include "qsl/prng.hpp"

namespace qsl {

using Complex = std::complex<double>;

/// Row-major 2x2 matrix.
using Matrix2 = std::array<Complex, 4>;
/// Row-major 4x4 matrix over the local basis r = b(q_lo) + 2*b(q_hi) of a pair
/// q_lo < q_hi.
using Matrix4 = std::array<Complex, 16>;

enum class GateKind { kSqrtX, kSqrtY, kSqrtW, kU1, kCZ, kFSim };

inline constexpr double kDefaultFSimTheta = 1.5707963267948966;  // pi/2
inline constexpr double kDefaultFSimPhi = 0.5235987755982988;    // pi/6

struct Gate {
  GateKind kind = GateKind::kSqrtX;
  double theta = 0.0;  // U1 and FSim only
  double phi = 0.0;    // U1 and FSim only

  static Gate sqrt_x() { return {GateKind::kSqrtX}; }
  static Gate sqrt_y() { return {GateKind::kSqrtY}; }
  static Gate sqrt_w() { return {GateKind::kSqrtW}; }
  static Gate u1(double theta, double phi) { return {GateKind::kU1, theta, phi}; }
  static Gate cz() { return {GateKind::kCZ}; }
  static Gate fsim(double theta = kDefaultFSimTheta, double phi = kDefaultFSimPhi) {
    return {GateKind::kFSim, theta, phi};
  }

  int arity() const { return (kind == GateKind::kCZ || kind == GateKind::kFSim) ? 2 : 1; }
  std::string name() const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// exp(-i (theta/2) (cos(phi) X + sin(phi) Y)).
Matrix2 u1_matrix(double theta, double phi);

/// Matrix of a single-qubit gate; throws ValidationError for two-qubit kinds.
Matrix2 single_qubit_matrix(const Gate& g);
/// Matrix of a two-qubit gate; throws ValidationError for single-qubit kinds.
/// FSim: identity on |00>, [[cos t, -i sin t], [-i sin t, cos t]] on
/// {|01>, |10>}, e^{-i phi} on |11>.
Matrix4 two_qubit_matrix(const Gate& g);

/// Row-major matrix of either arity (4 or 16 entries).
std::vector<Complex> gate_matrix(const Gate& g);

struct PairGate {
  int i = 0;
  int j = 0;
  Gate gate = Gate::cz();

  friend bool operator==(const PairGate&, const PairGate&) = default;
};

/// One clock cycle: a single-qubit gate on every qubit, then a layer of
/// disjoint two-qubit gates.
struct Cycle {
  std::vector<Gate> singles;
  std::vector<PairGate> pairs;

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Depth = number of cycles. Qubits are numbered 0..n-1 with qubit 0 the
/// least significant bit of a basis index.
struct Circuit {
  int n = 0;
  std::vector<Cycle> cycles;
  /// Two-qubit gate used by the generator; serialized once at the top level.
  Gate two_qubit = Gate::fsim();
  std::optional<std::uint64_t> seed;

  int depth() const { return static_cast<int>(cycles.size()); }
  /// Checks arities, qubit ranges, i < j and per-cycle disjointness.
  void validate() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

using QubitPair = std::pair<int, int>;

/**
 * Coupler schedule: cycle c uses layers[c % layers.size()]. Built-ins:
 *  - linear chain, pattern "AB": A = (0,1),(2,3),...; B = (1,2),(3,4),...
 *  - rows x cols grid with qubit r*cols + c and phases
 *    A = horizontal couplers starting at even columns,
 *    B = horizontal couplers starting at odd columns,
 *    C = vertical couplers starting at even rows,
 *    D = vertical couplers starting at odd rows;
 *    the default pattern is "ABCDCDAB".
 */
struct ConnectivitySpec {
  std::string name;
  std::vector<std::vector<QubitPair>> layers;

  static ConnectivitySpec linear_chain(int n, std::string_view pattern = "AB");
  static ConnectivitySpec grid(int rows, int cols, std::string_view pattern = "ABCDCDAB");
  /// Parses "linear", "linear:PATTERN", "grid:RxC" or "grid:RxC:PATTERN".
  static ConnectivitySpec parse(std::string_view text, int n);

  /// Throws ValidationError unless every pair is in range, i < j, and layers
  /// are internally disjoint; also rejects an all-empty schedule.
  void validate(int n) const;
};

struct RandomCircuitOptions {
  /// Forbid the same single-qubit gate on a qubit in consecutive cycles.
  bool no_consecutive_repeat = false;
};

/// Singles are drawn uniformly from {SqrtX, SqrtY, SqrtW}, one per qubit per
/// cycle, in qubit order; pairs follow the connectivity schedule.
Circuit random_circuit(int n, int depth, const ConnectivitySpec& connectivity,
                       const Gate& two_qubit, std::uint64_t seed,
                       const RandomCircuitOptions& options = {});

/// Variant drawing from a caller-owned generator; records no seed.
Circuit random_circuit(int n, int depth, const ConnectivitySpec& connectivity,
                       const Gate& two_qubit, Prng& rng,
                       const RandomCircuitOptions& options = {});

// Circuit file:
// {"version":1,"n_qubits":n,"seed":s|null,
//  "two_qubit":{"kind":"fsim"|"cz","theta":t,"phi":p},
//  "cycles":[{"singles":["sqrt_x"|"sqrt_y"|"sqrt_w"|{"kind":"u1",...},...],
//             "pairs":[[i,j],...]}]}
// A pair may carry a third element {"kind",...} when its gate differs from
// the top-level two_qubit gate.
std::string serialize_circuit(const Circuit& c);
/// Throws ParseError naming the offending field or token.
Circuit parse_circuit(std::string_view text);

Circuit read_circuit_file(const std::string& path);
void write_circuit_file(const std::string& path, const Circuit& c);

}  // namespace qsl
