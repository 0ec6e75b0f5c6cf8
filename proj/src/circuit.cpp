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

#include "qsl/circuit.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace qsl {

std::string Gate::name() const {
  switch (kind) {
    case GateKind::kSqrtX: return "sqrt_x";
    case GateKind::kSqrtY: return "sqrt_y";
    case GateKind::kSqrtW: return "sqrt_w";
    case GateKind::kU1: return "u1";
    case GateKind::kCZ: return "cz";
    case GateKind::kFSim: return "fsim";
  }
  return "?";
}

Matrix2 u1_matrix(double theta, double phi) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const Complex minus_i{0.0, -1.0};
  return {Complex{c, 0.0}, minus_i * s * std::polar(1.0, -phi),
          minus_i * s * std::polar(1.0, phi), Complex{c, 0.0}};
}

Matrix2 single_qubit_matrix(const Gate& g) {
  constexpr double kHalfPi = std::numbers::pi / 2;
  switch (g.kind) {
    case GateKind::kSqrtX: return u1_matrix(kHalfPi, 0.0);
    case GateKind::kSqrtY: return u1_matrix(kHalfPi, kHalfPi);
    case GateKind::kSqrtW: return u1_matrix(kHalfPi, std::numbers::pi / 4);
    case GateKind::kU1: return u1_matrix(g.theta, g.phi);
    default: break;
  }
  throw ValidationError("gate '" + g.name() + "' is not a single-qubit gate");
}

Matrix4 two_qubit_matrix(const Gate& g) {
  Matrix4 m{};
  switch (g.kind) {
    case GateKind::kCZ:
      m[0] = m[5] = m[10] = 1.0;
      m[15] = -1.0;
      return m;
    case GateKind::kFSim: {
      const double c = std::cos(g.theta);
      const Complex mis{0.0, -std::sin(g.theta)};
      m[0] = 1.0;
      m[5] = c;
      m[6] = mis;
      m[9] = mis;
      m[10] = c;
      m[15] = std::polar(1.0, -g.phi);
      return m;
    }
    default: break;
  }
  throw ValidationError("gate '" + g.name() + "' is not a two-qubit gate");
}

std::vector<Complex> gate_matrix(const Gate& g) {
  if (g.arity() == 1) {
    const auto m = single_qubit_matrix(g);
    return {m.begin(), m.end()};
  }
  const auto m = two_qubit_matrix(g);
  return {m.begin(), m.end()};
}

void Circuit::validate() const {
  if (n < 1 || n > 30) throw ValidationError("circuit qubit count outside [1, 30]");
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& cyc = cycles[c];
    const std::string where = "cycle " + std::to_string(c);
    if (cyc.singles.size() != static_cast<std::size_t>(n)) {
      throw ValidationError(where + ": expected " + std::to_string(n) +
                            " single-qubit gates, got " + std::to_string(cyc.singles.size()));
    }
    for (const auto& g : cyc.singles) {
      if (g.arity() != 1) throw ValidationError(where + ": two-qubit gate in the single layer");
    }
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (const auto& p : cyc.pairs) {
      const std::string pw =
          where + ", pair (" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
      if (p.i < 0 || p.j >= n || p.i >= p.j) {
        throw ValidationError(pw + ": requires 0 <= i < j < n");
      }
      if (p.gate.arity() != 2) throw ValidationError(pw + ": not a two-qubit gate");
      if (used[p.i] || used[p.j]) throw ValidationError(pw + ": qubit already used this cycle");
      used[p.i] = used[p.j] = true;
    }
  }
}

namespace {

std::vector<QubitPair> chain_layer(int n, int offset) {
  std::vector<QubitPair> layer;
  for (int q = offset; q + 1 < n; q += 2) layer.emplace_back(q, q + 1);
  return layer;
}

std::vector<QubitPair> grid_layer(int rows, int cols, char phase) {
  std::vector<QubitPair> layer;
  const auto id = [cols](int r, int c) { return r * cols + c; };
  switch (phase) {
    case 'A':
    case 'B': {
      const int start = phase == 'A' ? 0 : 1;
      for (int r = 0; r < rows; ++r) {
        for (int c = start; c + 1 < cols; c += 2) layer.emplace_back(id(r, c), id(r, c + 1));
      }
      break;
    }
    case 'C':
    case 'D': {
      const int start = phase == 'C' ? 0 : 1;
      for (int r = start; r + 1 < rows; r += 2) {
        for (int c = 0; c < cols; ++c) layer.emplace_back(id(r, c), id(r + 1, c));
      }
      break;
    }
    default:
      throw ValidationError(std::string("unknown grid phase '") + phase + "'");
  }
  return layer;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

ConnectivitySpec ConnectivitySpec::linear_chain(int n, std::string_view pattern) {
  if (n < 2) throw ValidationError("linear chain needs at least 2 qubits");
  ConnectivitySpec spec;
  spec.name = "linear:" + std::string(pattern);
  for (char phase : pattern) {
    if (phase != 'A' && phase != 'B') {
      throw ValidationError(std::string("linear chain phase must be A or B, got '") + phase + "'");
    }
    spec.layers.push_back(chain_layer(n, phase == 'A' ? 0 : 1));
  }
  return spec;
}

ConnectivitySpec ConnectivitySpec::grid(int rows, int cols, std::string_view pattern) {
  if (rows < 1 || cols < 1 || rows * cols < 2) throw ValidationError("grid needs >= 2 qubits");
  ConnectivitySpec spec;
  spec.name = "grid:" + std::to_string(rows) + "x" + std::to_string(cols) + ":" +
              std::string(pattern);
  for (char phase : pattern) spec.layers.push_back(grid_layer(rows, cols, phase));
  return spec;
}

ConnectivitySpec ConnectivitySpec::parse(std::string_view text, int n) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  if (head == "linear") return linear_chain(n, rest.empty() ? "AB" : rest);
  if (head == "grid") {
    const auto x = rest.find('x');
    if (x == std::string_view::npos) throw ValidationError("grid spec must be grid:RxC[:PATTERN]");
    const auto colon2 = rest.find(':', x);
    const int rows = parse_int(rest.substr(0, x), "grid rows");
    const int cols = parse_int(rest.substr(x + 1, colon2 == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : colon2 - x - 1),
                               "grid columns");
    if (rows * cols != n) {
      throw ValidationError("grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " does not have " + std::to_string(n) + " qubits");
    }
    const std::string_view pattern =
        colon2 == std::string_view::npos ? "ABCDCDAB" : rest.substr(colon2 + 1);
    return grid(rows, cols, pattern);
  }
  throw ValidationError("unknown connectivity '" + std::string(text) + "'");
}

void ConnectivitySpec::validate(int n) const {
  bool any = false;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (const auto& [i, j] : layers[l]) {
      if (i < 0 || j >= n || i >= j) {
        throw ValidationError("connectivity layer " + std::to_string(l) + ": pair (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              ") requires 0 <= i < j < n");
      }
      if (used[i] || used[j]) {
        throw ValidationError("connectivity layer " + std::to_string(l) +
                              ": qubit used twice");
      }
      used[i] = used[j] = true;
      any = true;
    }
  }
  if (!any) throw ValidationError("connectivity has no couplers");
}

Circuit random_circuit(int n, int depth, const ConnectivitySpec& connectivity,
                       const Gate& two_qubit, Prng& rng, const RandomCircuitOptions& options) {
  if (n < 2) throw ValidationError("random circuits need at least 2 qubits");
  if (depth < 0) throw ValidationError("depth must be nonnegative");
  if (two_qubit.arity() != 2) throw ValidationError("two_qubit must be CZ or FSim");
  connectivity.validate(n);

  static constexpr GateKind kSet[3] = {GateKind::kSqrtX, GateKind::kSqrtY, GateKind::kSqrtW};
  Circuit c;
  c.n = n;
  c.two_qubit = two_qubit;
  c.cycles.reserve(static_cast<std::size_t>(depth));
  for (int d = 0; d < depth; ++d) {
    Cycle cyc;
    cyc.singles.reserve(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      GateKind kind = kSet[rng.below(3)];
      if (options.no_consecutive_repeat && d > 0) {
        const GateKind prev = c.cycles.back().singles[q].kind;
        if (kind == prev) {
          // Pick uniformly among the two remaining gates.
          const int prev_idx = prev == GateKind::kSqrtX ? 0 : prev == GateKind::kSqrtY ? 1 : 2;
          kind = kSet[(prev_idx + 1 + static_cast<int>(rng.below(2))) % 3];
        }
      }
      cyc.singles.push_back(Gate{kind});
    }
    const auto& layer = connectivity.layers[static_cast<std::size_t>(d) % connectivity.layers.size()];
    for (const auto& [i, j] : layer) cyc.pairs.push_back({i, j, two_qubit});
    c.cycles.push_back(std::move(cyc));
  }
  return c;
}

Circuit random_circuit(int n, int depth, const ConnectivitySpec& connectivity,
                       const Gate& two_qubit, std::uint64_t seed,
                       const RandomCircuitOptions& options) {
  Prng rng(seed);
  Circuit c = random_circuit(n, depth, connectivity, two_qubit, rng, options);
  c.seed = seed;
  return c;
}

}  // namespace qsl
