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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsl/circuit.hpp"
#include "qsl/core.hpp"

namespace qsl {

/**
 * Domain of the physical units in the energy function.
 *
 * kSpin: x = 1 - 2 z, so bit 0 maps to +1. Gate updates are exact and the
 * network reproduces the simulator amplitudes up to nothing (log_scale is
 * tracked).
 *
 * kBit: x = z in {0, 1}, with the literal closed-form weights
 * (W' = -W e^{i phi}, new unit 1/2 arccosh(1/tan theta), and so on). Kept for
 * comparison; it does not reproduce the simulator.
 */
enum class DbmConvention { kSpin, kBit };

std::string_view convention_name(DbmConvention c);
DbmConvention parse_convention(std::string_view text);

/// Maximum number of latent units (hidden + deep) for exact evaluation.
inline constexpr int kDbmLatentBound = 24;

/**
 * Three-layer complex Boltzmann network:
 *   Psi(z) = exp(log_scale) * sum_{h, d in {-1,1}} exp(E(x(z), h, d)),
 *   E = sum w_i x_i + sum b_j h_j + sum b'_k d_k
 *     + sum W_ij x_i h_j + sum W'_jk h_j d_k + sum W''_il x_i d_l.
 * Edges are keyed by (layer index, layer index). Weights that drop to zero
 * keep their edge, so edge counts never decrease.
 */
struct DbmNetwork {
  int n_physical = 0;
  DbmConvention convention = DbmConvention::kSpin;
  std::vector<Complex> physical_bias;
  std::vector<Complex> hidden_bias;
  std::vector<Complex> deep_bias;
  std::map<std::pair<int, int>, Complex> edges_ph;
  std::map<std::pair<int, int>, Complex> edges_hd;
  std::map<std::pair<int, int>, Complex> edges_pd;
  Complex log_scale{0.0, 0.0};

  int hidden_count() const { return static_cast<int>(hidden_bias.size()); }
  int deep_count() const { return static_cast<int>(deep_bias.size()); }
  std::uint64_t edge_count() const { return edges_ph.size() + edges_hd.size() + edges_pd.size(); }

  /// Throws DomainError on any non-finite weight.
  void check_finite() const;
};

/**
 * n physical and n hidden units with W_lj = delta_lj and zero hidden biases.
 * Every basis string gets the same amplitude (the state H^n |0...0>): in the
 * bit convention a physical bias -ln cosh 1 evens out z = 0 and z = 1. The
 * spin convention also fixes log_scale so the state is normalized.
 */
DbmNetwork dbm_init(int n, DbmConvention convention = DbmConvention::kSpin);

/// General single-qubit gate. kSpin needs every entry of m nonzero and
/// throws DomainError otherwise; kBit accepts only U1-type gates.
void dbm_apply_single(DbmNetwork& net, int q, const Matrix2& m);
/// U1(theta, phi), the rotation used by SqrtX / SqrtY / SqrtW.
void dbm_apply_single(DbmNetwork& net, int q, double theta, double phi);

/// Multiplies amplitudes by exp(-i psi x_i x_j) through one hidden unit with
/// weights (u, sign(psi) u), u = 1/2 arccosh(exp(-2 i |psi|)).
void dbm_apply_zz(DbmNetwork& net, int i, int j, double psi);
/// Controlled-Z, written as a ZZ term plus physical biases.
void dbm_apply_cz(DbmNetwork& net, int i, int j);
/// fSim(theta, phi): one deep unit and three hidden units.
void dbm_apply_fsim(DbmNetwork& net, int l, int m, double theta, double phi);

/// Dispatches a circuit gate (single or pair).
void dbm_apply_gate(DbmNetwork& net, const Gate& g, int q0, int q1 = -1);

/// Exact amplitude; hidden units are summed in closed form, deep units by
/// enumeration. Throws ResourceError past kDbmLatentBound latent units.
Complex dbm_amplitude(const DbmNetwork& net, BasisIndex z);
std::vector<Complex> dbm_amplitudes(const DbmNetwork& net, int threads = 1);
/// Normalized |Psi|^2 over all 2^n strings (n <= 20).
ExplicitDistribution dbm_distribution(const DbmNetwork& net, int threads = 1);

struct DbmSizeRow {
  int cycle = 0;
  std::uint64_t hidden = 0;
  std::uint64_t deep = 0;
  /// Absent for the counting recurrence, which does not track edges.
  std::optional<std::uint64_t> edges;
};

struct DbmSizeReport {
  std::uint64_t hidden_count = 0;
  std::uint64_t deep_count = 0;
  std::optional<std::uint64_t> edge_count;
  std::vector<DbmSizeRow> history;  // row 0 is the initial network

  std::uint64_t latent_count() const { return hidden_count + deep_count; }
};

/// Per cycle: single-qubit layer doubles hidden and adds n deep; the
/// two-qubit layer adds n deep and 3n hidden.
DbmSizeReport dbm_size_recurrence(int n, int depth);

/// Recounts a network.
DbmSizeReport dbm_size(const DbmNetwork& net);

struct DbmBuild {
  DbmNetwork network;
  DbmSizeReport report;
};

/// Applies every gate of the circuit to dbm_init(c.n) and records counts
/// after each cycle.
DbmBuild dbm_build(const Circuit& c, DbmConvention convention = DbmConvention::kSpin);

std::string dbm_to_json(const DbmNetwork& net);
DbmNetwork dbm_from_json(std::string_view text);
/// cycle,hidden,deep,edges (edges empty when unknown).
void write_dbm_size_csv(std::ostream& out, const DbmSizeReport& report);

}  // namespace qsl
