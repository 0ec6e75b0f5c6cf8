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

#include "qsl/simulator.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qsl/parallel.hpp"

namespace qsl {

namespace {

// Below this many amplitudes a gate pass runs on the calling thread.
constexpr std::uint64_t kParallelThreshold = std::uint64_t{1} << 14;

int effective_threads(std::uint64_t size, int threads) {
  return size < kParallelThreshold ? 1 : threads;
}

// Explicit real arithmetic keeps the kernels free of the NaN-recovery path of
// std::complex multiplication.
struct C {
  double re, im;
};

inline C mul(C a, C b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline C add(C a, C b) { return {a.re + b.re, a.im + b.im}; }
inline C load(const Complex& z) { return {z.real(), z.imag()}; }
inline void store(Complex& z, C v) { z = Complex{v.re, v.im}; }

// Index with a zero bit inserted at position `bit`.
inline std::uint64_t insert_zero(std::uint64_t i, int bit) {
  const std::uint64_t low = i & ((std::uint64_t{1} << bit) - 1);
  return ((i >> bit) << (bit + 1)) | low;
}

bool is_diagonal(const Matrix4& m) {
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) {
      if (r != s && m[r * 4 + s] != Complex{0.0, 0.0}) return false;
    }
  }
  return true;
}

}  // namespace

StateVector::StateVector(int n, const ResourceCap& cap) : n_(n) {
  if (n < 1) throw ValidationError("state vector needs at least one qubit");
  cap.check(n);
  amps_.assign(std::uint64_t{1} << n, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector::StateVector(int n, std::vector<Complex> amps) : n_(n), amps_(std::move(amps)) {
  if (n < 1 || n > kMaxQubits) throw ValidationError("state vector width outside [1, 30]");
  if (amps_.size() != (std::uint64_t{1} << n)) {
    throw ValidationError("state vector over " + std::to_string(n) + " qubits needs 2^n amplitudes");
  }
}

StateVector StateVector::plus_state(int n, const ResourceCap& cap) {
  StateVector s(n, cap);
  const double a = std::pow(2.0, -0.5 * n);
  for (auto& z : s.amps_) z = a;
  return s;
}

StateVector StateVector::basis_state(int n, std::uint64_t index, const ResourceCap& cap) {
  StateVector s(n, cap);
  if (index >= s.size()) throw ValidationError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& z : amps_) acc += std::norm(z);
  return acc;
}

void apply_single_qubit(StateVector& state, int q, const Matrix2& m, int threads) {
  if (q < 0 || q >= state.n()) {
    throw ValidationError("qubit index " + std::to_string(q) + " out of range for n = " +
                          std::to_string(state.n()));
  }
  Complex* v = state.amps().data();
  const std::uint64_t stride = std::uint64_t{1} << q;
  const C m00 = load(m[0]), m01 = load(m[1]), m10 = load(m[2]), m11 = load(m[3]);
  const std::uint64_t groups = state.size() / 2;
  parallel_for(groups, effective_threads(state.size(), threads),
               [&](std::uint64_t begin, std::uint64_t end) {
                 for (std::uint64_t g = begin; g < end; ++g) {
                   const std::uint64_t l = insert_zero(g, q);
                   const C a0 = load(v[l]);
                   const C a1 = load(v[l + stride]);
                   store(v[l], add(mul(m00, a0), mul(m01, a1)));
                   store(v[l + stride], add(mul(m10, a0), mul(m11, a1)));
                 }
               });
}

void apply_two_qubit(StateVector& state, int q1, int q2, const Matrix4& m, int threads) {
  const int n = state.n();
  if (q1 < 0 || q1 >= n || q2 < 0 || q2 >= n) {
    throw ValidationError("qubit pair (" + std::to_string(q1) + "," + std::to_string(q2) +
                          ") out of range for n = " + std::to_string(n));
  }
  if (q1 == q2) throw ValidationError("two-qubit gate on identical qubits " + std::to_string(q1));
  if (q1 > q2) {
    // Swap the roles of the two local bits: r = b0 + 2 b1 -> b1 + 2 b0.
    static constexpr int kSwap[4] = {0, 2, 1, 3};
    Matrix4 p{};
    for (int r = 0; r < 4; ++r) {
      for (int s = 0; s < 4; ++s) p[kSwap[r] * 4 + kSwap[s]] = m[r * 4 + s];
    }
    apply_two_qubit(state, q2, q1, p, threads);
    return;
  }

  Complex* v = state.amps().data();
  const std::uint64_t s1 = std::uint64_t{1} << q1;
  const std::uint64_t s2 = std::uint64_t{1} << q2;
  const std::uint64_t groups = state.size() / 4;
  const int workers = effective_threads(state.size(), threads);

  // Group g enumerates the same base indices l = i + j + k as the nested
  // loops over qubits above q2, between q1 and q2, and below q1.
  if (is_diagonal(m)) {
    const C d0 = load(m[0]), d1 = load(m[5]), d2 = load(m[10]), d3 = load(m[15]);
    parallel_for(groups, workers, [&](std::uint64_t begin, std::uint64_t end) {
      for (std::uint64_t g = begin; g < end; ++g) {
        const std::uint64_t l = insert_zero(insert_zero(g, q1), q2);
        store(v[l], mul(d0, load(v[l])));
        store(v[l + s1], mul(d1, load(v[l + s1])));
        store(v[l + s2], mul(d2, load(v[l + s2])));
        store(v[l + s1 + s2], mul(d3, load(v[l + s1 + s2])));
      }
    });
    return;
  }

  C u[16];
  for (int k = 0; k < 16; ++k) u[k] = load(m[k]);
  parallel_for(groups, workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t g = begin; g < end; ++g) {
      const std::uint64_t l = insert_zero(insert_zero(g, q1), q2);
      const std::uint64_t idx[4] = {l, l + s1, l + s2, l + s1 + s2};
      C v0[4];
      for (int s = 0; s < 4; ++s) v0[s] = load(v[idx[s]]);
      for (int r = 0; r < 4; ++r) {
        C acc{0.0, 0.0};
        for (int s = 0; s < 4; ++s) acc = add(acc, mul(u[r * 4 + s], v0[s]));
        store(v[idx[r]], acc);
      }
    }
  });
}

void apply_circuit(StateVector& state, const Circuit& c, int threads) {
  c.validate();
  if (c.n != state.n()) throw ValidationError("circuit and state widths differ");
  for (const auto& cyc : c.cycles) {
    for (int q = 0; q < c.n; ++q) {
      apply_single_qubit(state, q, single_qubit_matrix(cyc.singles[q]), threads);
    }
    for (const auto& p : cyc.pairs) {
      apply_two_qubit(state, p.i, p.j, two_qubit_matrix(p.gate), threads);
    }
  }
}

StateVector simulate(const Circuit& c, const SimulatorOptions& options) {
  c.validate();
  StateVector state(c.n, options.cap);
  apply_circuit(state, c, resolve_threads(options.threads));
  return state;
}

ExplicitDistribution probabilities(const StateVector& state, int threads) {
  std::vector<double> probs(state.size());
  const auto amps = state.amps();
  parallel_for(state.size(), effective_threads(state.size(), threads),
               [&](std::uint64_t begin, std::uint64_t end) {
                 for (std::uint64_t i = begin; i < end; ++i) probs[i] = std::norm(amps[i]);
               });
  double sum = 0.0;
  for (double p : probs) sum += p;
  const double drift = std::abs(sum - 1.0);
  if (drift > 1e-6) {
    throw ValidationError("state norm drifted to " + std::to_string(sum));
  }
  if (drift > ExplicitDistribution::kNormTolerance) {
    for (double& p : probs) p /= sum;
  }
  return {state.n(), std::move(probs)};
}

ExplicitDistribution output_distribution(const Circuit& c, const SimulatorOptions& options) {
  return probabilities(simulate(c, options), resolve_threads(options.threads));
}

NoiseModel::NoiseModel(double f) : fidelity_f(f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw ValidationError("noise fidelity must lie in [0, 1], got " + std::to_string(f));
  }
}

ExplicitDistribution apply_noise(const ExplicitDistribution& dist, const NoiseModel& noise) {
  const double f = noise.fidelity_f;
  const double floor = (1.0 - f) / static_cast<double>(dist.size());
  std::vector<double> probs(dist.size());
  for (std::uint64_t i = 0; i < dist.size(); ++i) probs[i] = f * dist[i] + floor;
  return {dist.n(), std::move(probs)};
}

}  // namespace qsl
