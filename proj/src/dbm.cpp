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

#include "qsl/dbm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qsl/parallel.hpp"

namespace qsl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
// Below this magnitude a kernel entry counts as zero.
constexpr double kZeroTol = 1e-12;

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

void check_qubit(const DbmNetwork& net, int q, const char* what) {
  if (q < 0 || q >= net.n_physical) {
    throw ValidationError(std::string(what) + ": qubit " + std::to_string(q) + " out of range for n = " +
                          std::to_string(net.n_physical));
  }
}

void check_pair(const DbmNetwork& net, int i, int j, const char* what) {
  check_qubit(net, i, what);
  check_qubit(net, j, what);
  if (i == j) throw ValidationError(std::string(what) + ": both qubits are " + std::to_string(i));
}

int add_hidden(DbmNetwork& net, Complex bias = {}) {
  net.hidden_bias.push_back(bias);
  return net.hidden_count() - 1;
}

int add_deep(DbmNetwork& net, Complex bias = {}) {
  net.deep_bias.push_back(bias);
  return net.deep_count() - 1;
}

void add_edge(std::map<std::pair<int, int>, Complex>& edges, int a, int b, Complex w) {
  edges[{a, b}] += w;
}

/// Hidden units currently coupled to physical unit q, with their weights.
std::vector<std::pair<int, Complex>> hidden_of(const DbmNetwork& net, int q) {
  std::vector<std::pair<int, Complex>> out;
  for (auto it = net.edges_ph.lower_bound({q, 0}); it != net.edges_ph.end() && it->first.first == q; ++it) {
    out.emplace_back(it->first.second, it->second);
  }
  return out;
}

/// Hidden unit with weight u on both endpoints; 2 cosh(u (x + y)) equals
/// 2 cosh(2u) when x = y and 2 otherwise (spins).
void add_bridge_pp(DbmNetwork& net, int pa, int pb, Complex u) {
  const int h = add_hidden(net);
  add_edge(net.edges_ph, pa, h, u);
  add_edge(net.edges_ph, pb, h, u);
}

void add_bridge_pd(DbmNetwork& net, int p, int d, Complex u_p, Complex u_d) {
  const int h = add_hidden(net);
  add_edge(net.edges_ph, p, h, u_p);
  add_edge(net.edges_hd, h, d, u_d);
}

/// exp(a x y) = exp(-a) * 2 cosh(u (x + y)) / 2 with cosh(2u) = exp(2a).
Complex coupling_weight(Complex a) { return 0.5 * std::acosh(std::exp(2.0 * a)); }

Complex require_finite(Complex w, const std::string& what) {
  if (!finite(w)) throw DomainError(what + " is not finite");
  return w;
}

// Spin-convention single-qubit update. The old unit q becomes deep unit d and
// the new q couples to d through K(s, d) = U[bit(s)][bit(d)].
void apply_single_spin(DbmNetwork& net, int q, const Matrix2& u) {
  std::array<Complex, 4> logs{};
  for (int r = 0; r < 4; ++r) {
    if (std::abs(u[static_cast<std::size_t>(r)]) < kZeroTol) {
      throw DomainError("single-qubit update needs every matrix entry nonzero (entry " +
                        std::to_string(r) + " vanishes)");
    }
    logs[static_cast<std::size_t>(r)] = std::log(u[static_cast<std::size_t>(r)]);
  }
  // Index by (s, d) with + -> bit 0.
  const Complex lpp = logs[0], lpm = logs[1], lmp = logs[2], lmm = logs[3];
  const Complex k = (lpp + lpm + lmp + lmm) / 4.0;
  const Complex b = (lpp + lpm - lmp - lmm) / 4.0;
  const Complex c = (lpp - lpm + lmp - lmm) / 4.0;
  const Complex a = (lpp - lpm - lmp + lmm) / 4.0;

  const int d = add_deep(net, net.physical_bias[static_cast<std::size_t>(q)] + c);
  for (auto& [h, w] : hidden_of(net, q)) {
    add_edge(net.edges_hd, h, d, w);
    net.edges_ph[{q, h}] -= w;
  }
  net.physical_bias[static_cast<std::size_t>(q)] = b;
  const Complex uw = require_finite(coupling_weight(a), "single-qubit bridge weight");
  add_bridge_pd(net, q, d, uw, uw);
  net.log_scale += k - a - std::numbers::ln2;
}

// Literal bit-convention rule for U1(theta, phi), half-angle t = theta / 2.
void apply_single_bit(DbmNetwork& net, int q, double theta, double phi) {
  const double t = std::tan(theta / 2);
  if (std::abs(t) < kZeroTol || !std::isfinite(t)) {
    throw DomainError("bit-convention single-qubit weight arccosh(1/tan(theta/2)) diverges at theta = " +
                      std::to_string(theta));
  }
  const int d = add_deep(net, net.physical_bias[static_cast<std::size_t>(q)]);
  net.physical_bias[static_cast<std::size_t>(q)] = 0.0;
  const Complex phase = std::polar(1.0, phi);
  for (auto& [h, w] : hidden_of(net, q)) {
    add_edge(net.edges_hd, h, d, -w * phase);
    net.edges_ph[{q, h}] -= w;
  }
  const Complex uw = require_finite(0.5 * std::acosh(Complex{1.0 / t, 0.0}), "single-qubit weight");
  add_bridge_pd(net, q, d, uw, uw);
}

// Substitutes t_l = d and t_m = x_l + x_m - d into every term that touched
// the old physical l and m (steps 1 and 2 of the fSim construction).
int fsim_rewire(DbmNetwork& net, int l, int m) {
  const auto wl = hidden_of(net, l);
  const auto wm = hidden_of(net, m);
  const Complex bias_l = net.physical_bias[static_cast<std::size_t>(l)];
  const Complex bias_m = net.physical_bias[static_cast<std::size_t>(m)];
  const int d = add_deep(net, bias_l - bias_m);
  for (const auto& [h, w] : wl) {
    add_edge(net.edges_hd, h, d, w);
    net.edges_ph[{l, h}] -= w;
  }
  for (const auto& [h, w] : wm) {
    add_edge(net.edges_hd, h, d, -w);
    add_edge(net.edges_ph, l, h, w);
  }
  net.physical_bias[static_cast<std::size_t>(l)] = bias_m;
  return d;
}

// Zero unless the three spins satisfy x_l + x_m - d = +-1; otherwise sqrt(3).
void fsim_constraint(DbmNetwork& net, int l, int m, int d) {
  const Complex w{0.0, kPi / 6};
  const int h = add_hidden(net);
  add_edge(net.edges_ph, l, h, w);
  add_edge(net.edges_ph, m, h, w);
  add_edge(net.edges_hd, h, d, -w);
  net.log_scale -= 0.5 * std::log(3.0);
}

// Hidden unit forcing spin a (physical) to equal deep d: factor 2 or 0.
void equality_constraint(DbmNetwork& net, int p, int d) {
  const Complex w{0.0, kPi / 4};
  add_bridge_pd(net, p, d, w, -w);
  net.log_scale -= std::numbers::ln2;
}

void apply_fsim_spin(DbmNetwork& net, int l, int m, double theta, double phi) {
  const int d = fsim_rewire(net, l, m);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const Complex half_phase{0.0, -phi / 2};
  const Complex log_swap = std::log(Complex{0.0, -sn});
  const Complex log_stay = std::log(Complex{cs, 0.0});
  Complex beta;
  Complex k;
  if (std::abs(cs) < kZeroTol) {
    equality_constraint(net, m, d);
    beta = (half_phase - log_swap) / 2.0;
    k = half_phase - beta;
  } else if (std::abs(sn) < kZeroTol) {
    equality_constraint(net, l, d);
    beta = (half_phase - log_stay) / 2.0;
    k = log_stay + beta;
  } else {
    const Complex alpha = (log_stay - log_swap) / 2.0;
    beta = (half_phase - log_stay) / 2.0;
    k = half_phase - alpha - beta;
    const Complex ua = require_finite(coupling_weight(alpha), "fSim deep coupling");
    add_bridge_pd(net, l, d, ua, ua);
    net.log_scale -= alpha + std::numbers::ln2;
  }
  const Complex ub = require_finite(coupling_weight(beta), "fSim pair coupling");
  add_bridge_pp(net, l, m, ub);
  net.log_scale += k - beta - std::numbers::ln2;
  fsim_constraint(net, l, m, d);
  const Complex gamma{0.0, phi / 4};
  net.physical_bias[static_cast<std::size_t>(l)] += gamma;
  net.physical_bias[static_cast<std::size_t>(m)] += gamma;
}

void apply_fsim_bit(DbmNetwork& net, int l, int m, double theta, double phi) {
  const double t = std::tan(2 * theta);
  if (std::abs(t) < kZeroTol || !std::isfinite(t)) {
    throw DomainError("bit-convention fSim weight arccosh(1/tan(2 theta)) diverges at theta = " +
                      std::to_string(theta));
  }
  const int d = fsim_rewire(net, l, m);
  const Complex u3 = require_finite(0.5 * std::acosh(Complex{1.0 / t, 0.0}), "fSim step-3 weight");
  add_bridge_pd(net, l, d, u3, u3);
  const Complex u4 =
      require_finite(0.5 * std::acosh(std::cos(2 * theta) * std::polar(1.0, 2 * phi)), "fSim step-4 weight");
  const int h = add_hidden(net);
  add_edge(net.edges_ph, l, h, u4);
  add_edge(net.edges_ph, m, h, -u4);
  fsim_constraint(net, l, m, d);
}

}  // namespace

std::string_view convention_name(DbmConvention c) { return c == DbmConvention::kSpin ? "spin" : "bit"; }

DbmConvention parse_convention(std::string_view text) {
  if (text == "spin") return DbmConvention::kSpin;
  if (text == "bit") return DbmConvention::kBit;
  throw ValidationError("unknown DBM convention '" + std::string(text) + "' (expected spin or bit)");
}

void DbmNetwork::check_finite() const {
  auto check = [](Complex c, const std::string& where) {
    if (!finite(c)) throw DomainError("non-finite DBM weight at " + where);
  };
  for (std::size_t i = 0; i < physical_bias.size(); ++i) check(physical_bias[i], "physical bias " + std::to_string(i));
  for (std::size_t i = 0; i < hidden_bias.size(); ++i) check(hidden_bias[i], "hidden bias " + std::to_string(i));
  for (std::size_t i = 0; i < deep_bias.size(); ++i) check(deep_bias[i], "deep bias " + std::to_string(i));
  for (const auto& [k, w] : edges_ph) check(w, "W(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")");
  for (const auto& [k, w] : edges_hd) check(w, "W'(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")");
  for (const auto& [k, w] : edges_pd) check(w, "W''(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")");
  check(log_scale, "log_scale");
}

DbmNetwork dbm_init(int n, DbmConvention convention) {
  if (n < 1) throw ValidationError("DBM needs at least one physical unit");
  if (n > kMaxQubits) throw ResourceError("DBM limited to " + std::to_string(kMaxQubits) + " physical units");
  DbmNetwork net;
  net.n_physical = n;
  net.convention = convention;
  net.physical_bias.assign(static_cast<std::size_t>(n), Complex{});
  net.hidden_bias.assign(static_cast<std::size_t>(n), Complex{});
  for (int q = 0; q < n; ++q) net.edges_ph[{q, q}] = 1.0;
  if (convention == DbmConvention::kSpin) {
    net.log_scale = -n * std::log(2 * std::cosh(1.0)) - 0.5 * n * std::numbers::ln2;
  } else {
    for (auto& w : net.physical_bias) w = -std::log(std::cosh(1.0));
    net.log_scale = -0.5 * n * std::numbers::ln2 - n * std::numbers::ln2;
  }
  return net;
}

void dbm_apply_single(DbmNetwork& net, int q, const Matrix2& m) {
  check_qubit(net, q, "single-qubit update");
  if (net.convention == DbmConvention::kBit) {
    throw DomainError("the bit convention supports only U1(theta, phi) updates");
  }
  apply_single_spin(net, q, m);
}

void dbm_apply_single(DbmNetwork& net, int q, double theta, double phi) {
  check_qubit(net, q, "single-qubit update");
  if (net.convention == DbmConvention::kBit) {
    apply_single_bit(net, q, theta, phi);
  } else {
    apply_single_spin(net, q, u1_matrix(theta, phi));
  }
}

void dbm_apply_zz(DbmNetwork& net, int i, int j, double psi) {
  check_pair(net, i, j, "ZZ update");
  const double sign = psi < 0 ? -1.0 : 1.0;
  const double mag = std::abs(psi);
  // The bit convention keeps the literal e^{+2i|psi|} argument.
  const double arg = net.convention == DbmConvention::kSpin ? -2 * mag : 2 * mag;
  const Complex u = require_finite(0.5 * std::acosh(std::polar(1.0, arg)), "ZZ weight");
  const int h = add_hidden(net);
  add_edge(net.edges_ph, i, h, u);
  add_edge(net.edges_ph, j, h, sign * u);
  if (net.convention == DbmConvention::kSpin) net.log_scale += Complex{0.0, mag} - std::numbers::ln2;
}

void dbm_apply_cz(DbmNetwork& net, int i, int j) {
  check_pair(net, i, j, "CZ update");
  if (net.convention == DbmConvention::kBit) {
    dbm_apply_zz(net, i, j, kPi / 4);
    return;
  }
  // CZ = e^{i pi/4} exp(-i pi/4 s_i) exp(-i pi/4 s_j) exp(i pi/4 s_i s_j).
  dbm_apply_zz(net, i, j, -kPi / 4);
  net.physical_bias[static_cast<std::size_t>(i)] += Complex{0.0, -kPi / 4};
  net.physical_bias[static_cast<std::size_t>(j)] += Complex{0.0, -kPi / 4};
  net.log_scale += Complex{0.0, kPi / 4};
}

void dbm_apply_fsim(DbmNetwork& net, int l, int m, double theta, double phi) {
  check_pair(net, l, m, "fSim update");
  if (net.convention == DbmConvention::kBit) {
    apply_fsim_bit(net, l, m, theta, phi);
  } else {
    apply_fsim_spin(net, l, m, theta, phi);
  }
}

void dbm_apply_gate(DbmNetwork& net, const Gate& g, int q0, int q1) {
  switch (g.kind) {
    case GateKind::kCZ: dbm_apply_cz(net, q0, q1); return;
    case GateKind::kFSim: dbm_apply_fsim(net, q0, q1, g.theta, g.phi); return;
    case GateKind::kU1: dbm_apply_single(net, q0, g.theta, g.phi); return;
    case GateKind::kSqrtX: dbm_apply_single(net, q0, kPi / 2, 0.0); return;
    case GateKind::kSqrtY: dbm_apply_single(net, q0, kPi / 2, kPi / 2); return;
    case GateKind::kSqrtW: dbm_apply_single(net, q0, kPi / 2, kPi / 4); return;
  }
  throw ValidationError("unsupported gate");
}

namespace {

struct Compiled {
  int n = 0;
  int deep = 0;
  bool spin = true;
  std::vector<Complex> physical_bias;
  std::vector<Complex> hidden_bias;
  std::vector<Complex> deep_bias;
  // Per hidden unit: (physical, w) and (deep, w') lists.
  std::vector<std::vector<std::pair<int, Complex>>> hp;
  std::vector<std::vector<std::pair<int, Complex>>> hd;
  std::vector<std::vector<std::pair<int, Complex>>> pd;  // per deep unit
  Complex scale;
};

Compiled compile(const DbmNetwork& net) {
  const int latent = net.hidden_count() + net.deep_count();
  if (latent > kDbmLatentBound) {
    throw ResourceError("exact DBM evaluation needs hidden + deep <= " + std::to_string(kDbmLatentBound) +
                        ", network has " + std::to_string(latent));
  }
  net.check_finite();
  Compiled c;
  c.n = net.n_physical;
  c.deep = net.deep_count();
  c.spin = net.convention == DbmConvention::kSpin;
  c.physical_bias = net.physical_bias;
  c.hidden_bias = net.hidden_bias;
  c.deep_bias = net.deep_bias;
  c.hp.resize(net.hidden_bias.size());
  c.hd.resize(net.hidden_bias.size());
  c.pd.resize(net.deep_bias.size());
  for (const auto& [k, w] : net.edges_ph) c.hp[static_cast<std::size_t>(k.second)].emplace_back(k.first, w);
  for (const auto& [k, w] : net.edges_hd) c.hd[static_cast<std::size_t>(k.first)].emplace_back(k.second, w);
  for (const auto& [k, w] : net.edges_pd) c.pd[static_cast<std::size_t>(k.second)].emplace_back(k.first, w);
  c.scale = std::exp(net.log_scale);
  return c;
}

Complex amplitude(const Compiled& c, std::uint64_t z) {
  std::vector<double> x(static_cast<std::size_t>(c.n));
  for (int i = 0; i < c.n; ++i) {
    const bool bit = ((z >> i) & 1U) != 0;
    x[static_cast<std::size_t>(i)] = c.spin ? (bit ? -1.0 : 1.0) : (bit ? 1.0 : 0.0);
  }
  Complex visible{};
  for (int i = 0; i < c.n; ++i) visible += c.physical_bias[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];

  const std::size_t hidden = c.hidden_bias.size();
  std::vector<Complex> field(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    Complex f = c.hidden_bias[j];
    for (const auto& [i, w] : c.hp[j]) f += w * x[static_cast<std::size_t>(i)];
    field[j] = f;
  }
  std::vector<Complex> deep_field(static_cast<std::size_t>(c.deep));
  for (int k = 0; k < c.deep; ++k) {
    Complex f = c.deep_bias[static_cast<std::size_t>(k)];
    for (const auto& [i, w] : c.pd[static_cast<std::size_t>(k)]) f += w * x[static_cast<std::size_t>(i)];
    deep_field[static_cast<std::size_t>(k)] = f;
  }

  Complex total{};
  std::vector<double> d(static_cast<std::size_t>(c.deep));
  for (std::uint64_t cfg = 0; cfg < (std::uint64_t{1} << c.deep); ++cfg) {
    Complex energy = visible;
    for (int k = 0; k < c.deep; ++k) {
      d[static_cast<std::size_t>(k)] = ((cfg >> k) & 1U) ? -1.0 : 1.0;
      energy += deep_field[static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(k)];
    }
    Complex term = std::exp(energy);
    for (std::size_t j = 0; j < hidden; ++j) {
      Complex f = field[j];
      for (const auto& [k, w] : c.hd[j]) f += w * d[static_cast<std::size_t>(k)];
      term *= 2.0 * std::cosh(f);
    }
    total += term;
  }
  return c.scale * total;
}

}  // namespace

Complex dbm_amplitude(const DbmNetwork& net, BasisIndex z) {
  if (z.width != net.n_physical) {
    throw ValidationError("basis index width " + std::to_string(z.width) + " does not match " +
                          std::to_string(net.n_physical) + " physical units");
  }
  return amplitude(compile(net), z.value);
}

std::vector<Complex> dbm_amplitudes(const DbmNetwork& net, int threads) {
  if (net.n_physical > 20) throw ResourceError("DBM amplitude tables limited to n <= 20");
  const Compiled c = compile(net);
  std::vector<Complex> out(std::uint64_t{1} << net.n_physical);
  parallel_for(out.size(), threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t z = begin; z < end; ++z) out[z] = amplitude(c, z);
  });
  return out;
}

ExplicitDistribution dbm_distribution(const DbmNetwork& net, int threads) {
  const auto amps = dbm_amplitudes(net, threads);
  std::vector<double> probs(amps.size());
  double total = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    probs[i] = std::norm(amps[i]);
    total += probs[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw DomainError("DBM amplitudes have no finite nonzero norm");
  for (auto& p : probs) p /= total;
  return ExplicitDistribution(net.n_physical, std::move(probs));
}

DbmSizeReport dbm_size_recurrence(int n, int depth) {
  if (n < 1) throw ValidationError("recurrence needs n >= 1");
  if (depth < 0) throw ValidationError("depth must be nonnegative");
  DbmSizeReport r;
  r.hidden_count = static_cast<std::uint64_t>(n);
  r.history.push_back({0, r.hidden_count, 0, std::nullopt});
  const auto un = static_cast<std::uint64_t>(n);
  for (int cyc = 1; cyc <= depth; ++cyc) {
    r.hidden_count *= 2;
    r.deep_count += un;
    r.deep_count += un;
    r.hidden_count += 3 * un;
    r.history.push_back({cyc, r.hidden_count, r.deep_count, std::nullopt});
  }
  return r;
}

DbmSizeReport dbm_size(const DbmNetwork& net) {
  DbmSizeReport r;
  r.hidden_count = static_cast<std::uint64_t>(net.hidden_count());
  r.deep_count = static_cast<std::uint64_t>(net.deep_count());
  r.edge_count = net.edge_count();
  r.history.push_back({0, r.hidden_count, r.deep_count, r.edge_count});
  return r;
}

DbmBuild dbm_build(const Circuit& c, DbmConvention convention) {
  c.validate();
  DbmBuild out{dbm_init(c.n, convention), {}};
  auto row = [&](int cycle) {
    return DbmSizeRow{cycle, static_cast<std::uint64_t>(out.network.hidden_count()),
                      static_cast<std::uint64_t>(out.network.deep_count()), out.network.edge_count()};
  };
  out.report.history.push_back(row(0));
  for (int cyc = 0; cyc < c.depth(); ++cyc) {
    const Cycle& cycle = c.cycles[static_cast<std::size_t>(cyc)];
    for (int q = 0; q < c.n; ++q) dbm_apply_gate(out.network, cycle.singles[static_cast<std::size_t>(q)], q);
    for (const auto& p : cycle.pairs) dbm_apply_gate(out.network, p.gate, p.i, p.j);
    out.report.history.push_back(row(cyc + 1));
  }
  out.report.hidden_count = static_cast<std::uint64_t>(out.network.hidden_count());
  out.report.deep_count = static_cast<std::uint64_t>(out.network.deep_count());
  out.report.edge_count = out.network.edge_count();
  return out;
}

}  // namespace qsl
