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

// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "cli.hpp"
#include "qsl/circuit.hpp"
#include "qsl/dbm.hpp"
#include "qsl/distributions.hpp"
#include "qsl/learner.hpp"
#include "qsl/metrics.hpp"
#include "qsl/simulator.hpp"

namespace {

using namespace qsl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string f6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome simulator_correctness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int count = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const int depth = static_cast<int>(seed % 4);
    Circuit c;
    if (n == 1) {
      // One qubit has no couplers: random single-qubit layers only.
      Prng rng(seed);
      c.n = 1;
      const Gate menu[3] = {Gate::sqrt_x(), Gate::sqrt_y(), Gate::sqrt_w()};
      for (int d = 0; d < depth; ++d) c.cycles.push_back({{menu[rng.below(3)]}, {}});
    } else {
      ConnectivitySpec conn = ConnectivitySpec::linear_chain(n);
      if (n == 3 && seed % 2 == 0) conn = ConnectivitySpec{"custom", {{{0, 2}}, {{1, 2}}, {{0, 1}}}};
      const Gate two = seed % 5 == 0 ? Gate::cz() : Gate::fsim();
      c = random_circuit(n, depth, conn, two, seed);
    }
    const auto ref = oracle::dense_run(c);
    const auto got = simulate(c);
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(ref[i] - got.amps()[i]));
    ++count;
  }
  const double t = seconds_since(t0);
  return {count >= 100 && worst < 1e-10 && t < 10.0,
          std::to_string(count) + " circuits, max |d amp| = " + f6(worst) + ", " + f6(t) + " s"};
}

Outcome unitarity_at_scale() {
  const Circuit c12 = random_circuit(12, 14, ConnectivitySpec::grid(3, 4), Gate::fsim(), 12);
  const double dev12 = std::abs(simulate(c12).norm_squared() - 1.0);
  const auto t0 = Clock::now();
  const Circuit c24 = random_circuit(24, 14, ConnectivitySpec::grid(4, 6), Gate::fsim(), 24);
  const double dev24 = std::abs(simulate(c24, SimulatorOptions{2, {}}).norm_squared() - 1.0);
  const double t = seconds_since(t0);
  return {dev12 < 1e-9 && dev24 < 1e-8 && t < 120.0,
          "n=12 |norm-1| = " + f6(dev12) + "; n=24 |norm-1| = " + f6(dev24) + " in " + f6(t) + " s"};
}

Outcome porter_thomas_convergence() {
  const double ref = pt_reference_entropy(12);
  bool ok = true;
  std::string detail = "reference " + f6(ref) + "; circuits:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Circuit c = random_circuit(12, 14, ConnectivitySpec::linear_chain(12), Gate::fsim(), seed);
    const double h = entropy(output_distribution(c));
    ok = ok && std::abs(h - ref) <= 0.1;
    detail += " " + f6(h);
  }
  detail += "; generator:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Prng rng(seed);
    const double h = entropy(porter_thomas_probs(12, rng));
    ok = ok && std::abs(h - ref) <= 0.05;
    detail += " " + f6(h);
  }
  return {ok, detail};
}

Outcome xeb_calibration() {
  const Circuit c = random_circuit(12, 14, ConnectivitySpec::linear_chain(12), Gate::fsim(), 14);
  const auto ideal = output_distribution(c);
  Prng rng(2024);
  const double f_ideal = xeb(sample_from_distribution(ideal, 200000, rng), ideal).fidelity;
  const double f_uniform = xeb(sample_from_distribution(ExplicitDistribution::uniform(12), 200000, rng), ideal).fidelity;
  bool ok = std::abs(f_ideal - 1.0) <= 0.05 && std::abs(f_uniform) <= 0.02;
  std::string detail = "ideal " + f6(f_ideal) + " (expected " + f6(expected_xeb(ideal, ideal)) + "), uniform " +
                       f6(f_uniform);
  for (double f : {0.25, 0.5}) {
    const double fm = xeb(sample_from_distribution(apply_noise(ideal, NoiseModel(f)), 200000, rng), ideal).fidelity;
    ok = ok && std::abs(fm - f) <= 0.05;
    detail += ", f=" + f6(f) + ": " + f6(fm);
  }
  return {ok, detail};
}

Outcome dbm_equivalence() {
  const auto t0 = Clock::now();
  struct Case {
    const char* name;
    Gate gate;
  };
  const std::vector<Case> cases{{"sqrt_x", Gate::sqrt_x()}, {"sqrt_y", Gate::sqrt_y()}, {"sqrt_w", Gate::sqrt_w()},
                                {"cz", Gate::cz()},         {"fsim", Gate::fsim()}};
  const double h = 1 / std::numbers::sqrt2;
  const Matrix2 hadamard{h, h, h, -h};
  bool ok = true;
  std::string detail;
  for (const auto& cs : cases) {
    double worst = 0.0;
    const int n_lo = cs.gate.arity() == 1 ? 1 : 2;
    for (int n = n_lo; n <= 2; ++n) {
      // Gate on the initial network, and again after preparing |0...0> with
      // Hadamards so the gate acts nontrivially.
      for (bool prep : {false, true}) {
        DbmNetwork net = dbm_init(n);
        StateVector ref = StateVector::plus_state(n);
        if (prep) {
          for (int q = 0; q < n; ++q) {
            dbm_apply_single(net, q, hadamard);
            apply_single_qubit(ref, q, hadamard);
          }
          if (cs.gate.arity() == 2) {
            dbm_apply_single(net, 0, 0.9, 0.3);
            apply_single_qubit(ref, 0, u1_matrix(0.9, 0.3));
          }
        }
        if (cs.gate.arity() == 1) {
          dbm_apply_gate(net, cs.gate, n - 1);
          apply_single_qubit(ref, n - 1, single_qubit_matrix(cs.gate));
        } else {
          dbm_apply_gate(net, cs.gate, 0, 1);
          apply_two_qubit(ref, 0, 1, two_qubit_matrix(cs.gate));
        }
        worst = std::max(worst, total_variation(dbm_distribution(net), probabilities(ref)));
      }
    }
    const bool pass = worst < 1e-6;
    ok = ok && pass;
    detail += std::string(detail.empty() ? "" : ", ") + cs.name + " TV " + f6(worst);
  }
  // The literal bit-convention weights, reported for comparison only.
  std::string bit_report;
  for (const auto& cs : cases) {
    try {
      DbmNetwork net = dbm_init(2, DbmConvention::kBit);
      StateVector ref = StateVector::plus_state(2);
      if (cs.gate.arity() == 1) {
        dbm_apply_gate(net, cs.gate, 1);
        apply_single_qubit(ref, 1, single_qubit_matrix(cs.gate));
      } else {
        dbm_apply_gate(net, cs.gate, 0, 1);
        apply_two_qubit(ref, 0, 1, two_qubit_matrix(cs.gate));
      }
      bit_report += std::string(" ") + cs.name + "=" + f6(total_variation(dbm_distribution(net), probabilities(ref)));
    } catch (const DomainError&) {
      bit_report += std::string(" ") + cs.name + "=divergent";
    }
  }
  const double t = seconds_since(t0);
  ok = ok && t < 60.0;
  return {ok, "spin: " + detail + "; bit (not selected):" + bit_report + "; " + f6(t) + " s"};
}

Outcome latent_counting() {
  bool rules_ok = true;
  bool growth_ok = true;
  std::string first_violation;
  for (int n = 1; n <= 10; ++n) {
    for (int depth = 0; depth <= 8; ++depth) {
      const auto r = dbm_size_recurrence(n, depth);
      std::uint64_t hidden = static_cast<std::uint64_t>(n), deep = 0;
      if (r.history.size() != static_cast<std::size_t>(depth) + 1) {
        rules_ok = false;
        continue;
      }
      for (int d = 0; d <= depth; ++d) {
        if (d > 0) {
          // Single-qubit layer, then the two-qubit layer.
          hidden = 2 * hidden;
          deep += static_cast<std::uint64_t>(n);
          deep += static_cast<std::uint64_t>(n);
          hidden += 3 * static_cast<std::uint64_t>(n);
        }
        const auto& row = r.history[static_cast<std::size_t>(d)];
        rules_ok = rules_ok && row.hidden == hidden && row.deep == deep;
        if (d > 0 && n >= 2) {
          const auto& prev = r.history[static_cast<std::size_t>(d - 1)];
          const double ratio = static_cast<double>(row.hidden + row.deep) / static_cast<double>(prev.hidden + prev.deep);
          if (ratio < 2.0 && growth_ok) {
            growth_ok = false;
            first_violation = "n=" + std::to_string(n) + " cycle " + std::to_string(d) + " ratio " + f6(ratio);
          }
        }
      }
      rules_ok = rules_ok && r.hidden_count == hidden && r.deep_count == deep;
    }
  }
  const auto ex = dbm_size_recurrence(2, 1);
  rules_ok = rules_ok && ex.hidden_count == 10 && ex.deep_count == 4;
  const auto built = dbm_build(random_circuit(2, 1, ConnectivitySpec::linear_chain(2), Gate::fsim(), 1));
  return {rules_ok && growth_ok,
          std::string("per-layer rules ") + (rules_ok ? "match" : "MISMATCH") + " for n<=10, depth<=8; total growth >= 2 per cycle " +
              (growth_ok ? "holds" : "violated, first at " + first_violation) + "; n=2 d=1 recurrence hidden " +
              std::to_string(ex.hidden_count) + " deep " + std::to_string(ex.deep_count) +
              " vs constructed hidden " + std::to_string(built.report.hidden_count) + " deep " +
              std::to_string(built.report.deep_count)};
}

Outcome chi2_behavior() {
  // A null whose expected counts are exact integers: the empirical
  // distribution of a sample set, tested against its own counts. N is a power
  // of two so that N * (count / N) is exact in floating point.
  Prng rng(77);
  const auto pt = porter_thomas_probs(12, rng);
  const auto base = sample_from_distribution(pt, std::size_t{1} << 19, rng);
  const auto exact = chi2_test(base, empirical_distribution(base));
  bool ok = exact.statistic == 0.0 && exact.p_value == 1.0;
  int pass = 0;
  double min_p = 1.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Prng r(derive_seed(5150, s));
    const auto draws = sample_from_distribution(pt, 500000, r);
    const double p = chi2_test(draws, pt).p_value;
    pass += p >= 0.01;
    min_p = std::min(min_p, p);
  }
  ok = ok && pass >= 95;
  return {ok, "exact counts chi2 = " + f6(exact.statistic) + ", p = " + f6(exact.p_value) + "; " +
                  std::to_string(pass) + "/100 null sets with p >= 0.01 (min p " + f6(min_p) + ")"};
}

Outcome depth_transition() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto conn = ConnectivitySpec::linear_chain(12);
    auto report = [&](int depth) {
      return conditional_report(output_distribution(random_circuit(12, depth, conn, Gate::fsim(), seed)), 3);
    };
    const auto shallow = report(2);
    const auto deep12 = report(12);
    ok = ok && deep12.deviation(1) < shallow.deviation(1);
    for (int depth : {10, 12, 14}) {
      const auto r = depth == 12 ? deep12 : report(depth);
      for (int o = 1; o <= 3; ++o) ok = ok && r.deviation(o) < shallow.deviation(o);
    }
    detail += (seed > 1 ? "; " : "") + std::string("seed ") + std::to_string(seed) + ": d2 " +
              f6(shallow.deviation(1)) + "/" + f6(shallow.deviation(2)) + "/" + f6(shallow.deviation(3)) + " d12 " +
              f6(deep12.deviation(1)) + "/" + f6(deep12.deviation(2)) + "/" + f6(deep12.deviation(3));
  }
  return {ok, detail};
}

Outcome learnability_contrast() {
  auto fidelity = [](const Model& m, const ExplicitDistribution& truth, std::uint64_t seed) {
    Prng rng(seed);
    return xeb(model_sample(m, kCapacityEvalSamples, rng), truth).fidelity;
  };
  const auto ordered = make_dataset(20, IntegerOrder{}, 500000, 20);
  const double f_int = fidelity(fit_ar(ordered.samples, 4), ordered.distribution, 1);
  const auto permuted = make_dataset(20, RandomPermutation{2020}, 500000, 20);
  const double f_perm = fidelity(fit_ar(permuted.samples, 4), permuted.distribution, 2);

  const Circuit c = random_circuit(12, 14, ConnectivitySpec::linear_chain(12), Gate::fsim(), 31);
  const auto truth = output_distribution(c);
  Prng rng(32);
  const auto train = sample_from_distribution(truth, 500000, rng);
  const double f_full = fidelity(fit_ar(train, 11), truth, 3);
  const double f_prod = fidelity(fit_product(train), truth, 4);
  return {f_int >= 0.8 && f_perm <= 0.1 && f_full >= 0.9 && f_prod <= 0.15,
          "AR(4) integer " + f6(f_int) + ", AR(4) permuted " + f6(f_perm) + ", AR(11) circuit " + f6(f_full) +
              ", product circuit " + f6(f_prod)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "qsl_acceptance_determinism";
  fs::remove_all(root);
  std::string failure;
  auto pipeline = [&](const fs::path& dir, const std::string& threads) {
    fs::create_directories(dir);
    auto p = [&](const std::string& name) { return (dir / name).string(); };
    const std::vector<std::vector<std::string>> steps{
        {"circuit", "--n", "12", "--depth", "14", "--seed", "7", "--out", p("c.json")},
        {"simulate", "--circuit", p("c.json"), "--threads", threads, "--out", p("d.qsld")},
        {"sample", "--circuit", p("c.json"), "--count", "200000", "--seed", "8", "--threads", threads, "--out",
         p("s.txt")},
        {"sample", "--circuit", p("c.json"), "--noise-f", "0.5", "--count", "100000", "--seed", "9", "--threads",
         threads, "--out", p("noisy.txt")},
        {"train", "--samples", p("s.txt"), "--ar-order", "6", "--out", p("m.json")},
        {"eval", "--model", p("m.json"), "--truth", p("d.qsld"), "--seed", "3", "--threads", threads, "--raw",
         "--chi2", "--out", p("e.csv")},
        {"ptgen", "--n", "12", "--mask-bits", "5", "--count", "100000", "--seed", "4", "--threads", threads, "--out",
         p("pt")},
        {"analyze", "entropy-sweep", "--n", "10", "--depths", "1:8", "--threads", threads, "--out", p("ent.csv")},
        {"analyze", "conditionals", "--circuit", p("c.json"), "--threads", threads, "--out", p("cond.csv")},
        {"analyze", "dbm-count", "--n", "3", "--depth", "3", "--out", p("count.csv")},
        {"analyze", "capacity-sweep", "--samples", p("s.txt"), "--truth", p("d.qsld"), "--orders", "0:5",
         "--eval-count", "20000", "--threads", threads, "--out", p("sweep.csv")},
        {"analyze", "capacity-fit", "--sweep", p("sweep.csv"), "--out", p("fit.csv")},
        {"dbm", "--circuit", p("c.json"), "--out", p("net.json")},
    };
    for (const auto& args : steps) {
      std::ostringstream out, err;
      if (cli::run_cli(args, out, err) != 0) failure = args[0] + ": " + err.str();
    }
  };
  // Every run writes to the same relative directory so that the paths echoed
  // in manifests agree between runs.
  using Snapshot = std::map<std::string, std::string>;
  auto run = [&](const std::string& threads) {
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path cwd = fs::current_path();
    fs::current_path(root);
    pipeline("run", threads);
    fs::current_path(cwd);
    Snapshot snap;
    for (const auto& entry : fs::directory_iterator(root / "run")) snap[entry.path().filename().string()] = slurp(entry.path());
    return snap;
  };
  const Snapshot a = run("1");
  const Snapshot b = run("1");
  const Snapshot c = run("4");
  if (!failure.empty()) return {false, "pipeline failed: " + failure};

  std::size_t compared = 0, differing = 0, thread_compared = 0, thread_differing = 0;
  std::string first_diff;
  for (const auto& [name, bytes] : a) {
    ++compared;
    const auto ib = b.find(name);
    if (ib == b.end() || ib->second != bytes) {
      ++differing;
      if (first_diff.empty()) first_diff = name;
    }
    // Manifests echo --threads, so only artifacts are compared across threads.
    if (name.find(".manifest.json") == std::string::npos) {
      ++thread_compared;
      const auto ic = c.find(name);
      if (ic == c.end() || ic->second != bytes) {
        ++thread_differing;
        if (first_diff.empty()) first_diff = name + " (threads)";
      }
    }
  }
  fs::remove_all(root);
  return {differing == 0 && thread_differing == 0 && compared > 20,
          std::to_string(compared) + " files identical on rerun (" + std::to_string(differing) + " differ), " +
              std::to_string(thread_compared) + " artifacts compared at 1 vs 4 threads (" +
              std::to_string(thread_differing) + " differ)" + (first_diff.empty() ? "" : "; first: " + first_diff)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"simulator matches dense oracle", simulator_correctness},
      {"unitarity at scale", unitarity_at_scale},
      {"Porter-Thomas entropy convergence", porter_thomas_convergence},
      {"XEB calibration", xeb_calibration},
      {"DBM equivalence with simulator", dbm_equivalence},
      {"DBM counting recurrence", latent_counting},
      {"chi-squared behavior", chi2_behavior},
      {"depth transition in conditionals", depth_transition},
      {"learnability contrast", learnability_contrast},
      {"CLI determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s  %s [%s] (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
