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

#include "cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsl/circuit.hpp"
#include "qsl/core.hpp"
#include "qsl/dbm.hpp"
#include "qsl/distributions.hpp"
#include "qsl/learner.hpp"
#include "qsl/metrics.hpp"
#include "qsl/parallel.hpp"
#include "qsl/simulator.hpp"

namespace qsl::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, static_cast<std::size_t>(r.ptr - buf)};
}

std::string short_fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

/// "a:b" (inclusive), "a,b,c" or "a".
std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  auto to_int = [&](const std::string& s) {
    int v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
      throw UsageError(std::string(flag) + ": '" + text + "' is not an integer list");
    }
    return v;
  };
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    const int lo = to_int(text.substr(0, colon));
    const int hi = to_int(text.substr(colon + 1));
    if (hi < lo) throw UsageError(std::string(flag) + ": empty range '" + text + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(item));
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

bool has_suffix(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_distribution_any(const std::string& path, const ExplicitDistribution& dist) {
  if (has_suffix(path, ".csv")) {
    write_distribution_csv_file(path, dist);
  } else {
    write_distribution_file(path, dist);
  }
}

struct Globals {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  double mem_cap_gib = 1.0;
};

/// Inputs and outputs of one run, echoed into the manifest.
struct Run {
  std::string command;
  std::vector<std::string> args;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::map<std::string, std::uint64_t> seeds;
  int threads = 1;

  const std::string& input(const std::string& path) {
    inputs.push_back(path);
    return path;
  }
  const std::string& output(const std::string& path) {
    outputs.push_back(path);
    return path;
  }
};

void write_manifest(const Run& run) {
  if (run.outputs.empty()) return;
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["tool"] = "qsl";
  doc["version"] = QSL_VERSION;
  doc["command"] = run.command;
  doc["args"] = run.args;
  doc["threads"] = run.threads;
  doc["seeds"] = ordered_json::object();
  for (const auto& [k, v] : run.seeds) doc["seeds"][k] = v;
  auto digests = [](const std::vector<std::string>& paths) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : paths) arr.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    return arr;
  };
  doc["inputs"] = digests(run.inputs);
  doc["outputs"] = digests(run.outputs);
  write_text_file(run.outputs.front() + ".manifest.json", doc.dump(1) + "\n");
}

Gate two_qubit_gate(const std::string& kind, double theta, double phi) {
  if (kind == "fsim") return Gate::fsim(theta, phi);
  if (kind == "cz") return Gate::cz();
  throw UsageError("--two-qubit must be fsim or cz, got '" + kind + "'");
}

std::string default_circuit_name(int n, std::uint64_t seed, int depth) {
  return "q" + std::to_string(n) + "c" + std::to_string(seed) + "d" + std::to_string(depth) + ".json";
}

// Distribution from --circuit (simulated) or --dist (read), then noise.
ExplicitDistribution load_distribution(Run& run, const std::string& circuit_path, const std::string& dist_path,
                                       std::optional<double> noise_f, const SimulatorOptions& sim) {
  if (circuit_path.empty() == dist_path.empty()) throw UsageError("give exactly one of --circuit or --dist");
  ExplicitDistribution dist = circuit_path.empty()
                                  ? read_distribution_file(run.input(dist_path))
                                  : output_distribution(read_circuit_file(run.input(circuit_path)), sim);
  if (noise_f) dist = apply_noise(dist, NoiseModel(*noise_f));
  return dist;
}

SubsetMask parse_mask(const std::string& text, int n) {
  const bool bits = !text.empty() && static_cast<int>(text.size()) == n &&
                    text.find_first_not_of("01") == std::string::npos;
  if (bits) return SubsetMask(BasisIndex::from_bitstring(text).value, n);
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return SubsetMask(v, n);
  } catch (const std::logic_error&) {
    throw UsageError("--mask must be an n-character bitstring or an integer, got '" + text + "'");
  }
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "' for hashing");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-256 initialization failed");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-circuit sampling, Porter-Thomas datasets, DBM construction and sample learning", "qsl"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(QSL_VERSION));

  Globals g;
  app.add_option("--seed", g.seed, "Base seed for every random choice")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: QSL_THREADS or 1)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Output path (or stem for ptgen)");
  app.add_option("--mem-cap-gib", g.mem_cap_gib, "Memory cap for 2^n arrays")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // circuit
  auto* c_circuit = app.add_subcommand("circuit", "Generate a random circuit file");
  int cn = 0, cdepth = 0;
  std::string conn_text = "linear", two_kind = "fsim";
  double fsim_theta = kDefaultFSimTheta, fsim_phi = kDefaultFSimPhi;
  bool no_repeat = false;
  c_circuit->add_option("--n", cn, "Qubits")->required();
  c_circuit->add_option("--depth", cdepth, "Cycles")->required()->check(CLI::NonNegativeNumber);
  for (auto* sub : {c_circuit}) {
    sub->add_option("--connectivity", conn_text, "linear[:PATTERN] or grid:RxC[:PATTERN]")->capture_default_str();
    sub->add_option("--two-qubit", two_kind, "fsim or cz")->capture_default_str();
    sub->add_option("--fsim-theta", fsim_theta)->capture_default_str();
    sub->add_option("--fsim-phi", fsim_phi)->capture_default_str();
  }
  c_circuit->add_flag("--no-repeat", no_repeat, "Avoid repeating a qubit's single-qubit gate in consecutive cycles");

  // simulate
  auto* c_sim = app.add_subcommand("simulate", "Simulate a circuit and write its output distribution");
  std::string circuit_path, dist_path;
  std::optional<double> noise_f;
  c_sim->add_option("--circuit", circuit_path, "Circuit file")->required();
  c_sim->add_option("--noise-f", noise_f, "Mix f * P + (1 - f) * uniform")->check(CLI::Range(0.0, 1.0));

  // sample
  auto* c_sample = app.add_subcommand("sample", "Draw bitstring samples from a circuit or distribution");
  std::uint64_t count = 0;
  std::string dist_out;
  c_sample->add_option("--circuit", circuit_path, "Circuit file");
  c_sample->add_option("--dist", dist_path, "Distribution file");
  c_sample->add_option("--noise-f", noise_f, "Mix f * P + (1 - f) * uniform")->check(CLI::Range(0.0, 1.0));
  c_sample->add_option("--count", count, "Number of samples")->required()->check(CLI::PositiveNumber);
  c_sample->add_option("--dist-out", dist_out, "Also write the sampled distribution");

  // ptgen
  auto* c_pt = app.add_subcommand("ptgen", "Generate an ordered Porter-Thomas distribution and samples");
  int pn = 0;
  std::string order = "integer", mask_text;
  std::optional<int> mask_bits;
  std::optional<std::uint64_t> perm_seed;
  bool permute = false;
  std::uint64_t pt_count = 0;
  c_pt->add_option("--n", pn, "Bits")->required();
  c_pt->add_option("--order", order, "integer, parity or permute")->capture_default_str();
  c_pt->add_option("--mask-bits", mask_bits, "Parity ordering with a random m-bit mask");
  c_pt->add_option("--mask", mask_text, "Parity ordering with this mask (bitstring or integer)");
  c_pt->add_flag("--permute", permute, "Same as --order permute");
  c_pt->add_option("--perm-seed", perm_seed, "Permutation seed (default: --seed)");
  c_pt->add_option("--count", pt_count, "Number of samples (0: distribution only)")->capture_default_str();

  // train
  auto* c_train = app.add_subcommand("train", "Fit a generative model to samples");
  std::string samples_path;
  std::optional<int> ar_order;
  bool product = false;
  double alpha = kDefaultSmoothing;
  c_train->add_option("--samples", samples_path, "Sample file")->required();
  auto* o_ar = c_train->add_option("--ar-order", ar_order, "Autoregressive context length k");
  auto* o_prod = c_train->add_flag("--product", product, "Independent-bit model");
  o_ar->excludes(o_prod);
  c_train->add_option("--alpha", alpha, "Smoothing")->check(CLI::NonNegativeNumber)->capture_default_str();

  // eval
  auto* c_eval = app.add_subcommand("eval", "XEB fidelity of a model, sample file or uniform generator");
  std::string model_path, truth_path;
  bool uniform = false, raw = false, chi2 = false;
  std::uint64_t eval_count = kCapacityEvalSamples;
  auto* o_model = c_eval->add_option("--model", model_path, "Model file");
  auto* o_samples = c_eval->add_option("--samples", samples_path, "Sample file");
  auto* o_uniform = c_eval->add_flag("--uniform", uniform, "Uniform generator");
  o_model->excludes(o_samples)->excludes(o_uniform);
  o_samples->excludes(o_uniform);
  c_eval->add_option("--truth", truth_path, "Ideal distribution file")->required();
  c_eval->add_option("--count", eval_count, "Draws for --model / --uniform")->check(CLI::PositiveNumber)->capture_default_str();
  c_eval->add_flag("--raw", raw, "Also report 2 * sum P(s) - 1");
  c_eval->add_flag("--chi2", chi2, "Also run a chi-squared test against the truth");

  // dbm
  auto* c_dbm = app.add_subcommand("dbm", "Build the DBM of a circuit and export it as JSON");
  std::string convention = "spin";
  c_dbm->add_option("--circuit", circuit_path, "Circuit file")->required();
  c_dbm->add_option("--convention", convention, "spin or bit")->capture_default_str();

  // analyze
  auto* c_an = app.add_subcommand("analyze", "Analysis tables (CSV)");
  c_an->require_subcommand(1);
  auto* a_entropy = c_an->add_subcommand("entropy-sweep", "Entropy of random-circuit outputs against depth");
  int an_n = 0, circuits = 1;
  std::string depths = "1:14";
  a_entropy->add_option("--n", an_n, "Qubits")->required();
  a_entropy->add_option("--depths", depths, "a:b or a,b,c")->capture_default_str();
  a_entropy->add_option("--circuits", circuits, "Circuits averaged per depth")->check(CLI::PositiveNumber)->capture_default_str();
  auto* a_cond = c_an->add_subcommand("conditionals", "Conditional bit probabilities of a distribution");
  int max_order = 3;
  a_cond->add_option("--circuit", circuit_path, "Circuit file");
  a_cond->add_option("--dist", dist_path, "Distribution file");
  a_cond->add_option("--max-order", max_order, "1, 2 or 3")->check(CLI::Range(1, 3))->capture_default_str();
  auto* a_count = c_an->add_subcommand("dbm-count", "Counting recurrence against constructed DBM sizes");
  int an_depth = 0;
  a_count->add_option("--n", an_n, "Qubits")->required();
  a_count->add_option("--depth", an_depth, "Cycles")->required()->check(CLI::NonNegativeNumber);
  auto* a_sweep = c_an->add_subcommand("capacity-sweep", "AR fidelity and size against context length");
  std::string orders = "0:3", tag;
  a_sweep->add_option("--samples", samples_path, "Training samples")->required();
  a_sweep->add_option("--truth", truth_path, "Ideal distribution file")->required();
  a_sweep->add_option("--orders", orders, "a:b or a,b,c")->capture_default_str();
  a_sweep->add_option("--alpha", alpha, "Smoothing")->check(CLI::NonNegativeNumber)->capture_default_str();
  a_sweep->add_option("--eval-count", eval_count, "Model draws per row")->check(CLI::PositiveNumber)->capture_default_str();
  a_sweep->add_option("--tag", tag, "Dataset tag (default: sample file name)");
  auto* a_fit = c_an->add_subcommand("capacity-fit", "Fit y = a exp(b x) + c to a capacity sweep");
  std::string sweep_path, x_col = "k", y_col = "params";
  a_fit->add_option("--sweep", sweep_path, "Capacity sweep CSV")->required();
  a_fit->add_option("--x", x_col, "k")->check(CLI::IsMember({"k"}))->capture_default_str();
  a_fit->add_option("--y", y_col, "params or fidelity")->check(CLI::IsMember({"params", "fidelity"}))->capture_default_str();
  for (auto* sub : {a_entropy, a_count}) {
    sub->add_option("--connectivity", conn_text, "linear[:PATTERN] or grid:RxC[:PATTERN]")->capture_default_str();
    sub->add_option("--two-qubit", two_kind, "fsim or cz")->capture_default_str();
    sub->add_option("--fsim-theta", fsim_theta)->capture_default_str();
    sub->add_option("--fsim-phi", fsim_phi)->capture_default_str();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << QSL_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qsl: " << e.what() << '\n';
    return kExitUsage;
  }

  Run run;
  run.args = args;
  run.threads = resolve_threads(g.threads);
  run.seeds["seed"] = g.seed;
  const ResourceCap cap{g.mem_cap_gib};
  const SimulatorOptions sim{run.threads, cap};
  auto need_out = [&](const char* what) -> const std::string& {
    if (g.out.empty()) throw UsageError(std::string(what) + " needs --out");
    return run.output(g.out);
  };

  try {
    if (c_circuit->parsed()) {
      run.command = "circuit";
      const auto conn = ConnectivitySpec::parse(conn_text, cn);
      const Circuit c = random_circuit(cn, cdepth, conn, two_qubit_gate(two_kind, fsim_theta, fsim_phi), g.seed,
                                       RandomCircuitOptions{no_repeat});
      const std::string path = run.output(g.out.empty() ? default_circuit_name(cn, g.seed, cdepth) : g.out);
      write_circuit_file(path, c);
      std::size_t pairs = 0;
      for (const auto& cyc : c.cycles) pairs += cyc.pairs.size();
      out << "wrote " << path << ": n=" << c.n << " cycles=" << c.depth()
          << " single_qubit_gates=" << static_cast<std::size_t>(c.n) * c.cycles.size()
          << " two_qubit_gates=" << pairs << '\n';
    } else if (c_sim->parsed()) {
      run.command = "simulate";
      const auto dist = load_distribution(run, circuit_path, "", noise_f, sim);
      const std::string& path = need_out("simulate");
      write_distribution_any(path, dist);
      out << "wrote " << path << ": n=" << dist.n() << " entropy=" << short_fmt(entropy(dist)) << '\n';
    } else if (c_sample->parsed()) {
      run.command = "sample";
      const auto dist = load_distribution(run, circuit_path, dist_path, noise_f, sim);
      const std::string& path = need_out("sample");
      Prng rng(g.seed);
      SampleSet s = sample_from_distribution(dist, count, rng, run.threads);
      write_samples_file(path, s);
      if (!dist_out.empty()) write_distribution_any(run.output(dist_out), dist);
      out << "wrote " << path << ": " << s.samples.size() << " samples of " << s.n << " bits\n";
    } else if (c_pt->parsed()) {
      run.command = "ptgen";
      if (permute) order = "permute";
      if (mask_bits || !mask_text.empty()) {
        if (order == "integer") order = "parity";
        if (order != "parity") throw UsageError("--mask-bits / --mask need --order parity");
        if (mask_bits && !mask_text.empty()) throw UsageError("give at most one of --mask-bits and --mask");
      }
      Ordering ord = IntegerOrder{};
      if (order == "parity") {
        if (!mask_bits && mask_text.empty()) throw UsageError("--order parity needs --mask-bits or --mask");
        if (mask_bits) {
          Prng mask_rng(derive_seed(g.seed, 2));
          ord = SubsetParityOrder{SubsetMask::random(pn, *mask_bits, mask_rng)};
        } else {
          ord = SubsetParityOrder{parse_mask(mask_text, pn)};
        }
      } else if (order == "permute") {
        const std::uint64_t ps = perm_seed.value_or(g.seed);
        run.seeds["perm_seed"] = ps;
        ord = RandomPermutation{ps};
      } else if (order != "integer") {
        throw UsageError("--order must be integer, parity or permute, got '" + order + "'");
      }
      const std::string stem = g.out.empty() ? dataset_stem(pn, ord, g.seed) : g.out;
      ExplicitDistribution dist = ExplicitDistribution::uniform(1);
      if (pt_count > 0) {
        Dataset ds = make_dataset(pn, ord, pt_count, g.seed, cap, run.threads);
        dist = std::move(ds.distribution);
        write_distribution_file(run.output(stem + ".qsld"), dist);
        write_samples_file(run.output(stem + ".txt"), ds.samples);
      } else {
        Prng profile_rng(g.seed);
        dist = apply_ordering(porter_thomas_probs(pn, profile_rng, cap), ord);
        write_distribution_file(run.output(stem + ".qsld"), dist);
      }
      if (const auto* sp = std::get_if<SubsetParityOrder>(&ord)) run.seeds["mask"] = sp->mask.y;
      out << "wrote " << stem << ".qsld" << (pt_count > 0 ? " and " + stem + ".txt" : std::string()) << ": n=" << pn
          << " order=" << ordering_tag(ord) << " entropy=" << short_fmt(entropy(dist)) << '\n';
    } else if (c_train->parsed()) {
      run.command = "train";
      if (!ar_order && !product) throw UsageError("train needs --ar-order K or --product");
      const SampleSet s = read_samples_file(run.input(samples_path));
      const Model model = product ? Model{fit_product(s)} : Model{fit_ar(s, *ar_order, alpha)};
      const std::string& path = need_out("train");
      write_text_file(path, model_to_json(model));
      out << "wrote " << path << ": " << (product ? "product" : "ar k=" + std::to_string(*ar_order))
          << " params=" << model_parameter_count(model) << '\n';
    } else if (c_eval->parsed()) {
      run.command = "eval";
      if (model_path.empty() && samples_path.empty() && !uniform) {
        throw UsageError("eval needs one of --model, --samples or --uniform");
      }
      const ExplicitDistribution truth = read_distribution_file(run.input(truth_path));
      SampleSet s;
      if (!samples_path.empty()) {
        s = read_samples_file(run.input(samples_path));
      } else if (!model_path.empty()) {
        const Model model = model_from_json(read_text_file(run.input(model_path)));
        Prng rng(g.seed);
        s = model_sample(model, eval_count, rng, run.threads);
      } else {
        Prng rng(g.seed);
        s = sample_from_distribution(ExplicitDistribution::uniform(truth.n()), eval_count, rng, run.threads);
      }
      const XebResult r = xeb(s, truth);
      std::ostringstream csv;
      csv << "F,N,stderr" << (raw ? ",F_raw" : "") << (chi2 ? ",chi2,dof,p" : "") << '\n';
      csv << fmt(r.fidelity) << ',' << r.sample_count << ',' << fmt(r.standard_error);
      if (raw) csv << ',' << fmt(xeb_raw(s, truth));
      if (chi2) {
        const Chi2Result c2 = chi2_test(s, truth);
        csv << ',' << fmt(c2.statistic) << ',' << c2.degrees_of_freedom << ',' << fmt(c2.p_value);
      }
      csv << '\n';
      if (!g.out.empty()) write_text_file(run.output(g.out), csv.str());
      out << "F=" << short_fmt(r.fidelity) << " stderr=" << short_fmt(r.standard_error) << " N=" << r.sample_count;
      if (raw) out << " F_raw=" << short_fmt(xeb_raw(s, truth));
      out << '\n';
    } else if (c_dbm->parsed()) {
      run.command = "dbm";
      const Circuit c = read_circuit_file(run.input(circuit_path));
      const DbmBuild b = dbm_build(c, parse_convention(convention));
      const std::string& path = need_out("dbm");
      write_text_file(path, dbm_to_json(b.network));
      out << "wrote " << path << ": hidden=" << b.report.hidden_count << " deep=" << b.report.deep_count
          << " edges=" << *b.report.edge_count << '\n';
    } else if (a_entropy->parsed()) {
      run.command = "analyze entropy-sweep";
      const auto ds = parse_int_list(depths, "--depths");
      if (*std::min_element(ds.begin(), ds.end()) < 0) throw UsageError("--depths must be nonnegative");
      const int dmax = *std::max_element(ds.begin(), ds.end());
      cap.check(an_n);
      const auto conn = ConnectivitySpec::parse(conn_text, an_n);
      const Gate two = two_qubit_gate(two_kind, fsim_theta, fsim_phi);
      std::vector<double> sum(static_cast<std::size_t>(dmax) + 1, 0.0);
      for (int i = 0; i < circuits; ++i) {
        const Circuit c = random_circuit(an_n, dmax, conn, two, derive_seed(g.seed, static_cast<std::uint64_t>(i)));
        StateVector state(an_n, cap);
        sum[0] += entropy(probabilities(state, run.threads));
        for (int d = 1; d <= dmax; ++d) {
          Circuit one{an_n, {c.cycles[static_cast<std::size_t>(d - 1)]}, c.two_qubit, std::nullopt};
          apply_circuit(state, one, run.threads);
          sum[static_cast<std::size_t>(d)] += entropy(probabilities(state, run.threads));
        }
      }
      std::ostringstream csv;
      csv << "depth,entropy,pt_reference\n";
      for (int d : ds) {
        csv << d << ',' << fmt(sum[static_cast<std::size_t>(d)] / circuits) << ',' << fmt(pt_reference_entropy(an_n))
            << '\n';
      }
      write_text_file(need_out("entropy-sweep"), csv.str());
      out << "wrote " << g.out << ": " << ds.size() << " depths, pt_reference=" << short_fmt(pt_reference_entropy(an_n))
          << '\n';
    } else if (a_cond->parsed()) {
      run.command = "analyze conditionals";
      const auto dist = load_distribution(run, circuit_path, dist_path, std::nullopt, sim);
      const ConditionalReport rep = conditional_report(dist, max_order);
      std::ostringstream csv;
      write_conditional_csv(csv, rep);
      write_text_file(need_out("conditionals"), csv.str());
      out << "wrote " << g.out << ":";
      for (int o = 1; o <= max_order; ++o) out << " max_deviation[" << o << "]=" << short_fmt(rep.deviation(o));
      out << '\n';
    } else if (a_count->parsed()) {
      run.command = "analyze dbm-count";
      const auto rec = dbm_size_recurrence(an_n, an_depth);
      const Circuit c = random_circuit(an_n, an_depth, ConnectivitySpec::parse(conn_text, an_n),
                                       two_qubit_gate(two_kind, fsim_theta, fsim_phi), g.seed);
      const DbmBuild b = dbm_build(c);
      std::ostringstream csv;
      csv << "cycle,source,hidden,deep,edges\n";
      for (const auto& r : rec.history) csv << r.cycle << ",recurrence," << r.hidden << ',' << r.deep << ",\n";
      for (const auto& r : b.report.history) {
        csv << r.cycle << ",constructed," << r.hidden << ',' << r.deep << ',' << *r.edges << '\n';
      }
      write_text_file(need_out("dbm-count"), csv.str());
      out << "wrote " << g.out << ": recurrence hidden=" << rec.hidden_count << " deep=" << rec.deep_count
          << "; constructed hidden=" << b.report.hidden_count << " deep=" << b.report.deep_count << '\n';
    } else if (a_sweep->parsed()) {
      run.command = "analyze capacity-sweep";
      const auto ks = parse_int_list(orders, "--orders");
      std::vector<CapacityDataset> data;
      const std::string label = tag.empty() ? std::filesystem::path(samples_path).stem().string() : tag;
      data.push_back({label, read_distribution_file(run.input(truth_path)), read_samples_file(run.input(samples_path))});
      const auto rows = capacity_sweep(data, ks, g.seed, alpha, eval_count, run.threads);
      std::ostringstream csv;
      write_capacity_csv(csv, rows);
      write_text_file(need_out("capacity-sweep"), csv.str());
      for (const auto& r : rows) out << "k=" << r.k << " params=" << r.params << " F=" << short_fmt(r.fidelity) << '\n';
    } else if (a_fit->parsed()) {
      run.command = "analyze capacity-fit";
      std::ifstream in(run.input(sweep_path));
      if (!in) throw ValidationError("cannot open '" + sweep_path + "'");
      const auto rows = read_capacity_csv(in);
      std::map<std::string, std::vector<std::pair<double, double>>> groups;
      std::vector<std::string> order_seen;
      for (const auto& r : rows) {
        if (!groups.count(r.dataset_tag)) order_seen.push_back(r.dataset_tag);
        groups[r.dataset_tag].emplace_back(r.k, y_col == "params" ? static_cast<double>(r.params) : r.fidelity);
      }
      std::ostringstream csv;
      csv << "dataset_tag,a,b,c,rms_residual,degenerate\n";
      for (const auto& t : order_seen) {
        const ExpFit f = fit_exponential(groups[t]);
        csv << t << ',' << fmt(f.a) << ',' << fmt(f.b) << ',' << fmt(f.c) << ',' << fmt(f.rms_residual) << ','
            << (f.degenerate ? 1 : 0) << '\n';
        out << t << ": a=" << short_fmt(f.a) << " b=" << short_fmt(f.b) << " c=" << short_fmt(f.c) << '\n';
      }
      write_text_file(need_out("capacity-fit"), csv.str());
    }
    write_manifest(run);
  } catch (const UsageError& e) {
    err << "qsl: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "qsl: resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const ValidationError& e) {
    err << "qsl: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "qsl: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "qsl: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace qsl::cli
