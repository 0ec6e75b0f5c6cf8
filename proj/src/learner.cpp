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

#include "qsl/learner.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "qsl/metrics.hpp"
#include "qsl/parallel.hpp"

namespace qsl {

namespace {

constexpr int kEnumerationCap = 20;

void require_samples(const SampleSet& s) {
  if (s.empty()) throw ValidationError("cannot fit a model to an empty sample set");
  if (s.n < 1 || s.n > 63) throw ValidationError("sample width must be in 1..63");
  s.validate();
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, static_cast<std::size_t>(r.ptr - buf)};
}

std::string context_text(std::uint64_t ctx, int len) {
  std::string s(static_cast<std::size_t>(len), '0');
  for (int i = 0; i < len; ++i) {
    if ((ctx >> i) & 1U) s[static_cast<std::size_t>(len - 1 - i)] = '1';
  }
  return s;
}

}  // namespace

std::uint64_t ArTableModel::context_of(int t, std::uint64_t z) const {
  const int c = context_length(t);
  if (c == 0) return 0;
  return (z >> (t - c)) & ((std::uint64_t{1} << c) - 1);
}

double ArTableModel::p1(int t, std::uint64_t z) const {
  const auto& row = table[static_cast<std::size_t>(t)];
  const auto it = row.find(context_of(t, z));
  return it == row.end() ? 0.5 : it->second;
}

std::uint64_t ArTableModel::parameter_count() const {
  std::uint64_t total = 0;
  for (const auto& row : table) total += row.size();
  return total;
}

ArTableModel fit_ar(const SampleSet& samples, int k, double alpha) {
  require_samples(samples);
  if (k < 0 || k > samples.n - 1) {
    throw ValidationError("AR order " + std::to_string(k) + " outside 0.." + std::to_string(samples.n - 1));
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("smoothing must be finite and >= 0");
  ArTableModel model;
  model.n = samples.n;
  model.k = k;
  model.alpha = alpha;
  model.table.resize(static_cast<std::size_t>(samples.n));
  for (int t = 0; t < samples.n; ++t) {
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> counts;
    for (std::uint64_t z : samples.samples) {
      auto& c = counts[model.context_of(t, z)];
      ++c.first;
      c.second += (z >> t) & 1U;
    }
    auto& row = model.table[static_cast<std::size_t>(t)];
    row.reserve(counts.size());
    for (const auto& [ctx, c] : counts) {
      row.emplace(ctx, (static_cast<double>(c.second) + alpha) / (static_cast<double>(c.first) + 2 * alpha));
    }
  }
  return model;
}

ProductModel fit_product(const SampleSet& samples) {
  require_samples(samples);
  ProductModel model;
  model.n = samples.n;
  std::vector<std::uint64_t> ones(static_cast<std::size_t>(samples.n), 0);
  for (std::uint64_t z : samples.samples) {
    for (int t = 0; t < samples.n; ++t) ones[static_cast<std::size_t>(t)] += (z >> t) & 1U;
  }
  const double total = static_cast<double>(samples.samples.size());
  for (auto c : ones) model.p.push_back(static_cast<double>(c) / total);
  return model;
}

int model_width(const Model& model) {
  return std::visit([](const auto& m) { return m.n; }, model);
}

std::uint64_t model_parameter_count(const Model& model) {
  return std::visit([](const auto& m) { return m.parameter_count(); }, model);
}

namespace {

template <class P1>
std::uint64_t draw(int n, Prng& rng, const P1& p1) {
  std::uint64_t z = 0;
  for (int t = 0; t < n; ++t) {
    if (rng.uniform() < p1(t, z)) z |= std::uint64_t{1} << t;
  }
  return z;
}

}  // namespace

SampleSet model_sample(const Model& model, std::uint64_t count, Prng& rng, int threads) {
  if (count == 0) throw ValidationError("sample request for zero draws");
  SampleSet out;
  out.n = model_width(model);
  out.samples.resize(count);
  const std::uint64_t base = rng.next_u64();
  const std::uint64_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, threads, [&](std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t c = first; c < last; ++c) {
      Prng local(derive_seed(base, c));
      const std::uint64_t begin = c * kSampleChunk;
      const std::uint64_t end = std::min(count, begin + kSampleChunk);
      std::visit(
          [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            for (std::uint64_t i = begin; i < end; ++i) {
              if constexpr (std::is_same_v<T, ArTableModel>) {
                out.samples[i] = draw(m.n, local, [&](int t, std::uint64_t z) { return m.p1(t, z); });
              } else {
                out.samples[i] = draw(m.n, local, [&](int t, std::uint64_t) { return m.p[static_cast<std::size_t>(t)]; });
              }
            }
          },
          model);
    }
  });
  return out;
}

ExplicitDistribution model_distribution(const Model& model) {
  const int n = model_width(model);
  if (n > kEnumerationCap) {
    throw ResourceError("model distribution enumeration limited to n <= " + std::to_string(kEnumerationCap));
  }
  std::vector<double> probs{1.0};
  probs.reserve(std::size_t{1} << n);
  for (int t = 0; t < n; ++t) {
    const std::size_t half = probs.size();
    probs.resize(2 * half);
    for (std::size_t z = 0; z < half; ++z) {
      const double p = std::visit(
          [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ArTableModel>) {
              return m.p1(t, z);
            } else {
              return m.p[static_cast<std::size_t>(t)];
            }
          },
          model);
      probs[z + half] = probs[z] * p;
      probs[z] *= 1.0 - p;
    }
  }
  return ExplicitDistribution(n, std::move(probs));
}

std::string model_to_json(const Model& model) {
  using nlohmann::json;
  json doc;
  json entries = json::array();
  if (const auto* ar = std::get_if<ArTableModel>(&model)) {
    doc["type"] = "ar";
    doc["n"] = ar->n;
    doc["k"] = ar->k;
    doc["alpha"] = ar->alpha;
    for (int t = 0; t < ar->n; ++t) {
      const auto& row = ar->table[static_cast<std::size_t>(t)];
      std::vector<std::pair<std::uint64_t, double>> sorted(row.begin(), row.end());
      std::sort(sorted.begin(), sorted.end());
      for (const auto& [ctx, p] : sorted) {
        entries.push_back(json::array({t, context_text(ctx, ar->context_length(t)), p}));
      }
    }
  } else {
    const auto& pm = std::get<ProductModel>(model);
    doc["type"] = "product";
    doc["n"] = pm.n;
    doc["k"] = 0;
    doc["alpha"] = 0.0;
    for (int t = 0; t < pm.n; ++t) entries.push_back(json::array({t, "", pm.p[static_cast<std::size_t>(t)]}));
  }
  doc["entries"] = std::move(entries);
  return doc.dump() + "\n";
}

Model model_from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  auto need = [&](const char* key) -> const json& {
    if (!doc.is_object() || !doc.contains(key)) throw ParseError(std::string("model file: missing '") + key + "'");
    return doc[key];
  };
  const json& type = need("type");
  const json& jn = need("n");
  const json& jk = need("k");
  const json& ja = need("alpha");
  const json& je = need("entries");
  if (!type.is_string() || !jn.is_number_integer() || !jk.is_number_integer() || !ja.is_number() ||
      !je.is_array()) {
    throw ParseError("model file: field of the wrong type");
  }
  const int n = jn.get<int>();
  const int k = jk.get<int>();
  if (n < 1 || n > 63) throw ParseError("model file: n out of range");
  if (k < 0 || k > n - 1) throw ParseError("model file: k out of range");

  auto entry = [&](std::size_t i) {
    const json& e = je[i];
    const std::string where = "model file: entries[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_string() || !e[2].is_number()) {
      throw ParseError(where + ": expected [t, context, p1]");
    }
    const int t = e[0].get<int>();
    const auto ctx = e[1].get<std::string>();
    const double p = e[2].get<double>();
    if (t < 0 || t >= n) throw ParseError(where + ": position out of range");
    if (!(p >= 0.0 && p <= 1.0)) throw ParseError(where + ": probability outside [0, 1]");
    return std::tuple{t, ctx, p};
  };

  if (type == "product") {
    ProductModel pm;
    pm.n = n;
    pm.p.assign(static_cast<std::size_t>(n), -1.0);
    for (std::size_t i = 0; i < je.size(); ++i) {
      auto [t, ctx, p] = entry(i);
      if (!ctx.empty()) throw ParseError("model file: product entries take an empty context");
      pm.p[static_cast<std::size_t>(t)] = p;
    }
    if (std::find(pm.p.begin(), pm.p.end(), -1.0) != pm.p.end()) {
      throw ParseError("model file: product model needs one entry per position");
    }
    return pm;
  }
  if (type != "ar") throw ParseError("model file: unknown type '" + type.get<std::string>() + "'");
  ArTableModel ar;
  ar.n = n;
  ar.k = k;
  ar.alpha = ja.get<double>();
  ar.table.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < je.size(); ++i) {
    auto [t, ctx, p] = entry(i);
    if (static_cast<int>(ctx.size()) != ar.context_length(t)) {
      throw ParseError("model file: entries[" + std::to_string(i) + "]: context length should be " +
                       std::to_string(ar.context_length(t)));
    }
    std::uint64_t value = 0;
    for (char ch : ctx) {
      if (ch != '0' && ch != '1') throw ParseError("model file: context must be made of 0 and 1");
      value = (value << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    if (!ar.table[static_cast<std::size_t>(t)].emplace(value, p).second) {
      throw ParseError("model file: duplicate entry at position " + std::to_string(t));
    }
  }
  return ar;
}

std::vector<CapacityRow> capacity_sweep(const std::vector<CapacityDataset>& datasets, const std::vector<int>& orders,
                                        std::uint64_t seed, double alpha, std::uint64_t eval_samples, int threads) {
  std::vector<CapacityRow> rows;
  std::uint64_t index = 0;
  for (const auto& ds : datasets) {
    if (ds.truth.n() != ds.samples.n) throw ValidationError("dataset '" + ds.tag + "': truth and samples differ in width");
    for (int k : orders) {
      const Model model = fit_ar(ds.samples, k, alpha);
      Prng rng(derive_seed(seed, index++));
      const SampleSet draws = model_sample(model, eval_samples, rng, threads);
      rows.push_back({k, model_parameter_count(model), xeb(draws, ds.truth).fidelity, ds.tag});
    }
  }
  return rows;
}

void write_capacity_csv(std::ostream& out, const std::vector<CapacityRow>& rows) {
  out << "k,params,fidelity,dataset_tag\n";
  for (const auto& r : rows) out << r.k << ',' << r.params << ',' << fmt(r.fidelity) << ',' << r.dataset_tag << '\n';
}

std::vector<CapacityRow> read_capacity_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "k,params,fidelity,dataset_tag") {
    throw ParseError("capacity CSV: expected header 'k,params,fidelity,dataset_tag'");
  }
  std::vector<CapacityRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string k, params, fid, tag;
    if (!std::getline(ss, k, ',') || !std::getline(ss, params, ',') || !std::getline(ss, fid, ',') ||
        !std::getline(ss, tag)) {
      throw ParseError("capacity CSV line " + std::to_string(lineno) + ": expected 4 fields");
    }
    CapacityRow r;
    try {
      std::size_t used = 0;
      r.k = std::stoi(k, &used);
      if (used != k.size()) throw std::invalid_argument(k);
      r.params = std::stoull(params, &used);
      if (used != params.size()) throw std::invalid_argument(params);
      r.fidelity = std::stod(fid, &used);
      if (used != fid.size()) throw std::invalid_argument(fid);
    } catch (const std::exception&) {
      throw ParseError("capacity CSV line " + std::to_string(lineno) + ": malformed number");
    }
    r.dataset_tag = tag;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace qsl
