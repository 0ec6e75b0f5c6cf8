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

#include <ostream>
#include <string>

#include "json.hpp"
#include "qsl/dbm.hpp"

namespace qsl {

namespace {

using nlohmann::json;

json pair_of(Complex c) { return json::array({c.real(), c.imag()}); }

json biases(const std::vector<Complex>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(pair_of(c));
  return out;
}

json edges(const std::map<std::pair<int, int>, Complex>& m) {
  json out = json::array();
  for (const auto& [k, w] : m) out.push_back(json::array({k.first, k.second, w.real(), w.imag()}));
  return out;
}

Complex read_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Complex> read_biases(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(std::string("missing array '") + key + "'");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < doc[key].size(); ++i) {
    out.push_back(read_complex(doc[key][i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::map<std::pair<int, int>, Complex> read_edges(const json& doc, const char* key, std::size_t na, std::size_t nb) {
  if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(std::string("missing array '") + key + "'");
  std::map<std::pair<int, int>, Complex> out;
  for (std::size_t i = 0; i < doc[key].size(); ++i) {
    const json& e = doc[key][i];
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number() || !e[3].is_number()) {
      throw ParseError(where + ": expected [a, b, re, im]");
    }
    const auto a = e[0].get<long long>();
    const auto b = e[1].get<long long>();
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= na || static_cast<std::size_t>(b) >= nb) {
      throw ParseError(where + ": unit index out of range");
    }
    if (!out.emplace(std::pair{static_cast<int>(a), static_cast<int>(b)}, Complex{e[2].get<double>(), e[3].get<double>()})
             .second) {
      throw ParseError(where + ": duplicate edge");
    }
  }
  return out;
}

}  // namespace

std::string dbm_to_json(const DbmNetwork& net) {
  json doc;
  doc["version"] = 1;
  doc["convention"] = std::string(convention_name(net.convention));
  doc["n_physical"] = net.n_physical;
  doc["log_scale"] = pair_of(net.log_scale);
  doc["physical_bias"] = biases(net.physical_bias);
  doc["hidden_bias"] = biases(net.hidden_bias);
  doc["deep_bias"] = biases(net.deep_bias);
  doc["edges_ph"] = edges(net.edges_ph);
  doc["edges_hd"] = edges(net.edges_hd);
  doc["edges_pd"] = edges(net.edges_pd);
  return doc.dump(1) + "\n";
}

DbmNetwork dbm_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("DBM file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("DBM file: expected an object");
  if (doc.value("version", 0) != 1) throw ParseError("DBM file: unsupported version");
  DbmNetwork net;
  if (!doc.contains("n_physical") || !doc["n_physical"].is_number_integer()) {
    throw ParseError("DBM file: missing integer 'n_physical'");
  }
  net.n_physical = doc["n_physical"].get<int>();
  if (!doc.contains("convention") || !doc["convention"].is_string()) {
    throw ParseError("DBM file: missing 'convention'");
  }
  net.convention = parse_convention(doc["convention"].get<std::string>());
  net.log_scale = read_complex(doc["log_scale"], "log_scale");
  net.physical_bias = read_biases(doc, "physical_bias");
  net.hidden_bias = read_biases(doc, "hidden_bias");
  net.deep_bias = read_biases(doc, "deep_bias");
  if (net.n_physical < 1 || net.physical_bias.size() != static_cast<std::size_t>(net.n_physical)) {
    throw ParseError("DBM file: physical_bias length does not match n_physical");
  }
  const auto np = net.physical_bias.size();
  const auto nh = net.hidden_bias.size();
  const auto nd = net.deep_bias.size();
  net.edges_ph = read_edges(doc, "edges_ph", np, nh);
  net.edges_hd = read_edges(doc, "edges_hd", nh, nd);
  net.edges_pd = read_edges(doc, "edges_pd", np, nd);
  return net;
}

void write_dbm_size_csv(std::ostream& out, const DbmSizeReport& report) {
  out << "cycle,hidden,deep,edges\n";
  for (const auto& row : report.history) {
    out << row.cycle << ',' << row.hidden << ',' << row.deep << ',';
    if (row.edges) out << *row.edges;
    out << '\n';
  }
}

}  // namespace qsl
