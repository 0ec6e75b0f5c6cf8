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

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qsl/circuit.hpp"

namespace qsl {

namespace {

using nlohmann::json;

json gate_to_json(const Gate& g) {
  return json{{"kind", g.name()}, {"theta", g.theta}, {"phi", g.phi}};
}

json single_to_json(const Gate& g) {
  if (g.kind == GateKind::kU1) return gate_to_json(g);
  return g.name();
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("circuit: " + where + ": " + what);
}

double number_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

int int_field(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

Gate gate_from_name(const std::string& name, const std::string& where) {
  if (name == "sqrt_x") return Gate::sqrt_x();
  if (name == "sqrt_y") return Gate::sqrt_y();
  if (name == "sqrt_w") return Gate::sqrt_w();
  if (name == "cz") return Gate::cz();
  if (name == "fsim" || name == "u1") fail(where, "gate '" + name + "' needs angles");
  fail(where, "unknown gate '" + name + "'");
}

Gate gate_from_json(const json& v, const std::string& where) {
  if (v.is_string()) return gate_from_name(v.get<std::string>(), where);
  if (!v.is_object() || !v.contains("kind") || !v.at("kind").is_string()) {
    fail(where, "expected a gate name or an object with 'kind'");
  }
  const std::string kind = v.at("kind").get<std::string>();
  if (kind == "u1") return Gate::u1(number_field(v, "theta", where), number_field(v, "phi", where));
  if (kind == "fsim") {
    return Gate::fsim(number_field(v, "theta", where), number_field(v, "phi", where));
  }
  return gate_from_name(kind, where);
}

}  // namespace

std::string serialize_circuit(const Circuit& c) {
  c.validate();
  json cycles = json::array();
  for (const auto& cyc : c.cycles) {
    json singles = json::array();
    for (const auto& g : cyc.singles) singles.push_back(single_to_json(g));
    json pairs = json::array();
    for (const auto& p : cyc.pairs) {
      json entry = json::array({p.i, p.j});
      if (!(p.gate == c.two_qubit)) entry.push_back(gate_to_json(p.gate));
      pairs.push_back(std::move(entry));
    }
    cycles.push_back(json{{"singles", std::move(singles)}, {"pairs", std::move(pairs)}});
  }
  json doc;
  doc["version"] = 1;
  doc["n_qubits"] = c.n;
  doc["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  doc["two_qubit"] = gate_to_json(c.two_qubit);
  doc["cycles"] = std::move(cycles);
  return doc.dump(1) + "\n";
}

Circuit parse_circuit(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("circuit: invalid JSON at byte ") + std::to_string(e.byte) +
                     ": " + e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");
  for (const char* key : {"version", "n_qubits", "two_qubit", "cycles"}) {
    if (!doc.contains(key)) fail("document", std::string("missing field '") + key + "'");
  }
  if (int_field(doc.at("version"), "version") != 1) fail("version", "unsupported version");

  Circuit c;
  c.n = int_field(doc.at("n_qubits"), "n_qubits");
  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer()) {
      fail("seed", "expected an unsigned integer or null");
    }
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  c.two_qubit = gate_from_json(doc.at("two_qubit"), "two_qubit");
  if (c.two_qubit.arity() != 2) fail("two_qubit", "must be a two-qubit gate");

  const json& cycles = doc.at("cycles");
  if (!cycles.is_array()) fail("cycles", "expected an array");
  for (std::size_t k = 0; k < cycles.size(); ++k) {
    const std::string where = "cycles[" + std::to_string(k) + "]";
    const json& cj = cycles[k];
    if (!cj.is_object() || !cj.contains("singles") || !cj.contains("pairs")) {
      fail(where, "expected an object with 'singles' and 'pairs'");
    }
    Cycle cyc;
    const json& singles = cj.at("singles");
    if (!singles.is_array()) fail(where + ".singles", "expected an array");
    for (std::size_t q = 0; q < singles.size(); ++q) {
      const std::string sw = where + ".singles[" + std::to_string(q) + "]";
      Gate g = gate_from_json(singles[q], sw);
      if (g.arity() != 1) fail(sw, "two-qubit gate in the single-qubit layer");
      cyc.singles.push_back(g);
    }
    const json& pairs = cj.at("pairs");
    if (!pairs.is_array()) fail(where + ".pairs", "expected an array");
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const std::string pw = where + ".pairs[" + std::to_string(p) + "]";
      const json& pj = pairs[p];
      if (!pj.is_array() || pj.size() < 2 || pj.size() > 3) fail(pw, "expected [i, j] or [i, j, gate]");
      PairGate pg{int_field(pj[0], pw + "[0]"), int_field(pj[1], pw + "[1]"), c.two_qubit};
      if (pj.size() == 3) pg.gate = gate_from_json(pj[2], pw + "[2]");
      cyc.pairs.push_back(pg);
    }
    c.cycles.push_back(std::move(cyc));
  }
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ParseError(std::string("circuit: ") + e.what());
  }
  return c;
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open circuit file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_circuit(ss.str());
}

void write_circuit_file(const std::string& path, const Circuit& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << serialize_circuit(c);
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace qsl
