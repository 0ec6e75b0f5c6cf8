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

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qsl/simulator.hpp"

namespace qsl {

namespace {

constexpr std::array<char, 4> kMagic = {'Q', 'S', 'L', 'D'};
constexpr std::uint8_t kVersion = 1;
constexpr int kCsvMaxQubits = 16;

void put_le64(std::ostream& out, double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  out.write(bytes, 8);
}

double get_le64(const unsigned char* bytes) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[b];
  return std::bit_cast<double>(bits);
}

ExplicitDistribution read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> probs;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "index,probability") continue;
    const auto comma = line.find(',');
    const std::string where = "distribution CSV line " + std::to_string(line_no);
    if (comma == std::string::npos) throw ParseError(where + ": expected 'index,probability'");
    std::uint64_t index = 0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, index);
    if (r1.ec != std::errc{} || r1.ptr != b + comma) throw ParseError(where + ": bad index");
    if (index != probs.size()) throw ParseError(where + ": indices must be consecutive from 0");
    double p = 0.0;
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), p);
    if (r2.ec != std::errc{} || r2.ptr != b + line.size()) throw ParseError(where + ": bad probability");
    probs.push_back(p);
  }
  const std::size_t size = probs.size();
  if (size < 2 || (size & (size - 1)) != 0) {
    throw ParseError("distribution CSV: row count " + std::to_string(size) + " is not 2^n");
  }
  return {std::countr_zero(size), std::move(probs)};
}

}  // namespace

void write_distribution(std::ostream& out, const ExplicitDistribution& dist) {
  out.write(kMagic.data(), kMagic.size());
  const char header[2] = {static_cast<char>(kVersion), static_cast<char>(dist.n())};
  out.write(header, 2);
  for (double p : dist.probs()) put_le64(out, p);
}

void write_distribution_csv(std::ostream& out, const ExplicitDistribution& dist) {
  if (dist.n() > kCsvMaxQubits) {
    throw ValidationError("CSV distribution output is limited to n <= 16");
  }
  out << "index,probability\n";
  char buf[64];
  for (std::uint64_t i = 0; i < dist.size(); ++i) {
    const auto r = std::to_chars(buf, buf + sizeof buf, dist[i], std::chars_format::general, 17);
    out << i << ',' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)) << '\n';
  }
}

ExplicitDistribution read_distribution(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  const auto got = in.gcount();
  if (got == 4 && std::memcmp(magic, kMagic.data(), 4) == 0) {
    unsigned char header[2];
    in.read(reinterpret_cast<char*>(header), 2);
    if (in.gcount() != 2) throw ParseError("QSLD: truncated header");
    if (header[0] != kVersion) {
      throw ParseError("QSLD: unsupported version " + std::to_string(header[0]));
    }
    const int n = header[1];
    if (n < 1 || n > kMaxQubits) throw ParseError("QSLD: qubit count " + std::to_string(n) + " out of range");
    const std::uint64_t size = std::uint64_t{1} << n;
    std::vector<unsigned char> raw(size * 8);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::uint64_t>(in.gcount()) != raw.size()) {
      throw ParseError("QSLD: expected " + std::to_string(size) + " probabilities, file is truncated");
    }
    if (in.peek() != std::char_traits<char>::eof()) throw ParseError("QSLD: trailing bytes after payload");
    std::vector<double> probs(size);
    for (std::uint64_t i = 0; i < size; ++i) probs[i] = get_le64(raw.data() + 8 * i);
    return {n, std::move(probs)};
  }
  in.clear();
  std::string rest;
  {
    std::ostringstream ss;
    ss << in.rdbuf();
    rest = ss.str();
  }
  std::istringstream csv(std::string(magic, static_cast<std::size_t>(got)) + rest);
  return read_csv(csv);
}

void write_distribution_file(const std::string& path, const ExplicitDistribution& dist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write_distribution(out, dist);
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

void write_distribution_csv_file(const std::string& path, const ExplicitDistribution& dist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write_distribution_csv(out, dist);
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

ExplicitDistribution read_distribution_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open distribution file '" + path + "'");
  try {
    return read_distribution(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace qsl
