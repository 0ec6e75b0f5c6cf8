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
#include <istream>
#include <ostream>
#include <string>

#include "qsl/core.hpp"

namespace qsl {

void write_samples(std::ostream& out, const SampleSet& samples) {
  samples.validate();
  std::string line(static_cast<std::size_t>(samples.n) + 1, '0');
  line.back() = '\n';
  for (std::uint64_t s : samples.samples) {
    for (int q = 0; q < samples.n; ++q) {
      line[static_cast<std::size_t>(samples.n - 1 - q)] = ((s >> q) & 1U) ? '1' : '0';
    }
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

void write_samples_file(const std::string& path, const SampleSet& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write_samples(out, samples);
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

SampleSet read_samples(std::istream& in, std::string source_tag) {
  SampleSet out;
  out.source_tag = std::move(source_tag);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    if (!line.empty() && line.back() == '\r') {
      throw ParseError(where + ": CR line ending; sample files use LF");
    }
    if (line.empty()) throw ParseError(where + ": empty line");
    if (out.n == 0) {
      if (line.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw ParseError(where + ": bitstring longer than 30 characters");
      }
      out.n = static_cast<int>(line.size());
    } else if (line.size() != static_cast<std::size_t>(out.n)) {
      throw ParseError(where + ": expected " + std::to_string(out.n) + " characters, got " +
                       std::to_string(line.size()));
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (c != '0' && c != '1') {
        throw ParseError(where + ", column " + std::to_string(i + 1) +
                         ": invalid character '" + std::string(1, c) + "'");
      }
      v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    }
    out.samples.push_back(v);
  }
  if (out.samples.empty()) throw ParseError("sample file contains no bitstrings");
  return out;
}

SampleSet read_samples_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open sample file '" + path + "'");
  try {
    return read_samples(in, path);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace qsl
