// Copyright 2026 The mdlsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "mdlsynth/circuit_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "mdlsynth/error.hpp"

namespace mdlsynth {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + why);
}

int parse_int(std::string_view tok, std::size_t line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

double parse_double(std::string_view tok, std::size_t line_no) {
  // std::from_chars for double is not available on every libstdc++ we target.
  std::string s(tok);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    parse_fail(line_no, "expected a number, got '" + s + "'");
  }
  return v;
}

/// Yields (line number, tokens) for every non-empty, non-comment line.
template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto toks = split_ws(line);
    if (!toks.empty()) f(line_no, toks);
    pos = nl + 1;
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  int qubits = -1;
  std::vector<Gate> gates;
  for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& t) {
    if (qubits < 0) {
      if (t[0] != "QUBITS" || t.size() != 2) {
        parse_fail(line_no, "expected header 'QUBITS <n>'");
      }
      qubits = parse_int(t[1], line_no);
      if (qubits < 1 || qubits > kMaxQubits) {
        parse_fail(line_no, "qubit count out of range");
      }
      return;
    }
    Gate g;
    if (t[0] == "H" || t[0] == "S" || t[0] == "T") {
      if (t.size() != 2) parse_fail(line_no, "single-qubit gate takes one index");
      int q = parse_int(t[1], line_no);
      g = t[0] == "H" ? Gate::h(q) : t[0] == "S" ? Gate::s(q) : Gate::t(q);
    } else if (t[0] == "CX") {
      if (t.size() != 3) parse_fail(line_no, "CX takes control and target");
      g = Gate::cx(parse_int(t[1], line_no), parse_int(t[2], line_no));
    } else {
      parse_fail(line_no, "unknown gate '" + std::string(t[0]) + "'");
    }
    try {
      g.validate(qubits);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
    gates.push_back(g);
  });
  if (qubits < 0) throw Error(ErrorCode::kParse, "missing 'QUBITS <n>' header");
  return Circuit(qubits, std::move(gates));
}

std::string format_circuit(const Circuit& c) {
  std::string out = "QUBITS " + std::to_string(c.qubits()) + "\n";
  for (const Gate& g : c.gates()) {
    out += g.to_string();
    out += '\n';
  }
  return out;
}

Unitary parse_unitary(std::string_view text) {
  int qubits = -1;
  std::vector<Complex> entries;
  for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& t) {
    if (qubits < 0) {
      if (t[0] != "UNITARY" || t.size() != 2) {
        parse_fail(line_no, "expected header 'UNITARY <n>'");
      }
      qubits = parse_int(t[1], line_no);
      if (qubits < 1 || qubits > kMaxQubits) {
        parse_fail(line_no, "qubit count out of range");
      }
      return;
    }
    if (t.size() != 2) parse_fail(line_no, "expected '<re> <im>'");
    entries.emplace_back(parse_double(t[0], line_no), parse_double(t[1], line_no));
  });
  if (qubits < 0) throw Error(ErrorCode::kParse, "missing 'UNITARY <n>' header");
  const std::size_t d = std::size_t{1} << qubits;
  if (entries.size() != d * d) {
    throw Error(ErrorCode::kParse, "expected " + std::to_string(d * d) +
                                       " entries, got " + std::to_string(entries.size()));
  }
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    m(static_cast<Eigen::Index>(i / d), static_cast<Eigen::Index>(i % d)) = entries[i];
  }
  return Unitary(qubits, std::move(m));
}

std::string format_unitary(const Unitary& u) {
  std::string out = "UNITARY " + std::to_string(u.qubits()) + "\n";
  for (Eigen::Index r = 0; r < u.dim(); ++r) {
    for (Eigen::Index c = 0; c < u.dim(); ++c) {
      out += format_double(u(r, c).real());
      out += ' ';
      out += format_double(u(r, c).imag());
      out += '\n';
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

Circuit read_circuit_file(const std::filesystem::path& path) {
  try {
    return parse_circuit(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_circuit_file(const Circuit& c, const std::filesystem::path& path) {
  write_text_file(path, format_circuit(c));
}

Unitary read_unitary_file(const std::filesystem::path& path) {
  try {
    return parse_unitary(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_unitary_file(const Unitary& u, const std::filesystem::path& path) {
  write_text_file(path, format_unitary(u));
}

Unitary read_target_file(const std::filesystem::path& path) {
  if (path.extension() == ".mat") return read_unitary_file(path);
  return circuit_unitary(read_circuit_file(path));
}

}  // namespace mdlsynth
