// SPDX-License-Identifier: Apache-2.0
//
// bsmimo — reactive load synthesis and capacity analysis for beam-space MIMO
// over symmetric three-port reconfigurable antennas
// Copyright (C) 2026 bsmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BSMIMO_TOUCHSTONE_HPP
#define BSMIMO_TOUCHSTONE_HPP

#include "bsmimo/multiport.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace bsm {

/// Parse or layout failure in a Touchstone file, carrying the 1-based line
/// number the problem was detected on (0 when no line applies).
class TouchstoneError : public std::runtime_error {
 public:
  TouchstoneError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

enum class TsFormat { kRealImag, kMagAngle, kDbAngle };

struct TsToken {
  double value;
  int line;
};

inline std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

template <typename Scalar>
std::complex<Scalar> decode_pair(TsFormat fmt, double a, double b) {
  constexpr double deg = std::numbers::pi / 180.0;
  switch (fmt) {
    case TsFormat::kRealImag:
      return {Scalar(a), Scalar(b)};
    case TsFormat::kMagAngle:
      return std::polar(Scalar(a), Scalar(b * deg));
    case TsFormat::kDbAngle:
      return std::polar(Scalar(std::pow(10.0, a / 20.0)), Scalar(b * deg));
  }
  return {};
}

}  // namespace detail

/// Parse a Touchstone v1 S-parameter stream with a known port count. Returns
/// one matrix per frequency point, converted to rectangular form whatever the
/// declared number format. Comment text after '!' is ignored. Frequencies
/// must be strictly increasing, which also rejects trailing 2-port noise data.
template <typename Scalar = double>
std::vector<ScatteringMatrix<Scalar>> parse_touchstone(std::istream& in,
                                                       int expected_ports) {
  if (expected_ports < 1)
    throw std::invalid_argument("expected_ports must be positive");

  double freq_scale = 1e9;  // v1 defaults: GHZ S MA R 50
  detail::TsFormat fmt = detail::TsFormat::kMagAngle;
  double resistance = 50.0;
  bool option_seen = false;

  std::vector<detail::TsToken> tokens;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto bang = raw.find('!'); bang != std::string::npos) raw.erase(bang);
    std::istringstream line(raw);
    std::string tok;
    if (!(line >> tok)) continue;

    if (tok[0] == '#') {
      if (option_seen) throw TouchstoneError(lineno, "duplicate option line");
      option_seen = true;
      std::vector<std::string> fields;
      if (tok.size() > 1) fields.push_back(tok.substr(1));
      while (line >> tok) fields.push_back(tok);
      bool param_is_s = true;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string f = detail::upper(fields[i]);
        if (f == "HZ") freq_scale = 1.0;
        else if (f == "KHZ") freq_scale = 1e3;
        else if (f == "MHZ") freq_scale = 1e6;
        else if (f == "GHZ") freq_scale = 1e9;
        else if (f == "S") param_is_s = true;
        else if (f == "Y" || f == "Z" || f == "G" || f == "H") param_is_s = false;
        else if (f == "RI") fmt = detail::TsFormat::kRealImag;
        else if (f == "MA") fmt = detail::TsFormat::kMagAngle;
        else if (f == "DB") fmt = detail::TsFormat::kDbAngle;
        else if (f == "R") {
          if (++i >= fields.size())
            throw TouchstoneError(lineno, "reference resistance missing after R");
          char* end = nullptr;
          resistance = std::strtod(fields[i].c_str(), &end);
          if (end == fields[i].c_str() || *end != '\0' || !(resistance > 0))
            throw TouchstoneError(lineno,
                                  "invalid reference resistance '" + fields[i] + "'");
        } else {
          throw TouchstoneError(lineno, "unrecognized option token '" + fields[i] + "'");
        }
      }
      if (!param_is_s)
        throw TouchstoneError(lineno, "only S-parameter files are supported");
      continue;
    }

    if (!option_seen)
      throw TouchstoneError(lineno, "data encountered before the option line");
    while (true) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw TouchstoneError(lineno, "non-numeric token '" + tok + "'");
      tokens.push_back({v, lineno});
      if (!(line >> tok)) break;
    }
  }

  if (!option_seen) throw TouchstoneError(0, "missing option line");
  if (tokens.empty()) throw TouchstoneError(0, "no network data");

  const int n = expected_ports;
  const std::size_t stride = 1 + 2 * std::size_t(n) * std::size_t(n);
  if (tokens.size() % stride != 0)
    throw TouchstoneError(tokens.back().line,
                          "incomplete data block: expected a multiple of " +
                              std::to_string(stride) + " values per frequency for " +
                              std::to_string(n) + " ports");

  std::vector<ScatteringMatrix<Scalar>> nets;
  double prev_freq = -1.0;
  for (std::size_t off = 0; off < tokens.size(); off += stride) {
    const double freq = tokens[off].value * freq_scale;
    if (nets.empty() ? freq < 0 : freq <= prev_freq)
      throw TouchstoneError(tokens[off].line,
                            "frequencies must be strictly increasing");
    prev_freq = freq;

    MatrixXc<Scalar> m(n, n);
    for (int k = 0; k < n * n; ++k) {
      const double a = tokens[off + 1 + 2 * k].value;
      const double b = tokens[off + 2 + 2 * k].value;
      // v1 orders 2-port data S11 S21 S12 S22; larger networks are row-major
      const int row = (n == 2) ? k % 2 : k / n;
      const int col = (n == 2) ? k / 2 : k % n;
      m(row, col) = detail::decode_pair<Scalar>(fmt, a, b);
    }
    nets.emplace_back(std::move(m), Scalar(resistance), Scalar(freq));
  }
  return nets;
}

template <typename Scalar = double>
std::vector<ScatteringMatrix<Scalar>> parse_touchstone(const std::string& text,
                                                       int expected_ports) {
  std::istringstream in(text);
  return parse_touchstone<Scalar>(in, expected_ports);
}

/// Parse a .sNp file from disk. When the extension declares a port count it
/// must agree with expected_ports.
template <typename Scalar = double>
std::vector<ScatteringMatrix<Scalar>> parse_touchstone_file(const std::string& path,
                                                            int expected_ports) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    const std::string ext = detail::upper(path.substr(dot + 1));
    if (ext.size() >= 3 && ext.front() == 'S' && ext.back() == 'P') {
      const std::string digits = ext.substr(1, ext.size() - 2);
      if (!digits.empty() &&
          std::all_of(digits.begin(), digits.end(),
                      [](unsigned char c) { return std::isdigit(c); })) {
        const int file_ports = std::atoi(digits.c_str());
        if (file_ports != expected_ports)
          throw TouchstoneError(
              0, "expected " + std::to_string(expected_ports) +
                     " ports, but file extension declares " + std::to_string(file_ports));
      }
    }
  }
  std::ifstream in(path);
  if (!in) throw TouchstoneError(0, "cannot open '" + path + "'");
  return parse_touchstone<Scalar>(in, expected_ports);
}

/// Serialize networks as a Touchstone v1 RI file in Hz. Values are written
/// with 15 significant digits so a reparse is value-stable well past the
/// 12-digit contract.
template <typename Scalar>
void serialize_touchstone(const std::vector<ScatteringMatrix<Scalar>>& nets,
                          std::ostream& out) {
  if (nets.empty())
    throw std::invalid_argument("cannot serialize an empty network sequence");
  const auto n = nets.front().ports();
  const Scalar z0 = nets.front().z0;
  Scalar prev = Scalar(-1);
  for (const auto& net : nets) {
    if (net.ports() != n)
      throw std::invalid_argument("inconsistent port counts in network sequence");
    if (net.z0 != z0)
      throw std::invalid_argument("inconsistent reference impedances in network sequence");
    if (!net.freq)
      throw std::invalid_argument("network without a frequency tag cannot be serialized");
    if (*net.freq < Scalar(0) || *net.freq <= prev)
      throw std::invalid_argument("frequencies must be non-negative and strictly increasing");
    prev = *net.freq;
  }

  out << std::setprecision(15);
  out << "# HZ S RI R " << z0 << "\n";
  for (const auto& net : nets) {
    out << *net.freq;
    if (n <= 2) {
      // 2-port order is S11 S21 S12 S22 on a single line
      for (Eigen::Index col = 0; col < n; ++col)
        for (Eigen::Index row = 0; row < n; ++row)
          out << '\t' << net.entries(row, col).real() << '\t'
              << net.entries(row, col).imag();
      out << "\n";
    } else {
      for (Eigen::Index row = 0; row < n; ++row) {
        if (row > 0) out << " ";
        for (Eigen::Index col = 0; col < n; ++col) {
          out << '\t' << net.entries(row, col).real() << '\t'
              << net.entries(row, col).imag();
          if (col % 4 == 3 && col + 1 < n) out << "\n ";
        }
        out << "\n";
      }
    }
  }
}

template <typename Scalar>
std::string serialize_touchstone(const std::vector<ScatteringMatrix<Scalar>>& nets) {
  std::ostringstream out;
  serialize_touchstone(nets, out);
  return out.str();
}

}  // namespace bsm

#endif  // BSMIMO_TOUCHSTONE_HPP
