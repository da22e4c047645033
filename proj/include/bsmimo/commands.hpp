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

#ifndef BSMIMO_COMMANDS_HPP
#define BSMIMO_COMMANDS_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Command entry points shared by the command-line tool and the tests. Every
// command writes its report to `out`, diagnostics to `err`, and returns the
// process exit code: 0 on success, 1 when a validation or verification check
// fails, 2 on input, parse, or usage errors.
namespace bsm::cli {

constexpr int exit_ok = 0;
constexpr int exit_validation_failure = 1;
constexpr int exit_input_error = 2;

struct ToleranceOptions {
  double sym_tol;
  double passivity_tol;
  double singular_tol;
  double reactive_tol;
  ToleranceOptions();
};

struct InspectOptions {
  std::string input;
  std::string format{"json"};
  ToleranceOptions tol;
};

struct SynthOptions {
  std::string input;
  double x_i{};
  int order{4};
  std::optional<double> freq;
  std::string format{"json"};
  ToleranceOptions tol;
};

struct SweepOptions {
  std::string input;
  std::string range;  // "start:stop:step" or a single value
  int order{4};
  std::optional<double> freq;
  std::string format{"csv"};
  ToleranceOptions tol;
};

struct VerifyOptions {
  std::string input;
  double x_i{};
  int order{4};
  int samples{1000};
  std::uint64_t seed{1};
  std::optional<double> freq;
  std::string format{"json"};
  ToleranceOptions tol;
};

struct CapacityOptions {
  std::string input;
  double x_i{};
  std::string snr_range{"0:30:2"};
  int realizations{2000};
  int symbols{1000};
  std::uint64_t seed{1};
  double efficiency{1.0};
  std::optional<double> freq;
  std::string format{"csv"};
  ToleranceOptions tol;
};

int cmd_inspect(const InspectOptions& opt, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);
int cmd_capacity(const CapacityOptions& opt, std::ostream& out, std::ostream& err);

/// Expand "start:stop:step" (or a single number) into an inclusive grid.
std::vector<double> parse_range(const std::string& spec);

/// Rectangular "a+bj" rendering with 12 significant digits.
std::string format_complex(std::complex<double> value);

}  // namespace bsm::cli

#endif  // BSMIMO_COMMANDS_HPP
