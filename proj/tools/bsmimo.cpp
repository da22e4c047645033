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

#include "bsmimo/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

struct CommonArgs {
  std::string format{"json"};
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& common, bsm::cli::ToleranceOptions& tol,
                const std::string& default_format) {
  cmd->configurable();
  cmd->fallthrough();
  common.format = default_format;
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", common.out_path, "Write the report to a file instead of stdout");
  cmd->add_option("--tol-sym", tol.sym_tol, "Symmetry tolerance per matrix entry")
      ->capture_default_str();
  cmd->add_option("--tol-passivity", tol.passivity_tol,
                  "Eigenvalue tolerance of the passivity check")
      ->capture_default_str();
  cmd->add_option("--tol-singular", tol.singular_tol,
                  "Smallest admissible signal-flow denominator")
      ->capture_default_str();
  cmd->add_option("--tol-reactive", tol.reactive_tol,
                  "Admissible deviation of synthesized loads from the unit circle")
      ->capture_default_str();
}

int dispatch(const CommonArgs& common, const std::function<int(std::ostream&)>& run) {
  if (common.out_path.empty()) return run(std::cout);
  std::ofstream file(common.out_path);
  if (!file) {
    std::cerr << "error: cannot open output file '" << common.out_path << "'\n";
    return bsm::cli::exit_input_error;
  }
  return run(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Synthesis and analysis of reactive control loads for beam-space MIMO "
      "transmission over a symmetric three-port radiator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option defaults from a config file");

  bsm::cli::InspectOptions inspect;
  bsm::cli::SynthOptions synth;
  bsm::cli::SweepOptions sweep;
  bsm::cli::VerifyOptions verify;
  bsm::cli::CapacityOptions capacity;
  CommonArgs inspect_common, synth_common, sweep_common, verify_common, capacity_common;

  auto* c_inspect = app.add_subcommand(
      "inspect", "Report passivity, symmetry, and per-port radiated powers");
  c_inspect->add_option("input", inspect.input, "Touchstone .s3p file")->required();
  add_common(c_inspect, inspect_common, inspect.tol, "json");

  auto* c_synth = app.add_subcommand(
      "synth", "Synthesize the per-state reactive load table for M-PSK multiplexing");
  c_synth->add_option("input", synth.input, "Touchstone .s3p file")->required();
  c_synth->add_option("--xi", synth.x_i, "Basis reactance X_I in ohm")->required();
  c_synth->add_option("-m,--order", synth.order, "PSK modulation order")
      ->capture_default_str();
  c_synth->add_option("--freq", synth.freq,
                      "Frequency in Hz; the nearest grid point is used");
  add_common(c_synth, synth_common, synth.tol, "json");

  auto* c_sweep = app.add_subcommand(
      "sweep", "Tabulate the load table over a grid of basis reactances");
  c_sweep->add_option("input", sweep.input, "Touchstone .s3p file")->required();
  c_sweep->add_option("--range", sweep.range, "Reactance grid start:stop:step in ohm")
      ->required();
  c_sweep->add_option("-m,--order", sweep.order, "PSK modulation order")
      ->capture_default_str();
  c_sweep->add_option("--freq", sweep.freq,
                      "Frequency in Hz; the nearest grid point is used");
  add_common(c_sweep, sweep_common, sweep.tol, "csv");

  auto* c_verify = app.add_subcommand(
      "verify", "Check the multiplexing identity, constant matching, and reactivity");
  c_verify->add_option("input", verify.input, "Touchstone .s3p file")->required();
  c_verify->add_option("--xi", verify.x_i, "Basis reactance X_I in ohm")->required();
  c_verify->add_option("-m,--order", verify.order, "PSK modulation order")
      ->capture_default_str();
  c_verify->add_option("--samples", verify.samples, "Random symbol pairs to test")
      ->capture_default_str();
  c_verify->add_option("--seed", verify.seed, "Random seed")->capture_default_str();
  c_verify->add_option("--freq", verify.freq,
                       "Frequency in Hz; the nearest grid point is used");
  add_common(c_verify, verify_common, verify.tol, "json");

  auto* c_capacity = app.add_subcommand(
      "capacity", "Monte-Carlo capacity and QPSK mutual-information curves");
  c_capacity->add_option("input", capacity.input, "Touchstone .s3p file")->required();
  c_capacity->add_option("--xi", capacity.x_i, "Basis reactance X_I in ohm")->required();
  c_capacity->add_option("--snr", capacity.snr_range, "Transmit SNR grid in dB")
      ->capture_default_str();
  c_capacity->add_option("--realizations", capacity.realizations,
                         "Channel realizations per SNR point")
      ->capture_default_str();
  c_capacity->add_option("--symbols", capacity.symbols,
                         "Symbols per realization for the MI estimate")
      ->capture_default_str();
  c_capacity->add_option("--seed", capacity.seed, "Random seed")->capture_default_str();
  c_capacity->add_option("--efficiency", capacity.efficiency,
                         "Total antenna efficiency applied as a power scale")
      ->capture_default_str();
  c_capacity->add_option("--freq", capacity.freq,
                         "Frequency in Hz; the nearest grid point is used");
  add_common(c_capacity, capacity_common, capacity.tol, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : bsm::cli::exit_input_error;
  }

  if (c_inspect->parsed()) {
    inspect.format = inspect_common.format;
    return dispatch(inspect_common,
                    [&](std::ostream& out) { return cmd_inspect(inspect, out, std::cerr); });
  }
  if (c_synth->parsed()) {
    synth.format = synth_common.format;
    return dispatch(synth_common,
                    [&](std::ostream& out) { return cmd_synth(synth, out, std::cerr); });
  }
  if (c_sweep->parsed()) {
    sweep.format = sweep_common.format;
    return dispatch(sweep_common,
                    [&](std::ostream& out) { return cmd_sweep(sweep, out, std::cerr); });
  }
  if (c_verify->parsed()) {
    verify.format = verify_common.format;
    return dispatch(verify_common,
                    [&](std::ostream& out) { return cmd_verify(verify, out, std::cerr); });
  }
  capacity.format = capacity_common.format;
  return dispatch(capacity_common,
                  [&](std::ostream& out) { return cmd_capacity(capacity, out, std::cerr); });
}
