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

#include <json.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace bsm::cli;
using json = nlohmann::json;

namespace {

const std::string kExampleFile = std::string(BSMIMO_DATA_DIR) + "/example_3port.s3p";

struct CommandRun {
  int code;
  std::string out;
  std::string err;
};

template <typename Options, typename Fn>
CommandRun run(Fn fn, const Options& opt) {
  std::ostringstream out, err;
  const int code = fn(opt, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream file(path);
  file << body;
  return path;
}

struct SubprocessRun {
  int code;
  std::string output;
};

SubprocessRun run_binary(const std::string& args) {
  const std::string cmd = std::string(BSMIMO_CLI_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[512];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
    output.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

// rows of a CSV document, '#' metadata lines skipped
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (true) {
      const auto comma = line.find(',', begin);
      cells.push_back(line.substr(begin, comma - begin));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("range specs expand inclusively") {
  CHECK(parse_range("-300:300:10").size() == 61);
  CHECK(parse_range("0:30:2").size() == 16);
  CHECK(parse_range("5") == std::vector<double>{5.0});
  CHECK(parse_range("10:0:-5") == std::vector<double>{10.0, 5.0, 0.0});
  CHECK_THROWS_AS(parse_range("10:0:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("0:10:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range(""), std::invalid_argument);
}

TEST_CASE("complex values render as rectangular text") {
  CHECK(format_complex({0.25, -0.5}) == "0.25-0.5j");
  CHECK(format_complex({-1.0, 2.0}) == "-1+2j");
  CHECK(format_complex({0.123456789012345, 0.0}) == "0.123456789012+0j");
}

TEST_CASE("inspect reports the example radiator cleanly") {
  InspectOptions opt;
  opt.input = kExampleFile;
  const auto result = run(cmd_inspect, opt);
  REQUIRE(result.code == exit_ok);

  const auto doc = json::parse(result.out);
  REQUIRE(doc["rows"].size() == 1);
  const auto& row = doc["rows"][0];
  CHECK(row["symmetry_residual"].get<double>() == 0.0);
  CHECK(row["passivity_margin"].get<double>() > 0.0);
  CHECK(row["gamma_matched_re"].get<double>() == 0.24);
  CHECK(row["gamma_matched_im"].get<double>() == 0.19);
  CHECK(row["p_rad_port0"].get<double>() == Catch::Approx(0.4307).margin(1e-12));
}

TEST_CASE("inspect rejects a 2-port file with an input error") {
  const auto path = write_temp("bsmimo_two_port.s2p",
                               "# HZ S RI R 50\n1e9 0.1 0 0.2 0 0.2 0 0.1 0\n");
  InspectOptions opt;
  opt.input = path.string();
  const auto result = run(cmd_inspect, opt);
  CHECK(result.code == exit_input_error);
  CHECK(result.err.find("expected 3 ports") != std::string::npos);
}

TEST_CASE("inspect flags an active file with a validation failure") {
  const auto path = write_temp(
      "bsmimo_active.s3p",
      "# HZ S RI R 50\n"
      "1e9 1.2 0 0 0 0 0\n 0 0 1.2 0 0 0\n 0 0 0 0 1.2 0\n");
  InspectOptions opt;
  opt.input = path.string();
  const auto result = run(cmd_inspect, opt);
  CHECK(result.code == exit_validation_failure);
  CHECK(result.err.find("passivity") != std::string::npos);
}

TEST_CASE("inspect surfaces parse errors with line numbers") {
  const auto path =
      write_temp("bsmimo_broken.s3p", "# HZ S RI R 50\n1e9 what 0 0 0 0 0\n");
  InspectOptions opt;
  opt.input = path.string();
  const auto result = run(cmd_inspect, opt);
  CHECK(result.code == exit_input_error);
  CHECK(result.err.find("line 2") != std::string::npos);

  opt.input = "/nonexistent/file.s3p";
  CHECK(run(cmd_inspect, opt).code == exit_input_error);
}

TEST_CASE("synth emits the four-state table with the expected matching") {
  SynthOptions opt;
  opt.input = kExampleFile;
  opt.x_i = -100.0;
  const auto result = run(cmd_synth, opt);
  REQUIRE(result.code == exit_ok);

  const auto doc = json::parse(result.out);
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["meta"]["return_loss_db"].get<double>() == Catch::Approx(10.4).margin(0.2));
  CHECK(doc["meta"]["x_ii_ohm"].get<double>() == Catch::Approx(85.6416).margin(1e-3));
  CHECK(doc["meta"]["r_lossless"].get<double>() == Catch::Approx(0.563083).margin(1e-5));
}

TEST_CASE("synth with order 2 returns the basis loads") {
  SynthOptions opt;
  opt.input = kExampleFile;
  opt.x_i = -100.0;
  opt.order = 2;
  const auto result = run(cmd_synth, opt);
  REQUIRE(result.code == exit_ok);
  const auto doc = json::parse(result.out);
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["x1_ohm"].get<double>() == Catch::Approx(-100.0).margin(1e-9));
  CHECK(doc["rows"][1]["x1_ohm"].get<double>() ==
        doc["meta"]["x_ii_ohm"].get<double>());
}

TEST_CASE("synth rejects a non-power-of-two order as usage error") {
  SynthOptions opt;
  opt.input = kExampleFile;
  opt.x_i = -100.0;
  opt.order = 3;
  const auto result = run(cmd_synth, opt);
  CHECK(result.code == exit_input_error);
  CHECK(result.err.find("power of two") != std::string::npos);
}

TEST_CASE("json and csv encodings carry the same numbers") {
  SynthOptions opt;
  opt.input = kExampleFile;
  opt.x_i = -100.0;
  const auto as_json = run(cmd_synth, opt);
  opt.format = "csv";
  const auto as_csv = run(cmd_synth, opt);
  REQUIRE(as_json.code == exit_ok);
  REQUIRE(as_csv.code == exit_ok);

  const auto doc = json::parse(as_json.out);
  const auto csv = parse_csv(as_csv.out);
  REQUIRE(csv.size() == doc["rows"].size() + 1);  // header + rows
  const auto& header = csv[0];
  for (std::size_t r = 0; r < doc["rows"].size(); ++r)
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto& jv = doc["rows"][r][header[c]];
      if (!jv.is_number()) continue;
      const double a = std::strtod(csv[r + 1][c].c_str(), nullptr);
      const double b = jv.get<double>();
      CHECK(std::abs(a - b) <= 1e-11 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("sweep covers the grid and keeps the imbalance column constant") {
  SweepOptions opt;
  opt.input = kExampleFile;
  opt.range = "-300:300:10";
  const auto result = run(cmd_sweep, opt);
  REQUIRE(result.code == exit_ok);

  const auto csv = parse_csv(result.out);
  REQUIRE(csv.size() == 62);  // header + 61 grid points
  const auto& header = csv[0];
  const auto r_col = std::size_t(
      std::find(header.begin(), header.end(), "r_lossless") - header.begin());
  const auto status_col = std::size_t(
      std::find(header.begin(), header.end(), "status") - header.begin());
  REQUIRE(r_col < header.size());

  double r_min = 1e300, r_max = 0.0;
  for (std::size_t i = 1; i < csv.size(); ++i) {
    REQUIRE(csv[i][status_col] == "ok");
    const double r = std::strtod(csv[i][r_col].c_str(), nullptr);
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
  }
  CHECK((r_max - r_min) / r_min < 1e-9);
}

TEST_CASE("sweep usage errors") {
  SweepOptions opt;
  opt.input = kExampleFile;
  opt.range = "100:0:10";
  CHECK(run(cmd_sweep, opt).code == exit_input_error);
}

TEST_CASE("sweep succeeds while flagging failed grid points") {
  SweepOptions opt;
  opt.input = kExampleFile;
  opt.range = "-300:300:50";
  opt.tol.singular_tol = 0.5;  // strict enough to fail part of this grid
  const auto result = run(cmd_sweep, opt);
  REQUIRE(result.code == exit_ok);

  const auto csv = parse_csv(result.out);
  int ok = 0, failed = 0;
  for (std::size_t i = 1; i < csv.size(); ++i)
    (csv[i][1] == "ok" ? ok : failed) += 1;
  CHECK(ok > 0);
  CHECK(failed > 0);
}

TEST_CASE("sweep exits nonzero when no grid point succeeds") {
  // equal control self and coupling terms make the pairing degenerate
  const auto path = write_temp(
      "bsmimo_degenerate.s3p",
      "# GHZ S RI R 50\n"
      "2.5  0.2 0.1 -0.1 0.3 -0.1 0.3\n"
      "    -0.1 0.3  0.3 -0.2  0.3 -0.2\n"
      "    -0.1 0.3  0.3 -0.2  0.3 -0.2\n");
  SweepOptions opt;
  opt.input = path.string();
  opt.range = "-100:100:100";
  const auto result = run(cmd_sweep, opt);
  CHECK(result.code == exit_validation_failure);
  const auto csv = parse_csv(result.out);
  for (std::size_t i = 1; i < csv.size(); ++i) CHECK(csv[i][1] == "failed");
}

TEST_CASE("capacity information rate approaches the ceiling at the top of the range") {
  CapacityOptions opt;
  opt.input = kExampleFile;
  opt.x_i = -100.0;
  opt.snr_range = "0:30:15";
  opt.realizations = 300;
  opt.symbols = 300;
  opt.seed = 12;
  opt.efficiency = 0.56;
  const auto result = run(cmd_capacity, opt);
  REQUIRE(result.code == exit_ok);
  const auto csv = parse_csv(result.out);
  REQUIRE(csv.size() == 4);  // header + {0, 15, 30} dB
  const double mi_top = std::strtod(csv[3][2].c_str(), nullptr);
  CHECK(mi_top > 3.8);
  CHECK(mi_top <= 4.0);
}

TEST_CASE("verify passes on the example radiator and fails on a broken one") {
  VerifyOptions opt;
  opt.input = kExampleFile;
  opt.x_i = -100.0;
  opt.samples = 500;
  const auto good = run(cmd_verify, opt);
  REQUIRE(good.code == exit_ok);
  const auto doc = json::parse(good.out);
  for (const auto& row : doc["rows"]) CHECK(row["pass"].get<std::string>() == "pass");

  const auto path = write_temp(
      "bsmimo_asymmetric.s3p",
      "# GHZ S RI R 50\n"
      "2.5  0.24 0.19 -0.13 0.47 -0.13 0.47\n"
      "    -0.13 0.47  0.46 -0.27  0.14 0.13\n"
      "    -0.13 0.47  0.14 0.13   0.40 -0.22\n");
  opt.input = path.string();
  const auto bad = run(cmd_verify, opt);
  CHECK(bad.code == exit_validation_failure);
  CHECK(bad.err.find("symmetry violation") != std::string::npos);

  opt.input = kExampleFile;
  opt.samples = 0;
  CHECK(run(cmd_verify, opt).code == exit_input_error);
}

TEST_CASE("capacity emits curves with metadata and is deterministic") {
  CapacityOptions opt;
  opt.input = kExampleFile;
  opt.x_i = -100.0;
  opt.snr_range = "0:30:10";
  opt.realizations = 40;
  opt.symbols = 50;
  opt.seed = 9;
  opt.efficiency = 0.56;

  const auto first = run(cmd_capacity, opt);
  const auto second = run(cmd_capacity, opt);
  REQUIRE(first.code == exit_ok);
  CHECK(first.out == second.out);

  CHECK(first.out.find("# seed = 9") != std::string::npos);
  CHECK(first.out.find("# estimator = ") != std::string::npos);
  CHECK(first.out.find("# snr_convention = ") != std::string::npos);
  const auto csv = parse_csv(first.out);
  REQUIRE(csv.size() == 5);  // header + 4 SNR points

  opt.efficiency = 0.0;
  CHECK(run(cmd_capacity, opt).code == exit_input_error);
}

TEST_CASE("binary dispatches subcommands with contract exit codes") {
  CHECK(run_binary("--help").code == 0);
  CHECK(run_binary("inspect " + kExampleFile).code == 0);
  CHECK(run_binary("synth " + kExampleFile + " --xi -100 -m 4").code == 0);
  CHECK(run_binary("synth " + kExampleFile + " --xi -100 -m 3").code == 2);
  CHECK(run_binary("verify " + kExampleFile + " --xi -100 --samples 200").code == 0);
  CHECK(run_binary("nonsense").code == 2);
  CHECK(run_binary("synth").code == 2);  // missing required arguments
  CHECK(run_binary("inspect /does/not/exist.s3p").code == 2);
}

TEST_CASE("binary writes identical bytes for repeated seeded runs") {
  const std::string args = "capacity " + kExampleFile +
                           " --xi -100 --snr 0:20:10 --realizations 20 --symbols 20 "
                           "--seed 4 --efficiency 0.56";
  const auto first = run_binary(args);
  const auto second = run_binary(args);
  REQUIRE(first.code == 0);
  CHECK(first.output == second.output);
}

TEST_CASE("binary reads option defaults from a config file") {
  const auto cfg = write_temp("bsmimo_cfg.conf", "[synth]\nxi=-100\norder=2\nformat=csv\n");
  const auto result = run_binary("synth " + kExampleFile + " --config " + cfg.string());
  REQUIRE(result.code == 0);
  CHECK(result.output.find("# order = 2") != std::string::npos);
  CHECK(result.output.find("state,s_r_re") != std::string::npos);

  // command-line values win over the config file
  const auto overridden =
      run_binary("synth " + kExampleFile + " --config " + cfg.string() + " -m 4");
  REQUIRE(overridden.code == 0);
  CHECK(overridden.output.find("# order = 4") != std::string::npos);
}

TEST_CASE("binary honors --out and --format") {
  const auto out_path = std::filesystem::temp_directory_path() / "bsmimo_out.csv";
  std::filesystem::remove(out_path);
  const auto result = run_binary("synth " + kExampleFile +
                                 " --xi -100 --format csv --out " + out_path.string());
  REQUIRE(result.code == 0);
  std::ifstream file(out_path);
  REQUIRE(file.good());
  std::stringstream body;
  body << file.rdbuf();
  CHECK(body.str().find("state,s_r_re") != std::string::npos);
}
