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

#include "bsmimo/channel.hpp"
#include "bsmimo/synthesis.hpp"
#include "bsmimo/touchstone.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>

namespace bsm::cli {

using json = nlohmann::json;

ToleranceOptions::ToleranceOptions()
    : sym_tol(default_sym_tol),
      passivity_tol(default_passivity_tol),
      singular_tol(default_singular_tol),
      reactive_tol(default_reactive_tol) {}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Tabular document rendered to either JSON or '#'-commented CSV with the
// same column names and values.
struct OutputDoc {
  json meta = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void write(const std::string& format, std::ostream& out) const {
    if (format == "csv")
      write_csv(out);
    else
      write_json(out);
  }

  void write_json(std::ostream& out) const {
    json doc;
    doc["meta"] = meta;
    doc["rows"] = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
      doc["rows"].push_back(std::move(obj));
    }
    out << doc.dump(2) << "\n";
  }

  void write_csv(std::ostream& out) const {
    for (auto it = meta.begin(); it != meta.end(); ++it) {
      out << "# " << it.key() << " = ";
      if (it.value().is_number_float())
        out << format_number(it.value().get<double>());
      else if (it.value().is_string())
        out << it.value().get<std::string>();
      else
        out << it.value().dump();  // integers print exactly, null as-is
      out << "\n";
    }
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << columns[i] << (i + 1 < columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        const auto& v = row[i];
        if (v.is_number())
          out << format_number(v.get<double>());
        else if (v.is_null())
          out << "inf";
        else if (v.is_string())
          out << v.get<std::string>();
        else
          out << v.dump();
        out << (i + 1 < row.size() ? "," : "");
      }
      out << "\n";
    }
  }
};

json optional_reactance(const std::optional<double>& x) {
  return x ? json(*x) : json();
}

struct LoadedRadiator {
  SymmetricThreePort<double> antenna;
  ScatteringMatrix<double> net;
  double freq;
  std::size_t points;
};

LoadedRadiator load_radiator(const std::string& path, std::optional<double> freq,
                             const ToleranceOptions& tol) {
  const auto nets = parse_touchstone_file<double>(path, 3);
  std::size_t pick = 0;
  if (freq) {
    double best = std::abs(*nets[0].freq - *freq);
    for (std::size_t i = 1; i < nets.size(); ++i) {
      const double dev = std::abs(*nets[i].freq - *freq);
      if (dev < best) {
        best = dev;
        pick = i;
      }
    }
  }
  const auto& net = nets[pick];
  require_passive(net, tol.passivity_tol);
  return {reduce_symmetric(net, tol.sym_tol), net, *net.freq, nets.size()};
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const TouchstoneError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation_failure;
  }
}

}  // namespace

std::string format_complex(std::complex<double> value) {
  return format_number(value.real()) + (value.imag() < 0 ? "-" : "+") +
         format_number(std::abs(value.imag())) + "j";
}

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> fields;
  std::size_t begin = 0;
  while (true) {
    const auto colon = spec.find(':', begin);
    const std::string tok = spec.substr(begin, colon - begin);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end == tok.c_str() || *end != '\0')
      throw std::invalid_argument("invalid range value '" + tok + "' in '" + spec + "'");
    fields.push_back(v);
    if (colon == std::string::npos) break;
    begin = colon + 1;
  }
  if (fields.size() == 1) return fields;
  if (fields.size() != 3)
    throw std::invalid_argument("range must be a value or start:stop:step, got '" +
                                spec + "'");
  const double start = fields[0], stop = fields[1], step = fields[2];
  if (step == 0) throw std::invalid_argument("range step must be nonzero");
  if ((stop - start) * step < 0)
    throw std::invalid_argument("empty range '" + spec + "'");
  std::vector<double> grid;
  const double slack = std::abs(step) * 1e-9;
  for (std::size_t k = 0;; ++k) {
    const double v = start + double(k) * step;
    if (step > 0 ? v > stop + slack : v < stop - slack) break;
    grid.push_back(v);
  }
  return grid;
}

int cmd_inspect(const InspectOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const auto nets = parse_touchstone_file<double>(opt.input, 3);

    OutputDoc doc;
    doc.meta["input"] = opt.input;
    doc.meta["ports"] = 3;
    doc.meta["frequency_points"] = nets.size();
    doc.columns = {"freq_hz",        "z0_ohm",          "passivity_margin",
                   "symmetry_residual", "gamma_matched_re", "gamma_matched_im",
                   "p_rad_port0",    "p_rad_port1",     "p_rad_port2"};

    bool passive = true;
    for (const auto& net : nets) {
      const double margin = passivity_margin(net);
      passive = passive && margin >= -opt.tol.passivity_tol;
      doc.rows.push_back({*net.freq, net.z0, margin, symmetry_residual(net),
                          net.entries(0, 0).real(), net.entries(0, 0).imag(),
                          radiated_power_per_port(net, 0),
                          radiated_power_per_port(net, 1),
                          radiated_power_per_port(net, 2)});
    }
    doc.write(opt.format, out);
    if (!passive) {
      err << "error: passivity violation beyond tolerance " << opt.tol.passivity_tol
          << "\n";
      return exit_validation_failure;
    }
    return exit_ok;
  });
}

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const auto loaded = load_radiator(opt.input, opt.freq, opt.tol);
    const auto& antenna = loaded.antenna;
    const auto constellation = PskConstellation<double>::make(opt.order);

    SynthesisOptions<double> sopt;
    sopt.reactive_tol = opt.tol.reactive_tol;
    sopt.singular_tol = opt.tol.singular_tol;
    const auto partner = reactive_partner(antenna, opt.x_i);
    const auto table = synthesize_psk_table(antenna, partner, constellation, sopt);
    const auto match = constant_matching(antenna, table);
    const auto powers = basis_powers_lossless(antenna, table.basis);

    OutputDoc doc;
    doc.meta["input"] = opt.input;
    doc.meta["freq_hz"] = loaded.freq;
    doc.meta["z0_ohm"] = antenna.z0;
    doc.meta["order"] = opt.order;
    doc.meta["x_i_ohm"] = opt.x_i;
    doc.meta["x_ii_ohm"] = optional_reactance(partner.x_ii);
    doc.meta["pairing_root_count"] = partner.root_count;
    doc.meta["gamma_tot_re"] = table.gamma_tot.real();
    doc.meta["gamma_tot_im"] = table.gamma_tot.imag();
    doc.meta["gamma_tot_mag"] = std::abs(table.gamma_tot);
    doc.meta["return_loss_db"] = -20.0 * std::log10(std::abs(table.gamma_tot));
    doc.meta["matching_spread"] = match.max_spread;
    doc.meta["r_lossless"] = powers.r;
    doc.meta["p_b1"] = powers.p_b1;
    doc.meta["p_b2"] = powers.p_b2;

    doc.columns = {"state",     "s_r_re",    "s_r_im",    "s_r_phase_deg",
                   "gamma1_re", "gamma1_im", "gamma2_re", "gamma2_im",
                   "x1_ohm",    "x2_ohm"};
    for (const auto& e : table.entries)
      doc.rows.push_back({e.state, e.s_r.real(), e.s_r.imag(),
                          std::arg(e.s_r) * 180.0 / std::numbers::pi,
                          e.gamma1.real(), e.gamma1.imag(), e.gamma2.real(),
                          e.gamma2.imag(), optional_reactance(e.x1),
                          optional_reactance(e.x2)});
    doc.write(opt.format, out);
    return exit_ok;
  });
}

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const auto grid = parse_range(opt.range);
    const auto loaded = load_radiator(opt.input, opt.freq, opt.tol);
    const auto constellation = PskConstellation<double>::make(opt.order);

    SynthesisOptions<double> sopt;
    sopt.reactive_tol = opt.tol.reactive_tol;
    sopt.singular_tol = opt.tol.singular_tol;
    const auto sweep = sweep_reactances(loaded.antenna, grid, constellation, sopt);

    OutputDoc doc;
    doc.meta["input"] = opt.input;
    doc.meta["freq_hz"] = loaded.freq;
    doc.meta["order"] = opt.order;
    doc.meta["range"] = opt.range;

    doc.columns = {"x_i_ohm", "status", "x_ii_ohm"};
    for (int s = 1; s <= sweep.states; ++s)
      doc.columns.push_back("x1_state_" + std::to_string(s) + "_ohm");
    doc.columns.insert(doc.columns.end(),
                       {"gamma_tot_mag", "return_loss_db", "r_lossless", "message"});

    bool any_ok = false;
    for (const auto& row : sweep.rows) {
      any_ok = any_ok || row.ok;
      std::vector<json> cells{row.x_i, row.ok ? "ok" : "failed"};
      if (row.ok) {
        cells.push_back(optional_reactance(row.x_ii));
        for (const auto& x : row.x1_by_state) cells.push_back(optional_reactance(x));
        cells.push_back(row.gamma_tot_mag);
        cells.push_back(row.return_loss_db);
        cells.push_back(row.r);
        cells.push_back("");
      } else {
        for (int s = 0; s < sweep.states + 4; ++s) cells.push_back("");
        cells.back() = row.message;
      }
      doc.rows.push_back(std::move(cells));
    }
    doc.write(opt.format, out);
    if (!any_ok) {
      err << "error: every grid point failed\n";
      return exit_validation_failure;
    }
    return exit_ok;
  });
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const auto loaded = load_radiator(opt.input, opt.freq, opt.tol);
    const auto& antenna = loaded.antenna;
    const auto constellation = PskConstellation<double>::make(opt.order);

    SynthesisOptions<double> sopt;
    sopt.reactive_tol = opt.tol.reactive_tol;
    sopt.singular_tol = opt.tol.singular_tol;
    const auto partner = reactive_partner(antenna, opt.x_i);
    const auto table = synthesize_psk_table(antenna, partner, constellation, sopt);

    const auto multiplex =
        verify_multiplexing(antenna, table.basis, table, opt.samples, opt.seed);
    const auto match = constant_matching(antenna, table);
    const auto coupling =
        basis_coupling(beam_coupling_lossless(expand(antenna)), table.basis);
    // plain dot product, no conjugation
    const auto basis_dot = table.basis.v_b1().cwiseProduct(table.basis.v_b2()).sum();
    double reactive_defect = 0.0;
    for (const auto& e : table.entries) {
      reactive_defect = std::max(reactive_defect, std::abs(std::abs(e.gamma1) - 1.0));
      reactive_defect = std::max(reactive_defect, std::abs(std::abs(e.gamma2) - 1.0));
    }

    struct Check {
      const char* name;
      double value;
      double tolerance;
    };
    const Check checks[] = {
        {"multiplexing_max_residual", multiplex.max_residual, 1e-9},
        {"matching_spread", match.max_spread, 1e-10},
        {"matching_closed_form_dev", match.max_closed_form_dev, 1e-9},
        {"basis_coupling_mag", std::abs(coupling), 1e-10},
        {"basis_vector_dot_mag", std::abs(basis_dot), 0.0},
        {"reactivity_defect", reactive_defect, opt.tol.reactive_tol},
    };

    OutputDoc doc;
    doc.meta["input"] = opt.input;
    doc.meta["freq_hz"] = loaded.freq;
    doc.meta["order"] = opt.order;
    doc.meta["x_i_ohm"] = opt.x_i;
    doc.meta["samples"] = opt.samples;
    doc.meta["seed"] = opt.seed;
    doc.meta["gamma_tot"] = format_complex(match.gamma_tot);
    doc.columns = {"check", "value", "tolerance", "pass"};

    bool all_pass = true;
    for (const auto& c : checks) {
      const bool pass = c.value <= c.tolerance;
      all_pass = all_pass && pass;
      doc.rows.push_back({c.name, c.value, c.tolerance, pass ? "pass" : "fail"});
    }
    doc.write(opt.format, out);
    if (!all_pass) {
      for (const auto& c : checks)
        if (c.value > c.tolerance)
          err << "error: check '" << c.name << "' failed: " << c.value << " > "
              << c.tolerance << "\n";
      return exit_validation_failure;
    }
    return exit_ok;
  });
}

int cmd_capacity(const CapacityOptions& opt, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const auto snr_grid = parse_range(opt.snr_range);
    const auto loaded = load_radiator(opt.input, opt.freq, opt.tol);
    const auto& antenna = loaded.antenna;

    const auto partner = reactive_partner(antenna, opt.x_i);
    const auto basis =
        basis_from_loads(antenna, partner.gamma_i, partner.gamma_ii, opt.tol.singular_tol);
    const auto powers = basis_powers_lossless(antenna, basis);

    ChannelConfig<double> cfg;
    cfg.snr_grid_db = snr_grid;
    cfg.n_realizations = opt.realizations;
    cfg.n_symbols = opt.symbols;
    cfg.seed = opt.seed;
    cfg.efficiency = opt.efficiency;
    const auto result = capacity_curves(powers, cfg);

    OutputDoc doc;
    doc.meta["input"] = opt.input;
    doc.meta["freq_hz"] = loaded.freq;
    doc.meta["x_i_ohm"] = opt.x_i;
    doc.meta["p_b1"] = powers.p_b1;
    doc.meta["p_b2"] = powers.p_b2;
    doc.meta["r_lossless"] = powers.r;
    doc.meta["efficiency"] = opt.efficiency;
    doc.meta["realizations"] = opt.realizations;
    doc.meta["symbols"] = opt.symbols;
    doc.meta["seed"] = opt.seed;
    doc.meta["snr_convention"] = result.snr_convention;
    doc.meta["estimator"] = result.estimator;

    doc.columns = {"snr_db",           "gaussian_bits",      "qpsk_mi_bits",
                   "iid_gaussian_bits", "siso_gaussian_bits", "siso_qpsk_mi_bits"};
    for (const auto& row : result.rows)
      doc.rows.push_back({row.snr_db, row.gaussian_bits, row.qpsk_mi_bits,
                          row.iid_gaussian_bits, row.siso_gaussian_bits,
                          row.siso_qpsk_mi_bits});
    doc.write(opt.format, out);
    return exit_ok;
  });
}

}  // namespace bsm::cli
