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

#ifndef BSMIMO_SYNTHESIS_HPP
#define BSMIMO_SYNTHESIS_HPP

#include "bsmimo/rng.hpp"
#include "bsmimo/symmetric3.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace bsm {

inline constexpr double default_reactive_tol = 1e-8;
inline constexpr double default_matching_tol = 1e-10;
inline constexpr int default_scan_points = 720;

namespace detail {

/// Wrap an angle to (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar theta) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  theta -= two_pi * std::round(theta / two_pi);
  if (theta <= -std::numbers::pi_v<Scalar>) theta += two_pi;
  return theta;
}

}  // namespace detail

/// Canonical key of a unit-magnitude symbol ratio: the phase as a fraction of
/// a full turn, rounded to 12 decimals, so equal ratios key identically even
/// across the -pi/pi seam.
template <typename Scalar>
std::int64_t ratio_key(std::complex<Scalar> s_r) {
  constexpr std::int64_t turn = 1'000'000'000'000LL;
  double frac = std::atan2(double(s_r.imag()), double(s_r.real())) /
                (2.0 * std::numbers::pi);
  if (frac < 0) frac += 1.0;
  return std::llround(frac * double(turn)) % turn;
}

/// M-PSK signal constellation with its Gray bit mapping. The 4-ary map uses
/// the diagonal convention (first bit selects the real sign, second bit the
/// imaginary sign); other orders place symbol k at phase 2 pi k / M with the
/// binary-reflected Gray code k ^ (k >> 1) as its bit pattern.
template <typename Scalar = double>
struct PskConstellation {
  using Complex = std::complex<Scalar>;

  int order{};
  std::vector<Complex> symbols;        // symbols[k], counter-clockwise
  std::vector<unsigned> bits_of;       // bit pattern of symbols[k], MSB first
  std::vector<int> index_of_bits;      // inverse of bits_of

  int bits_per_symbol() const {
    int b = 0;
    for (int m = order; m > 1; m >>= 1) ++b;
    return b;
  }

  static PskConstellation make(int m) {
    if (m < 2 || (m & (m - 1)) != 0)
      throw std::invalid_argument("PSK order must be a power of two >= 2, got " +
                                  std::to_string(m));
    PskConstellation c;
    c.order = m;
    c.symbols.resize(m);
    c.bits_of.resize(m);
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    if (m == 4) {
      const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
      c.symbols = {Complex(s, s), Complex(-s, s), Complex(-s, -s), Complex(s, -s)};
      c.bits_of = {0b11u, 0b01u, 0b00u, 0b10u};
    } else {
      for (int k = 0; k < m; ++k) {
        // exact axis points and exact antipodes keep the ratio set closed
        // under negation without rounding residue
        if (2 * k >= m)
          c.symbols[k] = -c.symbols[k - m / 2];
        else if (k == 0)
          c.symbols[k] = Complex(1, 0);
        else if (4 * k == m)
          c.symbols[k] = Complex(0, 1);
        else
          c.symbols[k] = std::polar(Scalar(1), Scalar(2) * pi * Scalar(k) / Scalar(m));
        c.bits_of[k] = unsigned(k) ^ (unsigned(k) >> 1);
      }
    }
    c.index_of_bits.assign(m, -1);
    for (int k = 0; k < m; ++k) c.index_of_bits[c.bits_of[k]] = k;
    return c;
  }

  Complex symbol_for_bits(const std::vector<std::uint8_t>& bits, std::size_t offset) const {
    unsigned packed = 0;
    for (int i = 0; i < bits_per_symbol(); ++i) {
      const std::uint8_t b = bits.at(offset + std::size_t(i));
      if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
      packed = (packed << 1) | b;
    }
    return symbols[std::size_t(index_of_bits[packed])];
  }
};

/// One symbol-combination ratio with its system-state label.
template <typename Scalar = double>
struct RatioState {
  std::complex<Scalar> s_r;
  int state{};
};

/// The distinct symbol ratios of a constellation with deterministic state
/// labels: the 4-ary convention is {-1 -> 1, +1 -> 2, +j -> 3, -j -> 4};
/// other orders number states by ascending principal phase of s_r.
template <typename Scalar>
std::vector<RatioState<Scalar>> ratio_states(const PskConstellation<Scalar>& c) {
  std::vector<std::complex<Scalar>> ratios;
  std::vector<std::int64_t> keys;
  for (const auto& num : c.symbols)
    for (const auto& den : c.symbols) {
      const auto r = num / den;
      const auto key = ratio_key(r);
      bool seen = false;
      for (const auto k : keys) seen = seen || (k == key);
      if (!seen) {
        ratios.push_back(r);
        keys.push_back(key);
      }
    }
  if (int(ratios.size()) != c.order)
    throw std::logic_error("constellation ratio set does not have order-many values");

  std::vector<RatioState<Scalar>> states(ratios.size());
  if (c.order == 4) {
    constexpr std::int64_t quarter = 250'000'000'000LL;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      int state = 0;
      if (keys[i] == 2 * quarter) state = 1;        // s_r = -1
      else if (keys[i] == 0) state = 2;             // s_r = +1
      else if (keys[i] == quarter) state = 3;       // s_r = +j
      else if (keys[i] == 3 * quarter) state = 4;   // s_r = -j
      else throw std::logic_error("unexpected 4-ary ratio key");
      states[i] = {ratios[i], state};
    }
  } else {
    std::vector<std::size_t> idx(ratios.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::arg(ratios[a]) < std::arg(ratios[b]);
    });
    for (std::size_t rank = 0; rank < idx.size(); ++rank)
      states[idx[rank]] = {ratios[idx[rank]], int(rank) + 1};
  }
  std::sort(states.begin(), states.end(),
            [](const auto& a, const auto& b) { return a.state < b.state; });
  return states;
}

template <typename Scalar = double>
struct MappedSymbols {
  std::complex<Scalar> x1, x2, s_r;
  int state{};
};

/// Map a transmit bit vector onto the two baseband symbols, their combination
/// ratio s_r = x2 / x1, and the system state driving the control loads.
template <typename Scalar>
MappedSymbols<Scalar> map_symbols(const PskConstellation<Scalar>& c,
                                  const std::vector<std::uint8_t>& bits) {
  const std::size_t half = std::size_t(c.bits_per_symbol());
  if (bits.size() != 2 * half)
    throw std::invalid_argument("expected " + std::to_string(2 * half) +
                                " bits, got " + std::to_string(bits.size()));
  MappedSymbols<Scalar> out;
  out.x1 = c.symbol_for_bits(bits, 0);
  out.x2 = c.symbol_for_bits(bits, half);
  out.s_r = out.x2 / out.x1;
  const auto key = ratio_key(out.s_r);
  for (const auto& rs : ratio_states(c))
    if (ratio_key(rs.s_r) == key) {
      out.state = rs.state;
      return out;
    }
  throw std::logic_error("symbol ratio not present in the constellation ratio set");
}

/// Control-port reflection coefficients multiplexing the symbol ratio s_r
/// onto the basis defined by (gamma_i, gamma_ii):
///
///   G1 = [Gii (1+s_r) + Gi (1-s_r) - 2 Gi Gii D] / [2 - (Gi (1+s_r) + Gii (1-s_r)) D]
///   G2 = [Gii (1-s_r) + Gi (1+s_r) - 2 Gi Gii D] / [2 - (Gi (1-s_r) + Gii (1+s_r)) D]
///
/// with D = S11 - S21. Negating s_r exchanges the two outputs. General
/// complex ratios are accepted; the results are then not necessarily
/// unimodular.
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> solve_loads(
    const SymmetricThreePort<Scalar>& a, std::complex<Scalar> gamma_i,
    std::complex<Scalar> gamma_ii, std::complex<Scalar> s_r,
    Scalar singular_tol = Scalar(default_singular_tol)) {
  using C = std::complex<Scalar>;
  const C d = a.delta();
  const C one(1), two(2);
  const C num1 = gamma_ii * (one + s_r) + gamma_i * (one - s_r) - two * gamma_i * gamma_ii * d;
  const C den1 = two - (gamma_i * (one + s_r) + gamma_ii * (one - s_r)) * d;
  const C num2 = gamma_ii * (one - s_r) + gamma_i * (one + s_r) - two * gamma_i * gamma_ii * d;
  const C den2 = two - (gamma_i * (one - s_r) + gamma_ii * (one + s_r)) * d;
  if (std::abs(den1) <= singular_tol || std::abs(den2) <= singular_tol) {
    std::ostringstream msg;
    msg << "singular load equations for ratio (" << s_r.real() << ", " << s_r.imag()
        << "): denominators " << std::abs(den1) << ", " << std::abs(den2);
    throw std::domain_error(msg.str());
  }
  return {num1 / den1, num2 / den2};
}

/// Residual of the reactive pairing condition between the basis load phases,
///   cos[(tI - tII)/2] - (2|D| / (1 + |D|^2)) cos[arg D + (tI + tII)/2].
/// A zero residual makes every PSK load of the synthesized table unimodular.
template <typename Scalar>
Scalar reactive_pairing_residual(const SymmetricThreePort<Scalar>& a, Scalar theta_i,
                                 Scalar theta_ii) {
  const Scalar ad = std::abs(a.delta());
  const Scalar k = Scalar(2) * ad / (Scalar(1) + ad * ad);
  const Scalar thd = std::arg(a.delta());
  return std::cos((theta_i - theta_ii) / Scalar(2)) -
         k * std::cos(thd + (theta_i + theta_ii) / Scalar(2));
}

/// Residuals of the two unimodularity constraints for a general combination
/// ratio. For |s_r| = 1 both residuals coincide; away from the unit circle
/// they generically differ, which is what rules out reactive loads for
/// non-PSK ratios.
template <typename Scalar>
std::pair<Scalar, Scalar> psk_constraint_residuals(const SymmetricThreePort<Scalar>& a,
                                                   Scalar theta_i, Scalar theta_ii,
                                                   std::complex<Scalar> s_r) {
  const Scalar common = reactive_pairing_residual(a, theta_i, theta_ii);
  const Scalar ad = std::abs(a.delta());
  const Scalar mag = std::abs(s_r);
  const Scalar unit_defect = Scalar(1) - mag * mag;
  Scalar term = Scalar(0);
  if (unit_defect != Scalar(0)) {
    const Scalar sin_ratio_phase = std::sin(std::arg(s_r));
    if (sin_ratio_phase == Scalar(0))
      throw std::invalid_argument(
          "constraint residuals undefined for a real ratio off the unit circle");
    term = (Scalar(1) - ad * ad) / (Scalar(1) + ad * ad) * unit_defect /
           (Scalar(2) * mag) * std::sin((theta_i - theta_ii) / Scalar(2)) /
           sin_ratio_phase;
  }
  return {common - term, common + term};
}

/// Result of pairing a basis reactance with its reactive partner.
template <typename Scalar = double>
struct ReactivePartner {
  Scalar theta_i{}, theta_ii{};
  std::complex<Scalar> gamma_i{}, gamma_ii{};
  std::optional<Scalar> x_ii;  // disengaged when the partner is an open circuit
  int root_count{1};           // pairing-equation roots bracketed on the scan grid
};

/// Solve the reactive pairing condition for the partner reactance of x_i.
/// The residual is scanned on a uniform grid over (-pi, pi] and each sign
/// change is refined by bisection to 1e-13. When several roots appear, the
/// one nearest branch_hint is kept; without a hint, the root nearest
/// theta_i + pi, matching the vanishing-coupling limit.
template <typename Scalar>
ReactivePartner<Scalar> reactive_partner(const SymmetricThreePort<Scalar>& a, Scalar x_i,
                                         std::optional<Scalar> branch_hint = std::nullopt,
                                         int scan_points = default_scan_points) {
  if (std::abs(a.delta()) == Scalar(0))
    throw std::domain_error(
        "coupling difference S11 - S21 vanishes; the reactive pairing is the "
        "antiphase map and no unique partner equation exists");
  if (scan_points < 8) throw std::invalid_argument("scan grid too coarse");

  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const std::complex<Scalar> gamma_i = gamma_from_reactance(x_i, a.z0);
  const Scalar theta_i = std::arg(gamma_i);
  const auto residual = [&](Scalar theta) {
    return reactive_pairing_residual(a, theta_i, theta);
  };

  const Scalar step = Scalar(2) * pi / Scalar(scan_points);
  Scalar prev_theta = -pi;
  Scalar prev_val = residual(prev_theta);
  Scalar grid_min = prev_val, grid_max = prev_val;
  std::vector<Scalar> roots;
  const Scalar bisect_tol = Scalar(1e-13);
  for (int i = 1; i <= scan_points; ++i) {
    const Scalar theta = (i == scan_points) ? pi : -pi + step * Scalar(i);
    const Scalar val = residual(theta);
    grid_min = std::min(grid_min, val);
    grid_max = std::max(grid_max, val);
    if (prev_val == Scalar(0) || prev_val * val <= Scalar(0)) {
      Scalar lo = prev_theta, hi = theta;
      Scalar flo = prev_val;
      if (flo == Scalar(0)) {
        hi = lo;
      } else {
        while (hi - lo > bisect_tol) {
          const Scalar mid = (lo + hi) / Scalar(2);
          const Scalar fmid = residual(mid);
          if (fmid == Scalar(0)) {
            lo = hi = mid;
            break;
          }
          if ((flo < Scalar(0)) != (fmid < Scalar(0))) {
            hi = mid;
          } else {
            lo = mid;
            flo = fmid;
          }
        }
      }
      const Scalar root = (lo + hi) / Scalar(2);
      if (roots.empty() ||
          std::abs(detail::wrap_angle(root - roots.back())) > Scalar(10) * bisect_tol)
        roots.push_back(root);
    }
    prev_theta = theta;
    prev_val = val;
  }
  // the residual flips sign across the seam, so -pi and pi may report the
  // same root twice
  if (roots.size() > 1 &&
      std::abs(detail::wrap_angle(roots.front() - roots.back())) <= Scalar(10) * bisect_tol)
    roots.pop_back();

  if (roots.empty()) {
    std::ostringstream msg;
    msg << "no sign change of the pairing residual on the scan grid; residual range ["
        << grid_min << ", " << grid_max << "]";
    throw std::domain_error(msg.str());
  }

  const Scalar target = branch_hint ? *branch_hint : theta_i + pi;
  Scalar best = roots.front();
  for (const Scalar root : roots)
    if (std::abs(detail::wrap_angle(root - target)) <
        std::abs(detail::wrap_angle(best - target)))
      best = root;

  const Scalar final_residual = residual(best);
  if (std::abs(final_residual) > Scalar(1e-12)) {
    std::ostringstream msg;
    msg << "pairing root did not converge: residual " << final_residual;
    throw std::domain_error(msg.str());
  }

  ReactivePartner<Scalar> out;
  out.theta_i = theta_i;
  out.theta_ii = best;
  out.gamma_i = gamma_i;
  out.gamma_ii = std::polar(Scalar(1), best);
  out.x_ii = reactance_from_gamma(out.gamma_ii, a.z0);
  out.root_count = int(roots.size());
  return out;
}

/// Control loads for one symbol-combination ratio. Disengaged reactances
/// denote an open circuit.
template <typename Scalar = double>
struct LoadTableEntry {
  std::complex<Scalar> s_r;
  int state{};
  std::complex<Scalar> gamma1, gamma2;
  std::optional<Scalar> x1, x2;
};

/// Complete per-ratio load schedule for one constellation and basis, together
/// with the feed reflection coefficient shared by every state.
template <typename Scalar = double>
struct LoadTable {
  std::vector<LoadTableEntry<Scalar>> entries;  // ordered by state label
  std::complex<Scalar> gamma_tot{};
  BasisPair<Scalar> basis{};

  const LoadTableEntry<Scalar>* find(std::complex<Scalar> s_r) const {
    const auto key = ratio_key(s_r);
    for (const auto& e : entries)
      if (ratio_key(e.s_r) == key) return &e;
    return nullptr;
  }

  const LoadTableEntry<Scalar>& at(std::complex<Scalar> s_r) const {
    if (const auto* e = find(s_r)) return *e;
    throw std::out_of_range("symbol ratio not present in load table");
  }
};

template <typename Scalar = double>
struct SynthesisOptions {
  Scalar reactive_tol{Scalar(default_reactive_tol)};
  Scalar matching_tol{Scalar(default_matching_tol)};
  Scalar singular_tol{Scalar(default_singular_tol)};
};

/// Build the M-state load table from an already-solved reactive basis pair.
template <typename Scalar>
LoadTable<Scalar> synthesize_psk_table(const SymmetricThreePort<Scalar>& a,
                                       const ReactivePartner<Scalar>& partner,
                                       const PskConstellation<Scalar>& c,
                                       const SynthesisOptions<Scalar>& opts = {}) {
  LoadTable<Scalar> table;
  table.basis = basis_from_loads(a, partner.gamma_i, partner.gamma_ii, opts.singular_tol);

  for (const auto& rs : ratio_states(c)) {
    const auto [g1, g2] =
        solve_loads(a, partner.gamma_i, partner.gamma_ii, rs.s_r, opts.singular_tol);
    const Scalar defect =
        std::max(std::abs(std::abs(g1) - Scalar(1)), std::abs(std::abs(g2) - Scalar(1)));
    if (defect > opts.reactive_tol) {
      std::ostringstream msg;
      msg << "state " << rs.state << " load is not purely reactive: ||gamma| - 1| = "
          << defect << "; the basis pair does not satisfy the pairing condition";
      throw std::domain_error(msg.str());
    }
    LoadTableEntry<Scalar> e;
    e.s_r = rs.s_r;
    e.state = rs.state;
    e.gamma1 = g1;
    e.gamma2 = g2;
    e.x1 = reactance_from_gamma(g1, a.z0);
    e.x2 = reactance_from_gamma(g2, a.z0);
    table.entries.push_back(std::move(e));
  }

  table.gamma_tot = total_reflection(a, table.entries.front().gamma1,
                                     table.entries.front().gamma2, opts.singular_tol);
  for (const auto& e : table.entries) {
    const auto gt = total_reflection(a, e.gamma1, e.gamma2, opts.singular_tol);
    if (std::abs(gt - table.gamma_tot) > opts.matching_tol) {
      std::ostringstream msg;
      msg << "state " << e.state << " feed reflection deviates by "
          << std::abs(gt - table.gamma_tot) << " from the shared value";
      throw std::domain_error(msg.str());
    }
  }
  for (const auto& e : table.entries) {
    const auto* mirror = table.find(-e.s_r);
    if (mirror == nullptr || std::abs(mirror->gamma1 - e.gamma2) > Scalar(1e-12) ||
        std::abs(mirror->gamma2 - e.gamma1) > Scalar(1e-12))
      throw std::domain_error("ratio negation does not exchange the port loads");
  }
  return table;
}

/// Solve the reactive basis partner of x_i, then build the load table.
template <typename Scalar>
LoadTable<Scalar> synthesize_psk_table(const SymmetricThreePort<Scalar>& a, Scalar x_i,
                                       const PskConstellation<Scalar>& c,
                                       const SynthesisOptions<Scalar>& opts = {}) {
  return synthesize_psk_table(a, reactive_partner(a, x_i), c, opts);
}

template <typename Scalar = double>
struct MultiplexReport {
  Scalar max_residual{};
  int worst_state{};
  std::vector<std::pair<int, Scalar>> per_state;  // state label, max residual
  int samples{};
};

/// Monte-Carlo check of the multiplexing identity: for random symbol pairs
/// (s1, s2) with s2/s1 in the table, feeding s1 into the active port must
/// reproduce s1 v_b1 + s2 v_b2 componentwise through the instantaneous
/// pattern vector of the scheduled loads.
template <typename Scalar>
MultiplexReport<Scalar> verify_multiplexing(const SymmetricThreePort<Scalar>& a,
                                            const BasisPair<Scalar>& b,
                                            const LoadTable<Scalar>& t, int samples,
                                            std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sample count must be positive");
  if (t.entries.empty()) throw std::invalid_argument("empty load table");

  MultiplexReport<Scalar> report;
  report.samples = samples;
  for (const auto& e : t.entries) report.per_state.emplace_back(e.state, Scalar(0));

  CounterRng rng(seed, CounterRng::domain_multiplex_check, 0, 0);
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  for (int i = 0; i < samples; ++i) {
    const auto pick = std::size_t(rng.uniform() * double(t.entries.size()));
    const auto& e = t.entries[std::min(pick, t.entries.size() - 1)];
    const std::complex<Scalar> s1 = std::polar(Scalar(1), Scalar(rng.uniform()) * two_pi);
    const std::complex<Scalar> s2 = s1 * e.s_r;

    const auto [l1, l2] = ell_coefficients(a, e.gamma1, e.gamma2);
    const Vector3c<Scalar> lhs = s1 * pattern_vector(l1, l2);
    const Vector3c<Scalar> rhs = s1 * b.v_b1() + s2 * b.v_b2();
    const Scalar resid = (lhs - rhs).template lpNorm<Eigen::Infinity>();

    for (auto& [state, worst] : report.per_state)
      if (state == e.state) worst = std::max(worst, resid);
    if (resid > report.max_residual) {
      report.max_residual = resid;
      report.worst_state = e.state;
    }
  }
  return report;
}

template <typename Scalar = double>
struct MatchingReport {
  std::complex<Scalar> gamma_tot{};    // feed reflection of the first state
  Scalar max_spread{};                 // max pairwise deviation across states
  std::complex<Scalar> closed_form{};  // S-parameter-only prediction
  Scalar max_closed_form_dev{};
};

/// Evaluate the feed reflection at every table entry. For a reactive table
/// the shared value must also match the closed form
///   S00 + S01^2 2 D* / (1 - D* (S11 + S21)),
/// which depends on the scattering parameters only; disagreement beyond
/// closed_form_tol is rejected.
template <typename Scalar>
MatchingReport<Scalar> constant_matching(const SymmetricThreePort<Scalar>& a,
                                         const LoadTable<Scalar>& t,
                                         Scalar closed_form_tol = Scalar(1e-9),
                                         Scalar reactive_tol = Scalar(default_reactive_tol)) {
  if (t.entries.empty()) throw std::invalid_argument("empty load table");

  std::vector<std::complex<Scalar>> gts;
  bool reactive = true;
  for (const auto& e : t.entries) {
    gts.push_back(total_reflection(a, e.gamma1, e.gamma2));
    reactive = reactive && std::abs(std::abs(e.gamma1) - Scalar(1)) <= reactive_tol &&
               std::abs(std::abs(e.gamma2) - Scalar(1)) <= reactive_tol;
  }

  MatchingReport<Scalar> report;
  report.gamma_tot = gts.front();
  for (std::size_t i = 0; i < gts.size(); ++i)
    for (std::size_t j = i + 1; j < gts.size(); ++j)
      report.max_spread = std::max(report.max_spread, std::abs(gts[i] - gts[j]));

  const std::complex<Scalar> d = a.delta();
  report.closed_form = a.s00 + a.s01 * a.s01 * Scalar(2) * std::conj(d) /
                                   (std::complex<Scalar>(1) -
                                    std::conj(d) * (a.s11 + a.s21));
  for (const auto& gt : gts)
    report.max_closed_form_dev =
        std::max(report.max_closed_form_dev, std::abs(gt - report.closed_form));

  if (reactive && report.max_closed_form_dev > closed_form_tol) {
    std::ostringstream msg;
    msg << "reactive table disagrees with the closed-form feed reflection by "
        << report.max_closed_form_dev;
    throw std::domain_error(msg.str());
  }
  return report;
}

template <typename Scalar = double>
struct SweepRow {
  Scalar x_i{};
  bool ok{false};
  std::string message;  // failure reason when !ok
  std::optional<Scalar> x_ii;
  std::vector<std::optional<Scalar>> x1_by_state;  // port-1 reactance per state
  Scalar gamma_tot_mag{};
  Scalar return_loss_db{};
  Scalar r{};
  int root_count{1};
};

template <typename Scalar = double>
struct SweepResult {
  std::vector<SweepRow<Scalar>> rows;
  int states{};
};

/// Tabulate the load schedule over a grid of basis reactances. Failed grid
/// points are recorded with their failure reason and the sweep continues; the
/// pairing root is tracked continuously from the previous successful point.
template <typename Scalar>
SweepResult<Scalar> sweep_reactances(const SymmetricThreePort<Scalar>& a,
                                     const std::vector<Scalar>& x_i_grid,
                                     const PskConstellation<Scalar>& c,
                                     const SynthesisOptions<Scalar>& opts = {}) {
  if (x_i_grid.empty()) throw std::invalid_argument("empty reactance grid");
  for (std::size_t i = 0; i < x_i_grid.size(); ++i)
    for (std::size_t j = i + 1; j < x_i_grid.size(); ++j)
      if (x_i_grid[i] == x_i_grid[j])
        throw std::invalid_argument("reactance grid values must be distinct");

  SweepResult<Scalar> result;
  result.states = c.order;
  std::optional<Scalar> hint;
  for (const Scalar x : x_i_grid) {
    SweepRow<Scalar> row;
    row.x_i = x;
    try {
      const auto partner = reactive_partner(a, x, hint);
      const auto table = synthesize_psk_table(a, partner, c, opts);
      const auto powers = basis_powers_lossless(a, table.basis);
      hint = partner.theta_ii;

      row.ok = true;
      row.x_ii = partner.x_ii;
      row.root_count = partner.root_count;
      row.x1_by_state.reserve(table.entries.size());
      for (const auto& e : table.entries) row.x1_by_state.push_back(e.x1);
      row.gamma_tot_mag = std::abs(table.gamma_tot);
      row.return_loss_db = -Scalar(20) * std::log10(row.gamma_tot_mag);
      row.r = powers.r;
    } catch (const std::exception& e) {
      row.message = e.what();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace bsm

#endif  // BSMIMO_SYNTHESIS_HPP
