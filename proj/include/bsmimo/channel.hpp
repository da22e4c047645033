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

#ifndef BSMIMO_CHANNEL_HPP
#define BSMIMO_CHANNEL_HPP

#include "bsmimo/rng.hpp"
#include "bsmimo/symmetric3.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsm {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

/// Diagonal transmit covariance of the two beam-space streams. Off-diagonal
/// terms vanish because the basis patterns are orthogonal.
template <typename Scalar = double>
struct TransmitCovariance {
  Scalar p_b1{1}, p_b2{1};
  Scalar p_in{1};
};

template <typename Scalar = double>
struct ChannelConfig {
  std::vector<Scalar> snr_grid_db;
  int n_realizations{2000};
  int n_symbols{1000};
  std::uint64_t seed{1};
  Scalar efficiency{1};
};

template <typename Scalar = double>
struct CapacityRow {
  Scalar snr_db{};
  Scalar gaussian_bits{};
  Scalar qpsk_mi_bits{};
  Scalar iid_gaussian_bits{};
  Scalar siso_gaussian_bits{};
  Scalar siso_qpsk_mi_bits{};
};

template <typename Scalar = double>
struct CapacityResult {
  std::vector<CapacityRow<Scalar>> rows;
  ChannelConfig<Scalar> config;
  TransmitCovariance<Scalar> covariance;  // before the efficiency scale
  std::string snr_convention;
  std::string estimator;
};

namespace detail {

template <typename Scalar>
std::complex<Scalar> qpsk_point(int k) {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  switch (k & 3) {
    case 0: return {s, s};
    case 1: return {-s, s};
    case 2: return {-s, -s};
    default: return {s, -s};
  }
}

}  // namespace detail

/// One correlated Rayleigh draw H_w R_T^{1/2}, where H_w has i.i.d. unit
/// variance circularly symmetric complex Gaussian entries drawn row-major.
template <typename Scalar>
Matrix2c<Scalar> kronecker_realization(const TransmitCovariance<Scalar>& rt,
                                       CounterRng& rng) {
  if (rt.p_b1 < Scalar(0) || rt.p_b2 < Scalar(0) || rt.p_in < Scalar(0))
    throw std::invalid_argument("covariance entries must be non-negative");
  Matrix2c<Scalar> hw;
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col) {
      const auto g = rng.complex_gaussian();
      hw(row, col) = std::complex<Scalar>(Scalar(g.real()), Scalar(g.imag()));
    }
  hw.col(0) *= std::sqrt(rt.p_in * rt.p_b1);
  hw.col(1) *= std::sqrt(rt.p_in * rt.p_b2);
  return hw;
}

/// Gaussian-input capacity log2 det(I + (snr/2) H H^H) in bits, with the
/// total transmit SNR split equally across the two streams.
template <typename Scalar>
Scalar gaussian_capacity(const Matrix2c<Scalar>& h, Scalar snr_linear) {
  if (snr_linear < Scalar(0)) throw std::invalid_argument("SNR must be non-negative");
  const Matrix2c<Scalar> m = Matrix2c<Scalar>::Identity() +
                             (snr_linear / Scalar(2)) * (h * h.adjoint());
  return std::log2(m.determinant().real());
}

/// Monte-Carlo mutual information of a uniform 16-point QPSK pair input over
/// y = sqrt(snr/2) H x + n with unit-variance complex Gaussian noise per
/// receive branch:
///
///   I = log2 16 - (1/N) sum_n log2 sum_x' exp(-(|y - Hx'|^2 - |n|^2))
///
/// The symbol and noise streams are addressed per (realization, symbol), so
/// the estimate is independent of evaluation order and reuses the same draws
/// at every SNR.
template <typename Scalar>
Scalar qpsk_mutual_information(const Matrix2c<Scalar>& h, Scalar snr_linear,
                               int n_symbols, std::uint64_t seed,
                               std::uint32_t realization) {
  if (n_symbols < 1) throw std::invalid_argument("symbol count must be positive");
  if (snr_linear < Scalar(0)) throw std::invalid_argument("SNR must be non-negative");

  const Scalar scale = std::sqrt(snr_linear / Scalar(2));
  std::array<Vector2c<Scalar>, 16> candidates;
  for (int k = 0; k < 16; ++k) {
    const Vector2c<Scalar> x(detail::qpsk_point<Scalar>(k / 4),
                             detail::qpsk_point<Scalar>(k % 4));
    candidates[k] = scale * (h * x);
  }

  Scalar acc = Scalar(0);
  for (int t = 0; t < n_symbols; ++t) {
    CounterRng symbol_rng(seed, CounterRng::domain_channel_symbols, realization,
                          std::uint32_t(t));
    CounterRng noise_rng(seed, CounterRng::domain_channel_noise, realization,
                         std::uint32_t(t));
    const int sent = std::min(15, int(symbol_rng.uniform() * 16.0));
    const auto g0 = noise_rng.complex_gaussian();
    const auto g1 = noise_rng.complex_gaussian();
    const Vector2c<Scalar> noise(std::complex<Scalar>(Scalar(g0.real()), Scalar(g0.imag())),
                                 std::complex<Scalar>(Scalar(g1.real()), Scalar(g1.imag())));
    const Vector2c<Scalar> y = candidates[sent] + noise;
    const Scalar noise_norm = noise.squaredNorm();

    Scalar likelihood_sum = Scalar(0);
    for (const auto& c : candidates)
      likelihood_sum += std::exp(-((y - c).squaredNorm() - noise_norm));
    acc += std::log2(likelihood_sum);
  }
  return Scalar(4) - acc / Scalar(n_symbols);
}

/// Scalar-channel analog of the estimator above for a single QPSK stream
/// carrying the full transmit power.
template <typename Scalar>
Scalar siso_qpsk_mutual_information(std::complex<Scalar> h, Scalar snr_linear,
                                    int n_symbols, std::uint64_t seed,
                                    std::uint32_t realization) {
  if (n_symbols < 1) throw std::invalid_argument("symbol count must be positive");
  const Scalar scale = std::sqrt(snr_linear);
  std::array<std::complex<Scalar>, 4> candidates;
  for (int k = 0; k < 4; ++k) candidates[k] = scale * h * detail::qpsk_point<Scalar>(k);

  Scalar acc = Scalar(0);
  for (int t = 0; t < n_symbols; ++t) {
    CounterRng symbol_rng(seed, CounterRng::domain_siso_symbols, realization,
                          std::uint32_t(t));
    CounterRng noise_rng(seed, CounterRng::domain_siso_noise, realization,
                         std::uint32_t(t));
    const int sent = std::min(3, int(symbol_rng.uniform() * 4.0));
    const auto g = noise_rng.complex_gaussian();
    const std::complex<Scalar> noise(Scalar(g.real()), Scalar(g.imag()));
    const std::complex<Scalar> y = candidates[sent] + noise;
    const Scalar noise_norm = std::norm(noise);

    Scalar likelihood_sum = Scalar(0);
    for (const auto& c : candidates)
      likelihood_sum += std::exp(-(std::norm(y - c) - noise_norm));
    acc += std::log2(likelihood_sum);
  }
  return Scalar(2) - acc / Scalar(n_symbols);
}

/// Ergodic capacity and constellation-constrained mutual information curves
/// of the beam-space link, next to an ideal i.i.d. 2x2 reference and a SISO
/// reference with the same total efficiency. Deterministic for a fixed seed
/// regardless of evaluation order.
template <typename Scalar>
CapacityResult<Scalar> capacity_curves(const TransmitCovariance<Scalar>& rt,
                                       const ChannelConfig<Scalar>& cfg) {
  if (cfg.snr_grid_db.empty()) throw std::invalid_argument("empty SNR grid");
  if (cfg.n_realizations < 1 || cfg.n_symbols < 1)
    throw std::invalid_argument("realization and symbol counts must be positive");
  if (!(cfg.efficiency > Scalar(0)) || cfg.efficiency > Scalar(1))
    throw std::invalid_argument("efficiency must lie in (0, 1]");

  const TransmitCovariance<Scalar> scaled{cfg.efficiency * rt.p_b1,
                                          cfg.efficiency * rt.p_b2, rt.p_in};
  const TransmitCovariance<Scalar> identity_rt;

  const std::size_t n_snr = cfg.snr_grid_db.size();
  std::vector<Scalar> snr_linear(n_snr);
  for (std::size_t k = 0; k < n_snr; ++k)
    snr_linear[k] = std::pow(Scalar(10), cfg.snr_grid_db[k] / Scalar(10));

  std::vector<Scalar> gauss(n_snr, Scalar(0)), mi(n_snr, Scalar(0)),
      iid(n_snr, Scalar(0)), siso_g(n_snr, Scalar(0)), siso_q(n_snr, Scalar(0));

  for (int m = 0; m < cfg.n_realizations; ++m) {
    CounterRng fading_beam(cfg.seed, CounterRng::domain_channel_fading, std::uint32_t(m));
    CounterRng fading_iid(cfg.seed, CounterRng::domain_channel_fading, std::uint32_t(m));
    const Matrix2c<Scalar> h_beam = kronecker_realization(scaled, fading_beam);
    const Matrix2c<Scalar> h_iid = kronecker_realization(identity_rt, fading_iid);

    CounterRng siso_rng(cfg.seed, CounterRng::domain_siso_fading, std::uint32_t(m));
    const auto gs = siso_rng.complex_gaussian();
    const std::complex<Scalar> h_siso =
        std::sqrt(cfg.efficiency) * std::complex<Scalar>(Scalar(gs.real()), Scalar(gs.imag()));

    for (std::size_t k = 0; k < n_snr; ++k) {
      gauss[k] += gaussian_capacity(h_beam, snr_linear[k]);
      iid[k] += gaussian_capacity(h_iid, snr_linear[k]);
      mi[k] += qpsk_mutual_information(h_beam, snr_linear[k], cfg.n_symbols, cfg.seed,
                                       std::uint32_t(m));
      siso_g[k] += std::log2(Scalar(1) + snr_linear[k] * std::norm(h_siso));
      siso_q[k] += siso_qpsk_mutual_information(h_siso, snr_linear[k], cfg.n_symbols,
                                                cfg.seed, std::uint32_t(m));
    }
  }

  CapacityResult<Scalar> result;
  result.config = cfg;
  result.covariance = rt;
  result.snr_convention =
      "transmit SNR = total transmit power over noise power per receive branch, "
      "split equally across the two streams before covariance weighting";
  result.estimator =
      "Monte-Carlo discrete-input mutual information with exact Gaussian-noise "
      "likelihood ratios";
  const Scalar n = Scalar(cfg.n_realizations);
  for (std::size_t k = 0; k < n_snr; ++k) {
    CapacityRow<Scalar> row;
    row.snr_db = cfg.snr_grid_db[k];
    row.gaussian_bits = gauss[k] / n;
    row.qpsk_mi_bits = std::max(Scalar(0), mi[k] / n);
    row.iid_gaussian_bits = iid[k] / n;
    row.siso_gaussian_bits = siso_g[k] / n;
    row.siso_qpsk_mi_bits = std::max(Scalar(0), siso_q[k] / n);
    result.rows.push_back(row);
  }
  return result;
}

/// Convenience overload wiring the basis powers straight into the transmit
/// covariance, R_T = P_in diag(P_B1, P_B2).
template <typename Scalar>
CapacityResult<Scalar> capacity_curves(const BasisPowerReport<Scalar>& powers,
                                       const ChannelConfig<Scalar>& cfg,
                                       Scalar p_in = Scalar(1)) {
  return capacity_curves(TransmitCovariance<Scalar>{powers.p_b1, powers.p_b2, p_in}, cfg);
}

}  // namespace bsm

#endif  // BSMIMO_CHANNEL_HPP
