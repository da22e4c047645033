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

#ifndef BSMIMO_RNG_HPP
#define BSMIMO_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace bsm {

/// Philox 4x32 block cipher with 10 rounds: four output words per
/// (counter, key) pair, addressable in any order.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    constexpr std::uint32_t mul0 = 0xD2511F53u, mul1 = 0xCD9E8D57u;
    constexpr std::uint32_t weyl0 = 0x9E3779B9u, weyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(mul0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(mul1) * ctr[2];
      ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
             std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
      key[0] += weyl0;
      key[1] += weyl1;
    }
    return ctr;
  }
};

/// Deterministic random stream addressed by (seed, domain, realization,
/// position). Streams with distinct addresses are independent, so work units
/// drawn from them reduce identically whether evaluated serially or in
/// parallel. The seed keys the cipher; the address fills the counter.
class CounterRng {
 public:
  static constexpr std::uint32_t domain_channel_fading = 1;
  static constexpr std::uint32_t domain_channel_symbols = 2;
  static constexpr std::uint32_t domain_channel_noise = 3;
  static constexpr std::uint32_t domain_siso_fading = 4;
  static constexpr std::uint32_t domain_siso_symbols = 5;
  static constexpr std::uint32_t domain_siso_noise = 6;
  static constexpr std::uint32_t domain_multiplex_check = 7;

  CounterRng(std::uint64_t seed, std::uint32_t domain, std::uint32_t realization,
             std::uint32_t position = 0)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        domain_(domain),
        realization_(realization),
        position_(position) {}

  /// Uniform draw in the open interval (0, 1) built from 53 random bits.
  double uniform() {
    const std::uint64_t bits = next64();
    return (double(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Circularly symmetric complex Gaussian with unit variance, E|x|^2 = 1.
  std::complex<double> complex_gaussian() {
    const double amplitude = std::sqrt(-std::log(uniform()));
    const double phase = 2.0 * std::numbers::pi * uniform();
    return {amplitude * std::cos(phase), amplitude * std::sin(phase)};
  }

 private:
  std::uint64_t next64() {
    if (buffered_ == 0) {
      block_ = Philox4x32::block({draw_index_++, position_, realization_, domain_}, key_);
      buffered_ = 4;
    }
    const std::uint32_t hi = block_[4 - buffered_--];
    const std::uint32_t lo = block_[4 - buffered_--];
    return (std::uint64_t(hi) << 32) | lo;
  }

  Philox4x32::Key key_;
  std::uint32_t domain_, realization_, position_;
  std::uint32_t draw_index_ = 0;
  Philox4x32::Counter block_{};
  int buffered_ = 0;
};

}  // namespace bsm

#endif  // BSMIMO_RNG_HPP
