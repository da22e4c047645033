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

#ifndef BSMIMO_SYMMETRIC3_HPP
#define BSMIMO_SYMMETRIC3_HPP

#include "bsmimo/multiport.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <string>

namespace bsm {

inline constexpr double default_sym_tol = 5e-3;
inline constexpr double default_singular_tol = 1e-9;

/// Reduced form of a mirror-symmetric, reciprocal three-port radiator. Port 0
/// is the active feed; ports 1 and 2 are the control ports. The reduced
/// fields are averages of the entries that symmetry forces equal, so the
/// model is exactly symmetric even when the source data is rounded.
template <typename Scalar = double>
struct SymmetricThreePort {
  using Complex = std::complex<Scalar>;

  Complex s00, s01, s11, s21;
  Scalar z0{Scalar(50)};
  ScatteringMatrix<Scalar> source;

  /// Coupling difference S11 - S21, the quantity the reactive-load pairing
  /// depends on.
  Complex delta() const { return s11 - s21; }
};

/// Exact symmetric 3x3 matrix rebuilt from the reduced fields.
template <typename Scalar>
ScatteringMatrix<Scalar> expand(const SymmetricThreePort<Scalar>& a) {
  MatrixXc<Scalar> m(3, 3);
  m << a.s00, a.s01, a.s01,
       a.s01, a.s11, a.s21,
       a.s01, a.s21, a.s11;
  return ScatteringMatrix<Scalar>(std::move(m), a.z0, a.source.freq);
}

namespace detail {

struct SymmetryPair {
  int r1, c1, r2, c2;
};

inline constexpr std::array<SymmetryPair, 6> symmetry_pairs{{
    {1, 1, 2, 2},  // mirror: control self terms
    {0, 1, 0, 2},  // mirror: feed-to-control coupling
    {1, 0, 2, 0},  // mirror, reverse direction
    {0, 1, 1, 0},  // reciprocity
    {0, 2, 2, 0},  // reciprocity
    {1, 2, 2, 1},  // reciprocity
}};

template <typename Scalar>
std::pair<Scalar, SymmetryPair> worst_symmetry_pair(const MatrixXc<Scalar>& m) {
  Scalar worst = Scalar(-1);
  SymmetryPair worst_pair{};
  for (const auto& p : symmetry_pairs) {
    const Scalar dev = std::abs(m(p.r1, p.c1) - m(p.r2, p.c2));
    if (dev > worst) {
      worst = dev;
      worst_pair = p;
    }
  }
  return {worst, worst_pair};
}

}  // namespace detail

/// Largest deviation among the entry pairs that mirror symmetry and
/// reciprocity force equal.
template <typename Scalar>
Scalar symmetry_residual(const ScatteringMatrix<Scalar>& s) {
  if (s.ports() != 3)
    throw std::invalid_argument("expected a 3-port matrix, got " +
                                std::to_string(s.ports()) + " ports");
  return detail::worst_symmetry_pair(s.entries).first;
}

/// Validate mirror symmetry and reciprocity of a 3-port matrix and reduce it
/// to {S00, S01, S11, S21}. Each symmetry-paired entry must agree within
/// sym_tol; the worst offending pair is reported otherwise.
template <typename Scalar>
SymmetricThreePort<Scalar> reduce_symmetric(const ScatteringMatrix<Scalar>& s,
                                            Scalar sym_tol = Scalar(default_sym_tol)) {
  if (s.ports() != 3)
    throw std::invalid_argument("expected a 3-port matrix, got " +
                                std::to_string(s.ports()) + " ports");
  const auto& m = s.entries;

  const auto [worst, worst_pair] = detail::worst_symmetry_pair(m);
  if (worst > sym_tol) {
    std::ostringstream msg;
    msg << "symmetry violation: |S(" << worst_pair.r1 << "," << worst_pair.c1
        << ") - S(" << worst_pair.r2 << "," << worst_pair.c2 << ")| = " << worst
        << " exceeds tolerance " << sym_tol;
    throw std::domain_error(msg.str());
  }

  SymmetricThreePort<Scalar> a;
  a.s00 = m(0, 0);
  // pairwise grouping keeps the average exact when the entries already agree
  a.s01 = ((m(0, 1) + m(0, 2)) + (m(1, 0) + m(2, 0))) / Scalar(4);
  a.s11 = (m(1, 1) + m(2, 2)) / Scalar(2);
  a.s21 = (m(1, 2) + m(2, 1)) / Scalar(2);
  a.z0 = s.z0;
  a.source = s;
  return a;
}

/// Shared denominator of the signal-flow-graph reduction,
/// 1 - S11 (G1 + G2) + G1 G2 (S11^2 - S21^2).
template <typename Scalar>
std::complex<Scalar> mason_denominator(const SymmetricThreePort<Scalar>& a,
                                       std::complex<Scalar> gamma1,
                                       std::complex<Scalar> gamma2) {
  return std::complex<Scalar>(1) - a.s11 * (gamma1 + gamma2) +
         gamma1 * gamma2 * (a.s11 * a.s11 - a.s21 * a.s21);
}

/// Wave amplitudes returned into the feed path by the loaded control ports,
/// one coefficient per port. Swapping the loads swaps the coefficients.
/// Near-singular (resonant) loading is rejected with the denominator
/// magnitude in the message.
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> ell_coefficients(
    const SymmetricThreePort<Scalar>& a, std::complex<Scalar> gamma1,
    std::complex<Scalar> gamma2, Scalar singular_tol = Scalar(default_singular_tol)) {
  const std::complex<Scalar> den = mason_denominator(a, gamma1, gamma2);
  if (std::abs(den) <= singular_tol) {
    std::ostringstream msg;
    msg << "resonant loading: |signal-flow denominator| = " << std::abs(den)
        << " is below " << singular_tol;
    throw std::domain_error(msg.str());
  }
  const std::complex<Scalar> d = a.delta();
  const std::complex<Scalar> one(1);
  return {gamma1 * a.s01 * (one - gamma2 * d) / den,
          gamma2 * a.s01 * (one - gamma1 * d) / den};
}

/// Reflection coefficient seen at the active feed, S00 + S01 (l1 + l2).
template <typename Scalar>
std::complex<Scalar> total_reflection(const SymmetricThreePort<Scalar>& a,
                                      std::complex<Scalar> gamma1,
                                      std::complex<Scalar> gamma2,
                                      Scalar singular_tol = Scalar(default_singular_tol)) {
  const auto [l1, l2] = ell_coefficients(a, gamma1, gamma2, singular_tol);
  return a.s00 + a.s01 * (l1 + l2);
}

/// Unit instantaneous pattern vector [1, l1, l2] weighting the three embedded
/// patterns.
template <typename Scalar>
Vector3c<Scalar> pattern_vector(std::complex<Scalar> ell1, std::complex<Scalar> ell2) {
  return Vector3c<Scalar>(std::complex<Scalar>(1), ell1, ell2);
}

/// Even/odd basis built from the two mirrored system states of the load pair
/// (gamma_i, gamma_ii). The basis vectors v_b1 = [1, l_b1, l_b1] and
/// v_b2 = [0, l_b2, -l_b2] have a zero plain dot product by construction.
template <typename Scalar = double>
struct BasisPair {
  using Complex = std::complex<Scalar>;

  Complex gamma_i{}, gamma_ii{};
  Complex ell_b1{}, ell_b2{};

  Vector3c<Scalar> v_b1() const {
    return Vector3c<Scalar>(Complex(1), ell_b1, ell_b1);
  }
  Vector3c<Scalar> v_b2() const {
    return Vector3c<Scalar>(Complex(0), ell_b2, -ell_b2);
  }
};

template <typename Scalar>
BasisPair<Scalar> basis_from_loads(const SymmetricThreePort<Scalar>& a,
                                   std::complex<Scalar> gamma_i,
                                   std::complex<Scalar> gamma_ii,
                                   Scalar singular_tol = Scalar(default_singular_tol)) {
  const std::complex<Scalar> den = mason_denominator(a, gamma_i, gamma_ii);
  if (std::abs(den) <= singular_tol) {
    std::ostringstream msg;
    msg << "resonant basis loading: |signal-flow denominator| = " << std::abs(den)
        << " is below " << singular_tol;
    throw std::domain_error(msg.str());
  }
  const std::complex<Scalar> d = a.delta();
  const std::complex<Scalar> half(Scalar(1) / Scalar(2));
  BasisPair<Scalar> b;
  b.gamma_i = gamma_i;
  b.gamma_ii = gamma_ii;
  b.ell_b1 = half * a.s01 *
             (gamma_i + gamma_ii - std::complex<Scalar>(2) * gamma_i * gamma_ii * d) / den;
  b.ell_b2 = half * a.s01 * (gamma_ii - gamma_i) / den;
  return b;
}

/// Beam coupling between the two basis patterns evaluated from the coupling
/// matrix of the underlying 3-port. Zero (up to rounding) for an exactly
/// symmetric radiator; nonzero entries expose broken symmetry.
template <typename Scalar>
std::complex<Scalar> basis_coupling(const BeamCouplingMatrix<Scalar>& x,
                                    const BasisPair<Scalar>& b) {
  const auto& c = x.entries;
  return b.ell_b2 * (c(0, 1) - c(0, 2)) +
         b.ell_b2 * std::conj(b.ell_b1) *
             (c(1, 1) - c(2, 2) + c(2, 1) - c(1, 2));
}

/// Radiated powers of the two basis patterns and their imbalance ratio.
template <typename Scalar = double>
struct BasisPowerReport {
  Scalar p_b1{}, p_b2{};
  Scalar r{};
};

/// Basis powers of a lossless radiator from S-parameters alone:
///   P_B1 = chi00 + 2 |l_B1|^2 (chi11 + chi21) + 4 Re{l_B1 chi01}
///   P_B2 = 2 |l_B2|^2 (chi11 - chi21)
/// with the coupling sums taken over the exact symmetric expansion.
template <typename Scalar>
BasisPowerReport<Scalar> basis_powers_lossless(const SymmetricThreePort<Scalar>& a,
                                               const BasisPair<Scalar>& b) {
  const auto s = expand(a);
  const auto& m = s.entries;

  const Scalar chi00 = Scalar(1) - m.col(0).squaredNorm();
  const Scalar chi11 = Scalar(1) - m.col(1).squaredNorm();
  std::complex<Scalar> chi01{}, chi21{};
  for (int n = 0; n < 3; ++n) {
    chi01 -= std::conj(m(n, 0)) * m(n, 1);
    chi21 -= std::conj(m(n, 2)) * m(n, 1);
  }

  BasisPowerReport<Scalar> report;
  report.p_b1 = chi00 +
                Scalar(2) * std::norm(b.ell_b1) * (chi11 + chi21.real()) +
                Scalar(4) * (b.ell_b1 * chi01).real();
  report.p_b2 = Scalar(2) * std::norm(b.ell_b2) * (chi11 - chi21.real());
  if (!(report.p_b2 > Scalar(0))) {
    std::ostringstream msg;
    msg << "degenerate basis: second basis pattern radiates no power (P_B2 = "
        << report.p_b2 << "); the basis loads must differ";
    throw std::domain_error(msg.str());
  }
  report.r = report.p_b1 / report.p_b2;
  return report;
}

}  // namespace bsm

#endif  // BSMIMO_SYMMETRIC3_HPP
