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

#ifndef BSMIMO_MULTIPORT_HPP
#define BSMIMO_MULTIPORT_HPP

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace bsm {

template <typename Scalar>
using MatrixXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector3c = Eigen::Matrix<std::complex<Scalar>, 3, 1>;

inline constexpr double default_passivity_tol = 1e-6;

/// N-port scattering parameters referenced to a real impedance z0, with an
/// optional frequency tag in Hz. Entries are dimensionless power-wave ratios.
template <typename Scalar = double>
struct ScatteringMatrix {
  using Complex = std::complex<Scalar>;
  using Matrix = MatrixXc<Scalar>;

  Matrix entries;
  Scalar z0{Scalar(50)};
  std::optional<Scalar> freq;

  ScatteringMatrix() = default;

  ScatteringMatrix(Matrix m, Scalar reference_impedance,
                   std::optional<Scalar> frequency = std::nullopt)
      : entries(std::move(m)), z0(reference_impedance), freq(frequency) {
    if (entries.rows() < 1 || entries.rows() != entries.cols())
      throw std::invalid_argument("scattering matrix must be square and non-empty");
    if (!(z0 > Scalar(0)))
      throw std::invalid_argument("reference impedance must be positive");
  }

  Eigen::Index ports() const { return entries.rows(); }
};

/// Beam-coupling coefficients between embedded patterns of a lossless
/// radiator. Hermitian; diagonal entries are the per-port radiated powers.
template <typename Scalar = double>
struct BeamCouplingMatrix {
  MatrixXc<Scalar> entries;
};

/// A one-port termination described by its reflection coefficient. The
/// impedance is presentation-only; gamma == 1 (an open circuit) has no finite
/// impedance, which the disengaged optional encodes.
template <typename Scalar = double>
struct ComplexLoad {
  std::complex<Scalar> gamma;
  std::optional<std::complex<Scalar>> z;

  bool open_circuit() const { return !z.has_value(); }
};

/// Smallest eigenvalue of I - S^H S. Non-negative for a passive network.
template <typename Scalar>
Scalar passivity_margin(const ScatteringMatrix<Scalar>& s) {
  const auto n = s.ports();
  MatrixXc<Scalar> x = MatrixXc<Scalar>::Identity(n, n) - s.entries.adjoint() * s.entries;
  Eigen::SelfAdjointEigenSolver<MatrixXc<Scalar>> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

template <typename Scalar>
void require_passive(const ScatteringMatrix<Scalar>& s,
                     Scalar tol = Scalar(default_passivity_tol)) {
  const Scalar margin = passivity_margin(s);
  if (margin < -tol) {
    std::ostringstream msg;
    msg << "passivity violation: smallest eigenvalue of I - S^H S is " << margin
        << " (tolerance " << -tol << ")";
    throw std::domain_error(msg.str());
  }
}

/// Beam-coupling matrix of a lossless radiator, I - S^H S. The off-diagonal
/// (n,m) entry is -sum_p conj(S_pn) S_pm and the diagonal carries the power
/// radiated per unit incident power at each port. Rejects non-passive data.
template <typename Scalar>
BeamCouplingMatrix<Scalar> beam_coupling_lossless(
    const ScatteringMatrix<Scalar>& s, Scalar tol = Scalar(default_passivity_tol)) {
  require_passive(s, tol);
  const auto n = s.ports();
  MatrixXc<Scalar> x = MatrixXc<Scalar>::Identity(n, n) - s.entries.adjoint() * s.entries;
  // restore exact Hermitian symmetry lost to rounding in the product
  x = ((x + x.adjoint()) / Scalar(2)).eval();
  return BeamCouplingMatrix<Scalar>{std::move(x)};
}

/// Power radiated in the far field for unit incident power on port n,
/// 1 - sum_p |S_pn|^2. Equals the (n,n) diagonal of the beam-coupling matrix.
template <typename Scalar>
Scalar radiated_power_per_port(const ScatteringMatrix<Scalar>& s, Eigen::Index n) {
  if (n < 0 || n >= s.ports())
    throw std::out_of_range("port index out of range");
  return Scalar(1) - s.entries.col(n).squaredNorm();
}

/// Reflection coefficient of impedance z against reference z0. The pole at
/// z == -z0 is rejected.
template <typename Scalar>
std::complex<Scalar> gamma_from_impedance(std::complex<Scalar> z, Scalar z0) {
  if (!(z0 > Scalar(0)))
    throw std::invalid_argument("reference impedance must be positive");
  const std::complex<Scalar> den = z + z0;
  if (std::abs(den) == Scalar(0))
    throw std::invalid_argument("reflection coefficient undefined at z = -z0");
  return (z - z0) / den;
}

/// Gamma of a purely reactive load jx.
template <typename Scalar>
std::complex<Scalar> gamma_from_reactance(Scalar x, Scalar z0) {
  return gamma_from_impedance(std::complex<Scalar>(Scalar(0), x), z0);
}

/// Inverse of gamma_from_impedance. gamma == 1 within open_tol maps to the
/// open-circuit marker; for unimodular gamma = exp(j theta) the result is the
/// purely imaginary j z0 cot(theta/2).
template <typename Scalar>
ComplexLoad<Scalar> impedance_from_gamma(std::complex<Scalar> gamma, Scalar z0,
                                         Scalar open_tol = Scalar(1e-12)) {
  if (!(z0 > Scalar(0)))
    throw std::invalid_argument("reference impedance must be positive");
  if (std::abs(gamma - std::complex<Scalar>(1)) <= open_tol)
    return ComplexLoad<Scalar>{gamma, std::nullopt};
  const std::complex<Scalar> z = z0 * (std::complex<Scalar>(1) + gamma) /
                                 (std::complex<Scalar>(1) - gamma);
  return ComplexLoad<Scalar>{gamma, z};
}

/// Reactance of a unimodular reflection coefficient, z0 cot(theta/2).
/// Disengaged for the open circuit (theta == 0 within open_tol).
template <typename Scalar>
std::optional<Scalar> reactance_from_gamma(std::complex<Scalar> gamma, Scalar z0,
                                           Scalar open_tol = Scalar(1e-12)) {
  if (std::abs(gamma - std::complex<Scalar>(1)) <= open_tol) return std::nullopt;
  const Scalar theta = std::arg(gamma);
  return z0 * std::cos(theta / Scalar(2)) / std::sin(theta / Scalar(2));
}

}  // namespace bsm

#endif  // BSMIMO_MULTIPORT_HPP
