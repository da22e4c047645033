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

#include "bsmimo/symmetric3.hpp"

#include "bsmimo/synthesis.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace bsm;
using bsmtest::Complex;

namespace {

// basis-state reflection phases of the example radiator for X_I = -100 ohm,
// solved independently of the root-finding machinery under test
constexpr double example_theta_i = -0.9272952180016123;
constexpr double example_theta_ii = 1.0568872395237832;

BasisPair<double> example_basis() {
  return basis_from_loads(bsmtest::example_antenna(), std::polar(1.0, example_theta_i),
                          std::polar(1.0, example_theta_ii));
}

// closed-form basis coefficients that hold whenever the pairing condition is
// satisfied: l_b1 and |l_b2|^2 depend on the scattering parameters only
Complex closed_form_ell_b1(const SymmetricThreePort<double>& a) {
  const Complex d = a.delta();
  return a.s01 * std::conj(d) / (Complex(1.0) - std::conj(d) * (a.s11 + a.s21));
}

double closed_form_ell_b2_sq(const SymmetricThreePort<double>& a) {
  const Complex d = a.delta();
  return std::norm(a.s01 / (Complex(1.0) - std::conj(d) * (a.s11 + a.s21)));
}

}  // namespace

TEST_CASE("example radiator reduces to its printed entries") {
  const auto a = bsmtest::example_antenna();
  CHECK(a.s00 == Complex(0.24, 0.19));
  CHECK(a.s01 == Complex(-0.13, 0.47));
  CHECK(a.s11 == Complex(0.46, -0.27));
  CHECK(a.s21 == Complex(0.14, 0.13));
  CHECK(a.z0 == 50.0);
}

TEST_CASE("reduction rejects non-3-port input and names the worst pair") {
  CHECK_THROWS_AS(
      reduce_symmetric(ScatteringMatrix<double>(MatrixXc<double>::Zero(2, 2), 50.0)),
      std::invalid_argument);

  auto s = bsmtest::example_matrix();
  s.entries(2, 2) += Complex(10.0 * default_sym_tol, 0.0);
  try {
    reduce_symmetric(s);
    FAIL("expected a symmetry violation");
  } catch (const std::domain_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("S(1,1)") != std::string::npos);
    CHECK(msg.find("S(2,2)") != std::string::npos);
  }
}

TEST_CASE("reduction of an exactly symmetric matrix re-expands bit-exactly") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = bsmtest::random_symmetric_radiator(gen);
    const auto back = expand(reduce_symmetric(s));
    CHECK(back.entries == s.entries);
    CHECK(back.z0 == s.z0);
  }
}

TEST_CASE("symmetry residual is zero for the example radiator") {
  CHECK(symmetry_residual(bsmtest::example_matrix()) == 0.0);
}

TEST_CASE("matched control ports return zero ell coefficients") {
  const auto a = bsmtest::example_antenna();
  const auto [l1, l2] = ell_coefficients(a, Complex(0.0), Complex(0.0));
  CHECK(l1 == Complex(0.0));
  CHECK(l2 == Complex(0.0));
  CHECK(total_reflection(a, Complex(0.0), Complex(0.0)) == a.s00);
}

TEST_CASE("single-loaded port reduces to the one-port rational form") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = reduce_symmetric(bsmtest::random_symmetric_radiator(gen));
    const Complex g1 = bsmtest::random_complex_in_disk(gen);
    const auto [l1, l2] = ell_coefficients(a, g1, Complex(0.0));
    const Complex expected = g1 * a.s01 / (Complex(1.0) - a.s11 * g1);
    CHECK(std::abs(l1 - expected) < 1e-13);
    CHECK(l2 == Complex(0.0));
  }
}

TEST_CASE("example radiator ells at j,j match an independent evaluation") {
  const auto a = bsmtest::example_antenna();
  const auto [l1, l2] = ell_coefficients(a, Complex(0, 1), Complex(0, 1));

  // same rational function, regrouped: with both loads at j the denominator
  // collapses to 1 - 2 j S11 - (S11^2 - S21^2)
  const Complex j(0, 1);
  const Complex den =
      Complex(1.0) - Complex(2.0) * j * a.s11 - (a.s11 * a.s11 - a.s21 * a.s21);
  const Complex expected = j * a.s01 * (Complex(1.0) - j * a.delta()) / den;
  CHECK(std::abs(l1 - expected) < 1e-14);
  CHECK(std::abs(l2 - expected) < 1e-14);

  CHECK(std::abs(l1 - Complex(-0.29665332848308473, -0.3581302291742452)) < 1e-14);
}

TEST_CASE("swapping the loads permutes the ell coefficients") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = reduce_symmetric(bsmtest::random_symmetric_radiator(gen));
    const Complex g1 = bsmtest::random_complex_in_disk(gen);
    const Complex g2 = bsmtest::random_complex_in_disk(gen);
    const auto [l1, l2] = ell_coefficients(a, g1, g2);
    const auto [l1s, l2s] = ell_coefficients(a, g2, g1);
    CHECK(std::abs(l1 - l2s) < 1e-14);
    CHECK(std::abs(l2 - l1s) < 1e-14);
    CHECK(std::abs(total_reflection(a, g1, g2) - total_reflection(a, g2, g1)) < 1e-14);
  }
}

TEST_CASE("near-singular loading is rejected with the denominator magnitude") {
  const auto a = bsmtest::example_antenna();
  const Complex g1 = Complex(1.0) / a.s11;  // zeroes the denominator at g2 = 0
  CHECK_THROWS_AS(ell_coefficients(a, g1, Complex(0.0)), std::domain_error);
  CHECK_THROWS_AS(total_reflection(a, g1, Complex(0.0)), std::domain_error);
  CHECK_THROWS_AS(basis_from_loads(a, g1, Complex(0.0)), std::domain_error);
}

TEST_CASE("example radiator feed reflection with the basis loads") {
  const auto a = bsmtest::example_antenna();
  const Complex gt = total_reflection(a, std::polar(1.0, example_theta_i),
                                      std::polar(1.0, example_theta_ii));
  CHECK(std::abs(gt) == Catch::Approx(0.302608360709).margin(1e-9));
  CHECK(-20.0 * std::log10(std::abs(gt)) == Catch::Approx(10.4).margin(0.2));
}

TEST_CASE("coincident basis loads give a degenerate second basis vector") {
  const auto a = bsmtest::example_antenna();
  const Complex g = std::polar(1.0, 0.7);
  const auto b = basis_from_loads(a, g, g);
  CHECK(b.ell_b2 == Complex(0.0));
  CHECK_THROWS_AS(basis_powers_lossless(a, b), std::domain_error);
}

TEST_CASE("basis coefficients recombine into the ell coefficients") {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = reduce_symmetric(bsmtest::random_symmetric_radiator(gen));
    const Complex gi = bsmtest::random_complex_in_disk(gen);
    const Complex gii = bsmtest::random_complex_in_disk(gen);
    const auto [l1, l2] = ell_coefficients(a, gi, gii);
    const auto b = basis_from_loads(a, gi, gii);
    CHECK(std::abs((b.ell_b1 - b.ell_b2) - l1) < 1e-13);
    CHECK(std::abs((b.ell_b1 + b.ell_b2) - l2) < 1e-13);
  }
}

TEST_CASE("basis vectors are orthogonal under the plain dot product") {
  std::mt19937_64 gen(15);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = reduce_symmetric(bsmtest::random_symmetric_radiator(gen));
    const auto b = basis_from_loads(a, bsmtest::random_complex_in_disk(gen),
                                    bsmtest::random_complex_in_disk(gen));
    const Complex dot = b.v_b1().cwiseProduct(b.v_b2()).sum();
    CHECK(dot == Complex(0.0));
  }
}

TEST_CASE("reactive basis coefficients match the load-independent closed forms") {
  const auto a = bsmtest::example_antenna();
  const auto b = example_basis();
  CHECK(std::abs(b.ell_b1 - closed_form_ell_b1(a)) < 1e-10);
  CHECK(std::abs(std::norm(b.ell_b2) - closed_form_ell_b2_sq(a)) < 1e-10);
  CHECK(std::abs(b.ell_b1 - Complex(-0.3178672004885827, 0.04834085434126147)) < 1e-10);
}

TEST_CASE("basis coupling vanishes for a symmetric radiator") {
  const auto x = beam_coupling_lossless(bsmtest::example_matrix());
  CHECK(std::abs(basis_coupling(x, example_basis())) < 1e-12);

  std::mt19937_64 gen(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = bsmtest::random_symmetric_radiator(gen);
    const auto a = reduce_symmetric(s);
    const auto b = basis_from_loads(a, bsmtest::random_complex_in_disk(gen),
                                    bsmtest::random_complex_in_disk(gen));
    CHECK(std::abs(basis_coupling(beam_coupling_lossless(s), b)) < 1e-12);
  }
}

TEST_CASE("broken mirror symmetry shows up in the basis coupling") {
  auto s = bsmtest::example_matrix();
  s.entries(0, 1) += Complex(0.02, -0.01);
  s.entries(1, 0) += Complex(0.02, -0.01);
  const auto b = example_basis();
  const auto x = beam_coupling_lossless(s);
  const Complex coupling = basis_coupling(x, b);
  CHECK(std::abs(coupling) > 1e-4);

  // independent evaluation from the explicit coupling sums
  const Complex expected =
      b.ell_b2 * (bsmtest::chi_entry_oracle(s, 0, 1) - bsmtest::chi_entry_oracle(s, 0, 2)) +
      b.ell_b2 * std::conj(b.ell_b1) *
          (bsmtest::chi_entry_oracle(s, 1, 1) - bsmtest::chi_entry_oracle(s, 2, 2) +
           bsmtest::chi_entry_oracle(s, 2, 1) - bsmtest::chi_entry_oracle(s, 1, 2));
  CHECK(std::abs(coupling - expected) < 1e-12);
}

TEST_CASE("example radiator basis powers and imbalance ratio") {
  const auto a = bsmtest::example_antenna();
  const auto report = basis_powers_lossless(a, example_basis());
  CHECK(report.p_b1 == Catch::Approx(0.3272511281511892).margin(1e-9));
  CHECK(report.p_b2 == Catch::Approx(0.5811770518779901).margin(1e-9));
  CHECK(report.r == Catch::Approx(0.5630833617633804).margin(1e-9));
}

TEST_CASE("basis powers agree with the quadratic-form oracle") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = bsmtest::random_symmetric_radiator(gen);
    const auto a = reduce_symmetric(s);
    const auto partner = reactive_partner(a, -250.0 + 25.0 * trial);
    const auto b = basis_from_loads(a, partner.gamma_i, partner.gamma_ii);
    const auto report = basis_powers_lossless(a, b);

    const auto x = beam_coupling_lossless(s);
    const Eigen::Vector3cd v1 = b.v_b1(), v2 = b.v_b2();
    const double p1 = (v1.adjoint() * x.entries * v1)(0).real();
    const double p2 = (v2.adjoint() * x.entries * v2)(0).real();
    CHECK(report.p_b1 == Catch::Approx(p1).margin(1e-12));
    CHECK(report.p_b2 == Catch::Approx(p2).margin(1e-12));
  }
}

TEST_CASE("reactive basis powers are independent of the basis reactance") {
  const auto a = bsmtest::example_antenna();
  double r_min = 1e300, r_max = 0.0, g_min = 1e300, g_max = 0.0;
  double p1_min = 1e300, p1_max = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double x_i = -300.0 + 600.0 * k / 19.0;
    const auto partner = reactive_partner(a, x_i);
    const auto b = basis_from_loads(a, partner.gamma_i, partner.gamma_ii);

    CHECK(std::abs(b.ell_b1 - closed_form_ell_b1(a)) < 1e-10);
    CHECK(std::abs(std::norm(b.ell_b2) - closed_form_ell_b2_sq(a)) < 1e-10);

    const auto report = basis_powers_lossless(a, b);
    r_min = std::min(r_min, report.r);
    r_max = std::max(r_max, report.r);
    p1_min = std::min(p1_min, report.p_b1);
    p1_max = std::max(p1_max, report.p_b1);
    const double g = std::abs(total_reflection(a, partner.gamma_i, partner.gamma_ii));
    g_min = std::min(g_min, g);
    g_max = std::max(g_max, g);
  }
  CHECK((r_max - r_min) / r_min < 1e-9);
  CHECK((p1_max - p1_min) / p1_min < 1e-9);
  CHECK((g_max - g_min) / g_min < 1e-9);
}

TEST_CASE("reactive basis states conserve energy") {
  std::mt19937_64 gen(18);
  std::uniform_real_distribution<double> reactance(-400.0, 400.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = reduce_symmetric(bsmtest::random_symmetric_radiator(gen));
    const auto partner = reactive_partner(a, reactance(gen));
    const auto b = basis_from_loads(a, partner.gamma_i, partner.gamma_ii);
    const auto report = basis_powers_lossless(a, b);
    const double gt = std::abs(total_reflection(a, partner.gamma_i, partner.gamma_ii));
    CHECK(report.p_b1 + report.p_b2 == Catch::Approx(1.0 - gt * gt).margin(1e-9));
  }
}
