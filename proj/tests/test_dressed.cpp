// Copyright 2026 The holocnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "holocnot/dressed.hpp"

#include <gtest/gtest.h>

#include <random>

namespace holocnot {
namespace {

DeviceParams on_resonance() {
  DeviceParams p;
  p.omega = {p.omega_r, p.omega_r};
  return p;
}

/// Static Hamiltonian with both qutrits cut to {g, e}: the two-level model
/// the dressed-state formulas describe.
Operator two_level_hamiltonian(const DeviceParams& p, const HilbertSpace& s) {
  Operator proj = Operator::Zero(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    const auto l = s.labels(i);
    if (l[0] <= 1 && l[1] <= 1) proj(i, i) = 1.0;
  }
  return proj * static_hamiltonian(p, s) * proj;
}

TEST(JaynesCummings, FirstManifold) {
  const HilbertSpace s{};
  const DressedSpectrum d = jc_dressed_states(1, mhz(19.9), s);
  EXPECT_NEAR(to_mhz(d.find("psi_1^+").energy - d.find("psi_1^-").energy), 39.8, 1e-12);
  EXPECT_NEAR(std::abs(d.find("psi_1^+").state.dot(d.find("psi_1^-").state)), 0.0, 1e-15);
  EXPECT_LE(d.orthonormality_defect(), 1e-10);
}

TEST(JaynesCummings, Vacuum) {
  const DressedSpectrum d = jc_dressed_states(0, mhz(19.9), {});
  ASSERT_EQ(d.pairs.size(), 1u);
  EXPECT_EQ(d.pairs[0].energy, 0.0);
  EXPECT_EQ(d.pairs[0].state, HilbertSpace{}.basis(Level::g, Level::g, 0));
  EXPECT_THROW(jc_dressed_states(5, mhz(19.9), {}), DimensionError);
}

TEST(JaynesCummings, EigenpairsOfTheCoupledModel) {
  DeviceParams p = on_resonance();
  p.lambda[0] = 0.0;
  const HilbertSpace s{3, 3, 5};
  const Operator h = two_level_hamiltonian(p, s);
  const double scale = h.norm();
  for (int n = 0; n < 5; ++n) {
    const DressedSpectrum d = jc_dressed_states(n, p.lambda[1], s);
    EXPECT_LE(d.max_residual(h), 1e-8 * scale) << "n = " << n;
    EXPECT_LE(d.orthonormality_defect(), 1e-10);
  }
}

TEST(JaynesCummings, MinusIsAlwaysTheLowerState) {
  DeviceParams p = on_resonance();
  p.lambda[0] = 0.0;
  const HilbertSpace s{3, 3, 3};
  for (double l : {0.1, 1.0, 19.9, 80.0, 400.0}) {
    p.lambda[1] = mhz(l);
    const Operator h = two_level_hamiltonian(p, s);
    const int e = s.index(Level::g, Level::e, 0);
    const int g = s.index(Level::g, Level::g, 1);
    Matrix block(2, 2);
    block << h(e, e), h(e, g), h(g, e), h(g, g);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    const DressedSpectrum d = jc_dressed_states(1, p.lambda[1], s);
    Vector minus(2);
    minus << d.find("psi_1^-").state(e), d.find("psi_1^-").state(g);
    EXPECT_NEAR(std::norm(es.eigenvectors().col(0).dot(minus)), 1.0, 1e-12) << l;
  }
}

TEST(Triplet, SymmetricCouplings) {
  const HilbertSpace s{};
  const DressedSpectrum t = single_excitation_triplet(mhz(20.0), mhz(20.0), s);
  const Vector expected =
      (s.basis(Level::g, Level::e, 0) - s.basis(Level::e, Level::g, 0)) / std::sqrt(2.0);
  EXPECT_NEAR((t.find("Phi_1^0").state - expected).norm(), 0.0, 1e-15);
}

TEST(Triplet, SplittingAndEigenpairs) {
  const DeviceParams p = on_resonance();
  const HilbertSpace s{};
  const DressedSpectrum t = single_excitation_triplet(p.lambda[0], p.lambda[1], s);
  EXPECT_NEAR(to_mhz(t.find("Phi_1^+").energy), 28.79, 5e-3);
  const Operator h = two_level_hamiltonian(p, s);
  const Vector& dark = t.find("Phi_1^0").state;
  EXPECT_NEAR(std::abs(dark.dot(h * dark)), 0.0, 1e-6);
  EXPECT_LE(t.max_residual(h), 1e-8 * h.norm());
  EXPECT_LE(t.orthonormality_defect(), 1e-10);
  EXPECT_THROW(single_excitation_triplet(0.0, p.lambda[1], s), std::invalid_argument);
}

TEST(StarkDelta1, Values) {
  EXPECT_EQ(stark_delta1(0.0, mhz(19.9)), 0.0);
  EXPECT_NEAR(to_mhz(stark_delta1(mhz(2.2), mhz(19.9))), 0.4864, 1e-4);
  EXPECT_THROW(stark_delta1(mhz(2.2), 0.0), SingularityError);
}

TEST(StarkDelta1, TwoTermIdentity) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> w(0.01, 10.0), l(1.0, 200.0);
  for (int k = 0; k < 1000; ++k) {
    const double omega = mhz(w(rng));
    const double lambda = mhz(l(rng));
    const double a = stark_delta1(omega, lambda);
    EXPECT_NEAR(stark_delta1_two_term(omega, lambda), a, 1e-14 * std::abs(a));
  }
}

TEST(StarkDelta1, ConventionFactor) {
  EXPECT_EQ(psi1_drive_shift(mhz(2.2), mhz(19.9), Delta1Convention::doubled),
            2.0 * psi1_drive_shift(mhz(2.2), mhz(19.9), Delta1Convention::single));
}

TEST(StarkDelta2, ZeroCoupling) {
  const StarkShiftReport r = stark_delta2(0.0, mhz(242.0), mhz(19.9), DressedBranch::minus);
  EXPECT_EQ(r.delta2_h, 0.0);
  EXPECT_EQ(r.delta2_e_plus, 0.0);
  EXPECT_EQ(r.delta2_e_minus, 0.0);
  EXPECT_EQ(r.delta2_total, 0.0);
}

TEST(StarkDelta2, Approximation) {
  const StarkShiftReport r = stark_delta2(mhz(20.8), mhz(242.0), mhz(19.9), DressedBranch::minus);
  EXPECT_NEAR(to_mhz(r.delta2_approx), -4.022, 1e-3);
}

TEST(StarkDelta2, WeakResonatorCouplingLimit) {
  const double a = mhz(242.0);
  for (auto branch : {DressedBranch::minus, DressedBranch::plus}) {
    const StarkShiftReport r = stark_delta2(mhz(20.8), a, 1e-6 * a, branch);
    EXPECT_NEAR(r.delta2_total / r.delta2_approx, 1.0, 1e-5);
  }
}

TEST(StarkDelta2, ApproximationHoldsInWeakCouplingRegime) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ratio(1e-3, 0.2), alpha(100.0, 4000.0);
  for (int k = 0; k < 500; ++k) {
    const double a = mhz(alpha(rng));
    const StarkShiftReport r = stark_delta2(ratio(rng) * a, a, ratio(rng) * a, DressedBranch::minus);
    EXPECT_LE(std::abs(r.delta2_total - r.delta2_approx) / std::abs(r.delta2_approx), 0.1);
  }
}

TEST(StarkDelta2, SingularDenominator) {
  const double l2 = mhz(19.9);
  EXPECT_THROW(stark_delta2(mhz(20.8), 0.5 * l2, l2, DressedBranch::minus), SingularityError);
  EXPECT_THROW(stark_delta2(mhz(20.8), -1.0, l2, DressedBranch::minus), std::invalid_argument);
}

TEST(Detunings, Values) {
  const DeviceParams p;
  const DriveDetunings d = drive_detunings(p);
  EXPECT_NEAR(to_mhz(d.minus_d1_plus), (2.0 + std::sqrt(2.0)) * 19.9, 1e-9);
  EXPECT_NEAR(to_mhz(d.minus_d1_plus), 67.9, 0.05);
  EXPECT_EQ(d.plus_d1_plus, -d.plus_d1_minus);
  DeviceParams z = p;
  z.lambda[1] = 0.0;
  const DriveDetunings dz = drive_detunings(z);
  EXPECT_EQ(dz.minus_d1_plus, 0.0);
  EXPECT_EQ(dz.minus_d1_minus, 0.0);
}

TEST(NumericShifts, VanishWithoutDriveOrCoupling) {
  DeviceParams p;
  p.omega_ge_drive = 0.0;
  p.lambda[0] = 1e-9;
  const ShiftComparison c = verify_shifts_numerically(p);
  // Eigenvalues near 1e10 rad/s; roundoff sits around 1e-5 rad/s.
  EXPECT_NEAR(c.numeric_total, 0.0, 1e-3);
  EXPECT_NEAR(c.numeric_drive, 0.0, 1e-3);
}

TEST(NumericShifts, PhotonShiftMatchesThreeTermSumWhenQ2IsIsolated) {
  // Push Q2's f level far away so only the couplings the formula counts remain.
  DeviceParams p;
  p.omega_ge_drive = 0.0;
  p.alpha[1] = mhz(10000.0);
  const ShiftComparison c = verify_shifts_numerically(p);
  EXPECT_NEAR(c.numeric_photon / c.analytic_photon, 1.0, 0.01);
}

TEST(NumericShifts, NeedsFourLevels) {
  EXPECT_THROW(verify_shifts_numerically(DeviceParams{}, HilbertSpace{3, 3, 4}), DimensionError);
}

}  // namespace
}  // namespace holocnot
