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

#include "holocnot/tomography.hpp"

#include <gtest/gtest.h>

#include <random>

namespace holocnot {
namespace {

Matrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Matrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = cplx(d(rng), d(rng));
  }
  return Eigen::HouseholderQR<Matrix>(a).householderQ();
}

Matrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Matrix g(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g(r, c) = cplx(d(rng), d(rng));
  }
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}

// Kraus operators from a random isometry; keep < 1 removes weight
// uniformly, as leakage out of the logical space would.
std::vector<Matrix> random_kraus(int rank, double keep, std::mt19937_64& rng) {
  const Matrix u = random_unitary(4 * rank, rng);
  std::vector<Matrix> k;
  for (int j = 0; j < rank; ++j) k.push_back(std::sqrt(keep) * u.block(4 * j, 0, 4, 4));
  return k;
}

Matrix apply_kraus(const std::vector<Matrix>& k, const Matrix& rho) {
  Matrix out = Matrix::Zero(4, 4);
  for (const auto& x : k) out += x * rho * x.adjoint();
  return out;
}

Vector ket(std::initializer_list<cplx> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (cplx x : v) out(i++) = x;
  return out;
}

TEST(Pauli, OrderingAndCnotExpansion) {
  EXPECT_EQ(pauli_label(0), "II");
  EXPECT_EQ(pauli_label(1), "IX");
  EXPECT_EQ(pauli_label(12), "ZI");
  EXPECT_EQ(pauli_label(15), "ZZ");
  const Vector c = pauli_coefficients(cnot_unitary());
  for (int m = 0; m < 16; ++m) {
    const double expect = (m == 0 || m == 1 || m == 12) ? 0.5 : (m == 13 ? -0.5 : 0.0);
    EXPECT_NEAR(std::abs(c(m) - expect), 0.0, 1e-15) << pauli_label(m);
  }
  for (int m = 0; m < 16; ++m) {
    for (int n = 0; n < 16; ++n) {
      EXPECT_NEAR(std::abs((pauli_2q(m) * pauli_2q(n)).trace() - cplx(m == n ? 4.0 : 0.0)), 0.0, 1e-14);
    }
  }
}

TEST(Inputs, ThirtySixNormalizedStatesSpanTheOperatorSpace) {
  const auto in = input_states();
  ASSERT_EQ(in.size(), 36u);
  Matrix span(16, 36);
  for (int k = 0; k < 36; ++k) {
    EXPECT_NEAR(in[k].norm(), 1.0, 1e-15);
    const Matrix rho = in[k] * in[k].adjoint();
    span.col(k) = Eigen::Map<const Vector>(rho.data(), 16);
  }
  EXPECT_EQ(Eigen::FullPivLU<Matrix>(span).rank(), 16);
  EXPECT_EQ(input_label(0), "g,g");
  EXPECT_EQ(input_label(35), "f,f");
}

TEST(Readout, BasisStatesAndLeakageLabels) {
  const auto settings = tomography_settings();
  ASSERT_EQ(settings.size(), 9u);
  auto probe = [](int k1, int k2, const TomographySetting& s) {
    Matrix rho = Matrix::Zero(9, 9);
    rho(k1 * 3 + k2, k1 * 3 + k2) = 1.0;
    return simulate_measurement(rho, 3, 3, s).probabilities;
  };
  EXPECT_NEAR(probe(0, 0, settings[0])[0], 1.0, 1e-15);
  EXPECT_NEAR(probe(2, 0, settings[0])[1 * 3 + 0], 1.0, 1e-15);  // |f> is logical 1
  EXPECT_NEAR(probe(1, 2, settings[0])[2 * 3 + 1], 1.0, 1e-15);  // |e> is the leaked label
  const auto half = probe(0, 0, {TomoOp::X2, TomoOp::I});
  EXPECT_NEAR(half[0], 0.5, 1e-15);
  EXPECT_NEAR(half[3], 0.5, 1e-15);
  // Leaked population stays leaked under any pulse on the {g, e} pair after the swap.
  for (const auto& s : settings) EXPECT_NEAR(probe(1, 1, s)[8], 1.0, 1e-15);
}

TEST(Readout, HighestLevelReadsAsSecondExcited) {
  Matrix rho = Matrix::Zero(16, 16);
  rho(3 * 4 + 0, 3 * 4 + 0) = 1.0;
  const auto p = simulate_measurement(rho, 4, 4, {}).probabilities;
  EXPECT_NEAR(p[2 * 3 + 0], 1.0, 1e-15);
}

TEST(Readout, ShotsAreSeededAndConverge) {
  std::mt19937_64 rng(3);
  const Matrix rho = random_density(4, rng);
  std::mt19937_64 a(11), b(11);
  const auto ra = simulate_measurement(rho, tomography_settings()[4], 1000, &a);
  const auto rb = simulate_measurement(rho, tomography_settings()[4], 1000, &b);
  EXPECT_EQ(ra.probabilities, rb.probabilities);
  std::mt19937_64 c(12);
  const auto exact = simulate_measurement(rho, tomography_settings()[4]);
  const auto many = simulate_measurement(rho, tomography_settings()[4], 400000, &c);
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(many.probabilities[k], exact.probabilities[k], 5e-3);
  EXPECT_THROW(simulate_measurement(rho, tomography_settings()[0], 0, &c), std::invalid_argument);
  EXPECT_THROW(simulate_measurement(rho, tomography_settings()[0], 10, nullptr), std::invalid_argument);
}

TEST(StateTomography, RoundTrip) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix rho = random_density(4, rng);
    const DensityMatrix est = reconstruct_density(measure_all(embed_logical(rho, 3, 3), 3, 3));
    EXPECT_LE((est.matrix() - rho).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(StateTomography, LinearEstimateIsLinearInTheRecords) {
  std::mt19937_64 rng(23);
  const Matrix a = random_density(4, rng), b = random_density(4, rng);
  const auto ra = measure_all(embed_logical(a, 3, 3), 3, 3);
  const auto rb = measure_all(embed_logical(b, 3, 3), 3, 3);
  auto mix = ra;
  for (int s = 0; s < 9; ++s) {
    for (int k = 0; k < 9; ++k) mix[s].probabilities[k] = 0.3 * ra[s].probabilities[k] + 0.7 * rb[s].probabilities[k];
  }
  const Matrix expect = 0.3 * linear_density_estimate(ra) + 0.7 * linear_density_estimate(rb);
  EXPECT_LE((linear_density_estimate(mix) - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(StateTomography, NoisyRecordsStayPhysical) {
  std::mt19937_64 rng(22);
  const Vector bell = ket({std::sqrt(0.5), 0, 0, std::sqrt(0.5)});
  for (int trial = 0; trial < 20; ++trial) {
    const auto rec = measure_all(embed_logical(bell * bell.adjoint(), 3, 3), 3, 3, 200, &rng);
    const DensityMatrix est = reconstruct_density(rec);
    EXPECT_EQ(est.check(1e-12, 1e-12, 1.0), "");
    EXPECT_GE(est.min_eigenvalue(), -1e-12);
  }
}

TEST(ProcessTomography, RoundTripOverRandomChannels) {
  std::mt19937_64 rng(2026);
  const auto in = input_states();
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto kraus = random_kraus(1 + trial % 4, trial % 3 == 0 ? 0.9 : 1.0, rng);
    std::vector<Matrix> outputs;
    for (const auto& psi : in) outputs.push_back(apply_kraus(kraus, psi * psi.adjoint()));
    const ProcessReconstruction rec = reconstruct_chi(outputs);
    worst = std::max(worst, (rec.chi.chi - chi_of_kraus(kraus).chi).cwiseAbs().maxCoeff());
    EXPECT_LE(hermiticity_defect(rec.chi.chi), 1e-14);
    EXPECT_GE(rec.chi.min_eigenvalue(), -1e-12);
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(ProcessTomography, ChiReproducesTheChannel) {
  std::mt19937_64 rng(5);
  const auto kraus = random_kraus(3, 1.0, rng);
  const ChiMatrix chi = chi_of_kraus(kraus);
  EXPECT_NEAR(chi.trace(), 1.0, 1e-12);
  const Matrix rho = random_density(4, rng);
  EXPECT_LE((chi.apply(rho) - apply_kraus(kraus, rho)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProcessTomography, RejectsWrongInputCount) {
  EXPECT_THROW(reconstruct_chi(std::vector<Matrix>(35, Matrix::Identity(4, 4) / 4.0)), ReconstructionError);
  EXPECT_THROW(reconstruct_chi(std::vector<Matrix>(36, Matrix::Identity(3, 3))), DimensionError);
}

TEST(Fidelity, DepolarizedCnot) {
  const ChiMatrix ideal = chi_ideal_cnot();
  EXPECT_NEAR(process_fidelity(ideal, ideal), 1.0, 1e-15);
  for (double p : {0.0, 0.1, 0.5, 1.0}) {
    ChiMatrix noisy{(1.0 - p) * ideal.chi + p * Matrix::Identity(16, 16) / 16.0};
    EXPECT_NEAR(process_fidelity(noisy, ideal), 1.0 - p + p / 16.0, 1e-14);
  }
  // Identity against CNOT: |tr(CNOT)|^2 / 16.
  EXPECT_NEAR(process_fidelity(chi_of_unitary(Matrix::Identity(4, 4)), ideal), 0.25, 1e-15);
}

TEST(Fidelity, GlobalPhaseOfTheTargetDoesNotMatter) {
  std::mt19937_64 rng(9);
  const ChiMatrix meas = chi_of_kraus(random_kraus(2, 1.0, rng));
  const double f = process_fidelity(meas, chi_ideal_cnot());
  for (double theta : {0.4, 2.0, -1.3}) {
    const ChiMatrix shifted = chi_of_unitary(std::polar(1.0, theta) * cnot_unitary());
    EXPECT_NEAR(process_fidelity(meas, shifted), f, 1e-14);
  }
}

TEST(Fidelity, StatesAndConcurrence) {
  const Vector bell = ket({std::sqrt(0.5), 0, 0, std::sqrt(0.5)});
  const Matrix b = bell * bell.adjoint();
  EXPECT_NEAR(state_fidelity(b, bell), 1.0, 1e-15);
  EXPECT_NEAR(concurrence(b), 1.0, 1e-12);
  const Matrix product = ket({1, 0, 0, 0}) * ket({1, 0, 0, 0}).adjoint();
  EXPECT_NEAR(concurrence(product), 0.0, 1e-12);
  for (double p : {0.2, 0.5, 0.8, 1.0}) {
    const Matrix werner = p * b + (1.0 - p) * Matrix::Identity(4, 4) / 4.0;
    EXPECT_NEAR(concurrence(werner), std::max(0.0, (3.0 * p - 1.0) / 2.0), 1e-10);
  }
  Matrix skew = b;
  skew(0, 1) = 0.3;
  EXPECT_THROW(concurrence(skew), std::invalid_argument);
  EXPECT_THROW(state_fidelity(skew, bell), std::invalid_argument);
}

TEST(Leakage, AveragesExcitedPopulations) {
  Matrix a = Matrix::Zero(9, 9), b = Matrix::Zero(9, 9);
  a(1 * 3 + 0, 1 * 3 + 0) = 0.1;
  a(0, 0) = 0.9;
  b(2 * 3 + 1, 2 * 3 + 1) = 0.3;
  b(1 * 3 + 1, 1 * 3 + 1) = 0.2;
  b(8, 8) = 0.5;
  const LeakageReport r = leakage_report({a, b}, 3, 3);
  EXPECT_NEAR(r.average[0], 0.15, 1e-15);
  EXPECT_NEAR(r.average[1], 0.25, 1e-15);
  ASSERT_EQ(r.per_input.size(), 2u);
}

TEST(LogicalEmbedding, RoundTrip) {
  std::mt19937_64 rng(8);
  const Matrix rho = random_density(4, rng);
  EXPECT_EQ(logical_block(embed_logical(rho, 4, 3), 4, 3), rho);
}

}  // namespace
}  // namespace holocnot
