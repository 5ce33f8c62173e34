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

// Dressed states of the qutrit-resonator system, drive detuning bookkeeping
// and a numerical check of the perturbative level shifts.
//
// Energies are frame energies (see model.hpp) with the qutrits on resonance
// with the resonator, so manifold n sits around zero.

#pragma once

#include "hilbert.hpp"
#include "model.hpp"
#include "stark.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace holocnot {

struct DressedEigenpair {
  std::string label;
  double energy = 0.0;
  QuantumState state;
};

struct DressedSpectrum {
  int manifold = 0;
  std::vector<DressedEigenpair> pairs;

  const DressedEigenpair& find(const std::string& label) const {
    for (const auto& p : pairs) {
      if (p.label == label) return p;
    }
    throw std::out_of_range("no dressed state labelled " + label);
  }

  /// max_k ||H psi_k - E_k psi_k||.
  double max_residual(const Operator& h) const {
    double r = 0.0;
    for (const auto& p : pairs) r = std::max(r, (h * p.state - p.energy * p.state).norm());
    return r;
  }

  /// max |<psi_i|psi_j> - delta_ij|.
  double orthonormality_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        const cplx o = pairs[i].state.dot(pairs[j].state);
        d = std::max(d, std::abs(o - (i == j ? 1.0 : 0.0)));
      }
    }
    return d;
  }
};

/// Jaynes-Cummings doublet of Q2 with Q1 in |g>:
/// |psi_n^+-> = (|e2 n-1> +- |g2 n>)/sqrt2 at +-sqrt(n) lambda2, and |psi_0> = |g2 0>.
inline DressedSpectrum jc_dressed_states(int n, double lambda2, const HilbertSpace& space) {
  space.validate();
  if (n < 0 || n >= space.fock_dim) {
    throw DimensionError("manifold " + std::to_string(n) + " exceeds fock_dim " + std::to_string(space.fock_dim));
  }
  DressedSpectrum s;
  s.manifold = n;
  if (n == 0) {
    s.pairs.push_back({"psi_0", 0.0, space.basis(Level::g, Level::g, 0)});
    return s;
  }
  const QuantumState e = space.basis(Level::g, Level::e, n - 1);
  const QuantumState g = space.basis(Level::g, Level::g, n);
  const double split = std::sqrt(static_cast<double>(n)) * lambda2;
  const std::string tag = "psi_" + std::to_string(n);
  s.pairs.push_back({tag + "^+", split, (e + g) / std::sqrt(2.0)});
  s.pairs.push_back({tag + "^-", -split, (e - g) / std::sqrt(2.0)});
  return s;
}

/// Single-excitation states with both qutrits on resonance, tan(theta) = lambda2/lambda1:
/// Phi^0 = -sin(theta)|e1 g2 0> + cos(theta)|g1 e2 0> at 0 and
/// Phi^+- = (cos(theta)|e1 g2 0> + sin(theta)|g1 e2 0> +- |g1 g2 1>)/sqrt2 at
/// +-sqrt(lambda1^2 + lambda2^2).
inline DressedSpectrum single_excitation_triplet(double lambda1, double lambda2, const HilbertSpace& space) {
  space.validate();
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument("single_excitation_triplet: couplings must be positive");
  }
  const double theta = std::atan2(lambda2, lambda1);
  const double split = std::hypot(lambda1, lambda2);
  const QuantumState eg = space.basis(Level::e, Level::g, 0);
  const QuantumState ge = space.basis(Level::g, Level::e, 0);
  const QuantumState gg1 = space.basis(Level::g, Level::g, 1);
  const QuantumState bright = std::cos(theta) * eg + std::sin(theta) * ge;
  DressedSpectrum s;
  s.manifold = 1;
  s.pairs.push_back({"Phi_1^0", 0.0, -std::sin(theta) * eg + std::cos(theta) * ge});
  s.pairs.push_back({"Phi_1^+", split, (bright + gg1) / std::sqrt(2.0)});
  s.pairs.push_back({"Phi_1^-", -split, (bright - gg1) / std::sqrt(2.0)});
  return s;
}

/// Detunings of the two tones from the off-resonant transitions out of
/// |psi_1^-> (first index) and |psi_1^+> (second index), for Q2 at omega_r.
struct DriveDetunings {
  double minus_d1_plus = 0.0;   // (2 + sqrt2) lambda2
  double minus_d1_minus = 0.0;  // (2 - sqrt2) lambda2
  double minus_d2_plus = 0.0;   // 2 omega_r - omega_f + sqrt2 lambda2
  double minus_d2_minus = 0.0;  // 2 omega_r - omega_f - sqrt2 lambda2
  double plus_d1_plus = 0.0;    // +sqrt2 lambda2
  double plus_d1_minus = 0.0;   // -sqrt2 lambda2
  double plus_d2_plus = 0.0;    // 2 omega_r - omega_f - (2 - sqrt2) lambda2
  double plus_d2_minus = 0.0;   // 2 omega_r - omega_f - (2 + sqrt2) lambda2
};

inline DriveDetunings drive_detunings(const DeviceParams& p) {
  const double s2 = std::sqrt(2.0);
  const double l = p.lambda[1];
  const double wf = omega_f(p, 1);
  DriveDetunings d;
  d.minus_d1_plus = (2.0 + s2) * l;
  d.minus_d1_minus = (2.0 - s2) * l;
  d.minus_d2_plus = 2.0 * p.omega_r - wf + s2 * l;
  d.minus_d2_minus = 2.0 * p.omega_r - wf - s2 * l;
  d.plus_d1_plus = s2 * l;
  d.plus_d1_minus = -s2 * l;
  d.plus_d2_plus = 2.0 * p.omega_r - wf - (2.0 - s2) * l;
  d.plus_d2_minus = 2.0 * p.omega_r - wf - (2.0 + s2) * l;
  return d;
}

/// Signed level shifts (negative = down) of |f1>|psi_1^-> and, for
/// reference, of |f1 g2 0>, compared with the perturbative formulas.
struct ShiftComparison {
  double analytic_drive = 0.0;     // -delta1 under the configured convention
  double analytic_photon = 0.0;    // delta2, three-term sum
  double analytic_total = 0.0;
  double numeric_drive = 0.0;      // lambda1 = 0, g-e tone on
  double numeric_photon = 0.0;     // drive off, lambda1 on
  double numeric_total = 0.0;      // both
  double numeric_reference = 0.0;  // shift of |f1 g2 0>, both on
  double relative_error = 0.0;     // |analytic_total - numeric_total| / |analytic_total|
  double drive_ratio = 0.0;        // numeric_drive / analytic_drive
};

namespace detail {

/// Effective Hamiltonian on span{basis columns} from the eigenvectors of h
/// that live mostly there (des Cloizeaux construction).
inline Matrix block_effective_hamiltonian(const Operator& h, const Matrix& basis) {
  const Eigen::SelfAdjointEigenSolver<Operator> es(h);
  const Matrix weights = basis.adjoint() * es.eigenvectors();
  const Eigen::Index m = basis.cols();
  std::vector<Eigen::Index> chosen;
  Eigen::VectorXd w = weights.cwiseAbs2().colwise().sum().transpose();
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::Index best = 0;
    w.maxCoeff(&best);
    chosen.push_back(best);
    w(best) = -1.0;
  }
  Matrix a(m, m);
  Eigen::VectorXd e(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    a.col(k) = weights.col(chosen[k]);
    e(k) = es.eigenvalues()(chosen[k]);
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> overlap(a.adjoint() * a);
  const Matrix inv_sqrt = overlap.eigenvectors() *
                          overlap.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                          overlap.eigenvectors().adjoint();
  const Matrix s = a * inv_sqrt;
  return s * e.cast<cplx>().asDiagonal() * s.adjoint();
}

/// Static Hamiltonian with the g-e tone on Q2, in a frame rotating at
/// `drive` per excitation, where the single tone is time independent.
inline Operator driven_static_hamiltonian(const DeviceParams& p, const HilbertSpace& space, double drive,
                                          double amplitude) {
  Operator h = static_hamiltonian(p, space);
  for (int i = 0; i < space.dim(); ++i) h(i, i) -= space.excitations(i) * (drive - p.omega_r);
  if (amplitude != 0.0) {
    h += amplitude * embed(qutrit_transition(space.levels_q2, Level::g, Level::e) +
                               qutrit_transition(space.levels_q2, Level::e, Level::g),
                           Subsystem::q2, space);
  }
  return h;
}

}  // namespace detail

/// Extracts the |psi_1^-> level shift with Q1 in |f> by exact block
/// diagonalization onto span{|f1 g2 0>, |f1 psi_1^->}, with both qutrits
/// on resonance with the resonator as the perturbative formulas assume.
/// Shifts are measured against the same Hamiltonian with lambda1 = 0 and no
/// drive; the g-e tone sits at omega_r - lambda2.
inline ShiftComparison verify_shifts_numerically(const DeviceParams& params, const HilbertSpace& space = {}) {
  space.validate();
  if (space.levels_q1 < 4 || space.levels_q2 < 4) {
    throw DimensionError("verify_shifts_numerically needs 4 levels per qutrit");
  }
  DeviceParams p = params;
  p.omega = {p.omega_r, p.omega_r};
  const QuantumState g0 = space.basis(Level::f, Level::g, 0);
  const QuantumState psi = (space.basis(Level::f, Level::e, 0) - space.basis(Level::f, Level::g, 1)) / std::sqrt(2.0);
  Matrix basis(space.dim(), 2);
  basis << g0, psi;
  const double drive = p.omega_r - p.lambda[1];

  auto block = [&](double lambda1, double amplitude) {
    DeviceParams q = p;
    q.lambda[0] = lambda1;
    const Matrix heff = detail::block_effective_hamiltonian(
        detail::driven_static_hamiltonian(q, space, drive, amplitude), basis);
    return std::pair{heff(0, 0).real(), heff(1, 1).real()};
  };
  const auto bare = block(0.0, 0.0);
  auto shifts = [&](double lambda1, double amplitude) {
    const auto e = block(lambda1, amplitude);
    return std::pair{e.first - bare.first, e.second - bare.second};
  };

  ShiftComparison c;
  const StarkShiftReport r = stark_delta2(p.lambda[0], p.alpha[0], p.lambda[1], DressedBranch::minus);
  c.analytic_drive = -psi1_drive_shift(p.omega_ge_drive, p.lambda[1], p.delta1_convention);
  c.analytic_photon = r.delta2_total;
  c.analytic_total = c.analytic_drive + c.analytic_photon;
  c.numeric_drive = shifts(0.0, p.omega_ge_drive).second;
  c.numeric_photon = shifts(p.lambda[0], 0.0).second;
  const auto both = shifts(p.lambda[0], p.omega_ge_drive);
  c.numeric_total = both.second;
  c.numeric_reference = both.first;
  c.relative_error = c.analytic_total != 0.0 ? std::abs(c.analytic_total - c.numeric_total) / std::abs(c.analytic_total)
                                             : std::abs(c.numeric_total);
  c.drive_ratio = c.analytic_drive != 0.0 ? c.numeric_drive / c.analytic_drive : 0.0;
  return c;
}

}  // namespace holocnot
