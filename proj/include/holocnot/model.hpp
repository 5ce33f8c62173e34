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

// Device parameters and Hamiltonians of two qutrits coupled to a bus
// resonator, with a two-tone drive on the target qutrit Q2.
//
// Frame: everything is written in a frame rotating at omega_r per excitation
// quantum, so a bare level k of qutrit j sits at eps_{j,k} - k omega_r and the
// resonator carries no static energy. Couplings are then time independent and
// a drive tone at omega_d oscillates at omega_d - omega_r.

#pragma once

#include "hilbert.hpp"
#include "stark.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace holocnot {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// How the two tone frequencies are chosen. `analytic` uses the perturbative
/// shift formulas; `dressed` reads the branch energies off the diagonalized
/// static Hamiltonian and only adds the drive-induced shift analytically.
enum class DriveTuning { dressed, analytic };

inline const char* to_string(DriveTuning t) { return t == DriveTuning::dressed ? "dressed" : "analytic"; }

/// Linear frequency in MHz to angular frequency in rad/s.
inline constexpr double mhz(double f) { return kTwoPi * f * 1e6; }
inline constexpr double to_mhz(double w) { return w / (kTwoPi * 1e6); }
inline constexpr double ns(double t) { return t * 1e-9; }
inline constexpr double us(double t) { return t * 1e-6; }
inline constexpr double to_ns(double t) { return t * 1e9; }

struct DeviceParams {
  double omega_r = mhz(5584.0);
  std::array<double, 2> omega{mhz(5580.0), mhz(5584.0)};  // g-e frequencies during the gate
  std::array<double, 2> alpha{mhz(242.0), mhz(249.0)};    // alpha_j = 2 w_e - w_f
  std::array<double, 2> lambda{mhz(20.8), mhz(19.9)};
  double omega_ge_drive = mhz(2.2);
  double omega_ef_drive = mhz(2.2);
  std::array<double, 2> t1_e{us(23.9), us(15.9)};
  std::array<double, 2> t1_f{us(13.0), us(10.7)};
  std::array<double, 2> t_phi{us(40.0), us(40.0)};
  double kappa = 0.0;  // resonator energy decay rate (1/s)
  double ramp_time = ns(10.0);
  double gate_time = ns(10.0) + std::numbers::pi / mhz(2.2);
  bool full_crosstalk = false;
  Delta1Convention delta1_convention = Delta1Convention::single;
  DriveTuning drive_tuning = DriveTuning::dressed;

  static DeviceParams table1() { return DeviceParams{}; }

  /// Throws std::invalid_argument on a hard violation.
  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
      }
    };
    positive(omega_r, "omega_r");
    for (int j = 0; j < 2; ++j) {
      positive(omega[j], "omega_j");
      positive(alpha[j], "alpha_j");
      positive(lambda[j], "lambda_j");
      positive(t1_e[j], "t1_e");
      positive(t1_f[j], "t1_f");
      positive(t_phi[j], "t_phi");
    }
    if (omega_ge_drive < 0.0 || omega_ef_drive < 0.0) {
      throw std::invalid_argument("drive amplitudes must be non-negative");
    }
    if (kappa < 0.0) throw std::invalid_argument("kappa must be non-negative");
    if (ramp_time < 0.0) throw std::invalid_argument("ramp_time must be non-negative");
    if (gate_time < 2.0 * ramp_time) {
      throw std::invalid_argument("gate_time must cover both ramps (gate_time >= 2 ramp_time)");
    }
  }

  /// Soft regime checks; the model still runs when these fire.
  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (std::max(omega_ge_drive, omega_ef_drive) > 0.2 * lambda[1]) {
      w.emplace_back("drive amplitude is not small compared with lambda_2");
    }
    if (std::max(lambda[0], lambda[1]) > 0.2 * std::min(alpha[0], alpha[1])) {
      w.emplace_back("coupling is not small compared with the anharmonicity");
    }
    return w;
  }
};

enum class Transition { ge, ef };

struct Tone {
  double frequency = 0.0;  // angular, lab frame
  double amplitude = 0.0;  // Rabi frequency on the designated transition
  double phase = 0.0;
  Transition target = Transition::ge;
};

/// Two-tone flattop drive on Q2.
struct PulseSchedule {
  std::vector<Tone> tones;
  double ramp_time = 0.0;
  double plateau_time = 0.0;

  double duration() const { return plateau_time + 2.0 * ramp_time; }

  /// Times where the envelope changes shape; integrators keep steps aligned to them.
  std::vector<double> breakpoints() const {
    std::vector<double> b{0.0};
    if (ramp_time > 0.0) b.push_back(ramp_time);
    if (plateau_time > 0.0 && ramp_time > 0.0) b.push_back(ramp_time + plateau_time);
    b.push_back(duration());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }
};

/// Cosine ramp up over [0, ramp], 1 on the plateau, cosine ramp down; zero
/// outside the pulse.
inline double flattop_envelope(double t, double ramp_time, double plateau_time) {
  if (ramp_time < 0.0 || plateau_time < 0.0) {
    throw std::invalid_argument("flattop_envelope: negative ramp or plateau time");
  }
  const double total = plateau_time + 2.0 * ramp_time;
  if (t <= 0.0 || t >= total) return 0.0;
  if (t < ramp_time) return 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp_time));
  if (t <= ramp_time + plateau_time) return 1.0;
  const double s = total - t;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * s / ramp_time));
}

/// Bare level energies of qutrit j (0-based) for an equal-anharmonicity
/// ladder: k w - k (k - 1) a / 2.
inline std::vector<double> level_energies(const DeviceParams& p, int j, int levels = 4) {
  if (j < 0 || j > 1) throw std::out_of_range("qutrit index must be 0 or 1");
  if (levels < 1) throw DimensionError("level_energies needs at least one level");
  std::vector<double> e(levels);
  for (int k = 0; k < levels; ++k) e[k] = k * p.omega[j] - 0.5 * k * (k - 1) * p.alpha[j];
  return e;
}

/// omega_{f,j}: energy of |f_j> relative to |g_j>.
inline double omega_f(const DeviceParams& p, int j) { return 2.0 * p.omega[j] - p.alpha[j]; }

/// Downward shift of |f1>|psi_1^-> used to retune the drives: drive-induced
/// delta_1 (per the configured convention) minus the signed photon-induced
/// delta_2.
inline double psi1_total_shift(const DeviceParams& p) {
  const double d1 = psi1_drive_shift(p.omega_ge_drive, p.lambda[1], p.delta1_convention);
  const StarkShiftReport r = stark_delta2(p.lambda[0], p.alpha[0], p.lambda[1], DressedBranch::minus);
  return d1 - r.delta2_total;
}

/// Stark-compensated tone frequencies {w_d1, w_d2}; w_d1 + w_d2 = w_{f,2}.
inline std::pair<double, double> compensated_drive_frequencies(const DeviceParams& p) {
  const double shift = psi1_total_shift(p);
  const double wd1 = p.omega_r - p.lambda[1] - shift;
  const double wd2 = omega_f(p, 1) - p.omega_r + p.lambda[1] + shift;
  return {wd1, wd2};
}

/// Drive with tones at the given frequencies and phases 0 (g-e) and pi (e-f),
/// plateau filling gate_time. `detuning` moves the g-e tone up and the e-f
/// tone down, detuning |psi_1^-> from both while keeping the two-photon
/// resonance.
inline PulseSchedule make_schedule(const DeviceParams& p, std::pair<double, double> frequencies,
                                   double detuning = 0.0) {
  const auto [wd1, wd2] = frequencies;
  PulseSchedule s;
  s.tones = {Tone{wd1 + detuning, p.omega_ge_drive, 0.0, Transition::ge},
             Tone{wd2 - detuning, p.omega_ef_drive, std::numbers::pi, Transition::ef}};
  s.ramp_time = p.ramp_time;
  s.plateau_time = std::max(0.0, p.gate_time - 2.0 * p.ramp_time);
  return s;
}

struct MatrixEntry {
  int row = 0;
  int col = 0;
  cplx value{};
};

/// A group of matrix elements sharing one time dependence
/// value * exp(-i frequency t) * (enveloped ? envelope(t) : 1).
struct HarmonicTerm {
  std::vector<MatrixEntry> entries;
  double frequency = 0.0;
  bool enveloped = false;
};

/// Time-dependent Hamiltonian H(t) = diag + sum_terms c_k(t) M_k, Hermitian at
/// every t because each term appears together with its adjoint partner.
struct SystemHamiltonian {
  HilbertSpace space;
  Eigen::VectorXd diagonal;
  std::vector<HarmonicTerm> terms;
  double ramp_time = 0.0;
  double plateau_time = 0.0;

  double duration() const { return plateau_time + 2.0 * ramp_time; }

  double envelope(double t) const { return flattop_envelope(t, ramp_time, plateau_time); }

  cplx coefficient(const HarmonicTerm& term, double t) const {
    const cplx phase = std::polar(1.0, -term.frequency * t);
    return term.enveloped ? envelope(t) * phase : phase;
  }

  Operator static_part() const {
    Operator h = diagonal.cast<cplx>().asDiagonal();
    for (const auto& term : terms) {
      if (term.enveloped || term.frequency != 0.0) continue;
      for (const auto& e : term.entries) h(e.row, e.col) += e.value;
    }
    return h;
  }

  Operator drive_part(double t) const {
    Operator h = Operator::Zero(space.dim(), space.dim());
    for (const auto& term : terms) {
      if (!term.enveloped && term.frequency == 0.0) continue;
      const cplx c = coefficient(term, t);
      for (const auto& e : term.entries) h(e.row, e.col) += c * e.value;
    }
    return h;
  }

  Operator at(double t) const { return static_part() + drive_part(t); }
};

namespace detail {

/// Nonzero entries of embed(op, s, space), scaled.
inline std::vector<MatrixEntry> embedded_entries(const Operator& op, Subsystem s,
                                                 const HilbertSpace& space, cplx scale = 1.0) {
  const Operator full = embed(op, s, space);
  std::vector<MatrixEntry> out;
  for (int c = 0; c < full.cols(); ++c) {
    for (int r = 0; r < full.rows(); ++r) {
      if (full(r, c) != 0.0) out.push_back({r, c, scale * full(r, c)});
    }
  }
  return out;
}

inline std::vector<MatrixEntry> adjoint_entries(const std::vector<MatrixEntry>& in) {
  std::vector<MatrixEntry> out;
  out.reserve(in.size());
  for (const auto& e : in) out.push_back({e.col, e.row, std::conj(e.value)});
  return out;
}

inline void add_with_adjoint(std::vector<HarmonicTerm>& terms, std::vector<MatrixEntry> entries,
                             double frequency, bool enveloped) {
  auto adj = adjoint_entries(entries);
  terms.push_back({std::move(entries), frequency, enveloped});
  terms.push_back({std::move(adj), -frequency, enveloped});
}

}  // namespace detail

/// Static frame energies sum_j (eps_{j,k_j} - k_j omega_r).
inline Eigen::VectorXd frame_diagonal(const DeviceParams& p, const HilbertSpace& space) {
  space.validate();
  const auto e1 = level_energies(p, 0, space.levels_q1);
  const auto e2 = level_energies(p, 1, space.levels_q2);
  Eigen::VectorXd d(space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const auto [k1, k2, n] = space.labels(i);
    d(i) = (e1[k1] - k1 * p.omega_r) + (e2[k2] - k2 * p.omega_r);
  }
  return d;
}

/// Full Hamiltonian description: static ladder couplings
/// lambda_j sqrt(k+1) (a |k+1><k|_j + h.c.) plus the drive tones on Q2.
inline SystemHamiltonian build_hamiltonian(const DeviceParams& p, const PulseSchedule& schedule,
                                           const HilbertSpace& space) {
  space.validate();
  SystemHamiltonian h;
  h.space = space;
  h.diagonal = frame_diagonal(p, space);
  h.ramp_time = schedule.ramp_time;
  h.plateau_time = schedule.plateau_time;

  const Operator a = annihilation(space.fock_dim);
  for (int j = 0; j < 2; ++j) {
    const Subsystem s = j == 0 ? Subsystem::q1 : Subsystem::q2;
    const int levels = space.local_dim(s);
    for (int k = 0; k + 1 < levels; ++k) {
      // a |k+1><k|_j needs the resonator factor too, so build it on the full space.
      const Operator local = qutrit_transition(levels, k, k + 1);
      const Operator full = embed(local, s, space) * embed(a, Subsystem::resonator, space);
      std::vector<MatrixEntry> entries;
      const double g = p.lambda[j] * std::sqrt(static_cast<double>(k + 1));
      for (int c = 0; c < full.cols(); ++c) {
        for (int r = 0; r < full.rows(); ++r) {
          if (full(r, c) != 0.0) entries.push_back({r, c, g * full(r, c)});
        }
      }
      detail::add_with_adjoint(h.terms, std::move(entries), 0.0, false);
    }
  }

  const int levels2 = space.levels_q2;
  for (const Tone& tone : schedule.tones) {
    const int designated = tone.target == Transition::ge ? 0 : 1;
    const double frame_freq = tone.frequency - p.omega_r;
    for (int k = 0; k < 2; ++k) {
      if (k != designated && !p.full_crosstalk) continue;
      const double scale = std::sqrt(static_cast<double>(k + 1) / (designated + 1));
      const cplx amp = tone.amplitude * scale * std::polar(1.0, tone.phase);
      auto entries = detail::embedded_entries(qutrit_transition(levels2, k, k + 1), Subsystem::q2,
                                              space, amp);
      detail::add_with_adjoint(h.terms, std::move(entries), frame_freq, true);
    }
  }
  return h;
}

/// Static part of the Hamiltonian in the frame (no drive).
inline Operator static_hamiltonian(const DeviceParams& p, const HilbertSpace& space) {
  PulseSchedule none;
  return build_hamiltonian(p, none, space).static_part();
}

/// Drive Hamiltonian at time t in the frame.
inline Operator drive_hamiltonian(const DeviceParams& p, const PulseSchedule& schedule,
                                  const HilbertSpace& space, double t) {
  return build_hamiltonian(p, schedule, space).drive_part(t);
}

/// exp(i D t) op exp(-i D t) for a real diagonal D: moves an operator into the
/// interaction picture of the bare level energies.
inline Operator to_interaction_picture(const Operator& op, const Eigen::VectorXd& diag, double t) {
  Operator out = op;
  for (int c = 0; c < op.cols(); ++c) {
    for (int r = 0; r < op.rows(); ++r) out(r, c) *= std::polar(1.0, (diag(r) - diag(c)) * t);
  }
  return out;
}

/// Frame energies of the static eigenstates that best overlap |f1 g2 0>,
/// (|f1 e2 0> - |f1 g2 1>)/sqrt2 and |f1 f2 0>.
struct BranchEnergies {
  double g0 = 0.0;
  double psi = 0.0;
  double f0 = 0.0;
  double min_overlap = 0.0;  // smallest of the three squared overlaps
};

inline BranchEnergies dressed_branch_energies(const DeviceParams& p, const HilbertSpace& space = {}) {
  if (space.levels_q1 < 3 || space.levels_q2 < 3 || space.fock_dim < 2) {
    throw DimensionError("dressed_branch_energies needs |f> on both qutrits and one photon");
  }
  const Operator h = static_hamiltonian(p, space);
  const Eigen::SelfAdjointEigenSolver<Operator> es(h);
  auto closest = [&](const Vector& v, double& overlap) {
    Eigen::Index best = 0;
    const Eigen::VectorXd w = (es.eigenvectors().adjoint() * v).cwiseAbs2();
    overlap = w.maxCoeff(&best);
    return es.eigenvalues()(best);
  };
  const Vector g0 = space.basis(Level::f, Level::g, 0);
  const Vector f0 = space.basis(Level::f, Level::f, 0);
  const Vector psi = (space.basis(Level::f, Level::e, 0) - space.basis(Level::f, Level::g, 1)) / std::sqrt(2.0);
  BranchEnergies e;
  double o1 = 0.0, o2 = 0.0, o3 = 0.0;
  e.g0 = closest(g0, o1);
  e.psi = closest(psi, o2);
  e.f0 = closest(f0, o3);
  e.min_overlap = std::min({o1, o2, o3});
  return e;
}

/// Tone frequencies resonant with the dressed |f1>-branch transitions, with
/// the drive-induced shift of |psi_1^-> subtracted per the configured
/// convention. The sum stays on the two-photon resonance.
inline std::pair<double, double> dressed_drive_frequencies(const DeviceParams& p, const HilbertSpace& space = {}) {
  const BranchEnergies e = dressed_branch_energies(p, space);
  const double d1 = psi1_drive_shift(p.omega_ge_drive, p.lambda[1], p.delta1_convention);
  return {p.omega_r + (e.psi - e.g0) - d1, p.omega_r + (e.f0 - e.psi) + d1};
}

inline std::pair<double, double> tuned_drive_frequencies(const DeviceParams& p) {
  return p.drive_tuning == DriveTuning::dressed ? dressed_drive_frequencies(p) : compensated_drive_frequencies(p);
}

/// Gate drive for the configured tuning.
inline PulseSchedule make_schedule(const DeviceParams& p, double detuning = 0.0) {
  return make_schedule(p, tuned_drive_frequencies(p), detuning);
}

/// Total excitation number operator sum_j sum_k k |k><k|_j + a^dag a.
inline Operator excitation_number(const HilbertSpace& space) {
  Operator n = Operator::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) n(i, i) = space.excitations(i);
  return n;
}

}  // namespace holocnot
