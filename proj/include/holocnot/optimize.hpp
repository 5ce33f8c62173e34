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

// Gate evaluation through the tomography pipeline, calibration of gate time
// and qubit frequencies, and the parameter sweeps built on top of them.
//
// Fidelities are process fidelities against CNOT after virtual Z
// corrections: a software phase on each qubit after the gate, chosen to
// maximize the fidelity. The drive tones are fixed from the nominal
// parameters; calibration then moves the qubit frequencies and the gate time
// under that fixed drive.

#pragma once

#include "evolve.hpp"
#include "model.hpp"
#include "nelder_mead.hpp"
#include "parallel.hpp"
#include "tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace holocnot {

/// Post-gate phases diag(1, e^{i q2}, e^{i q1}, e^{i(q1+q2)}) on the logical space.
struct VirtualZ {
  double q1 = 0.0;
  double q2 = 0.0;

  Matrix matrix() const {
    Matrix z = Matrix::Zero(4, 4);
    z(0, 0) = 1.0;
    z(1, 1) = std::polar(1.0, q2);
    z(2, 2) = std::polar(1.0, q1);
    z(3, 3) = std::polar(1.0, q1 + q2);
    return z;
  }

  /// The ideal process that Z o E is compared against, seen from E: Z^dag CNOT.
  Matrix target() const { return matrix().adjoint() * cnot_unitary(); }
};

/// Fidelity of Z o E against CNOT for a chi of E.
inline double corrected_fidelity(const ChiMatrix& chi, const VirtualZ& z) {
  const Vector c = pauli_coefficients(z.target());
  return (c.adjoint() * chi.chi * c)(0, 0).real();
}

struct PhaseFit {
  VirtualZ z;
  double fidelity = 0.0;
};

/// Maximizes a fidelity over the two virtual Z phases: 24 x 24 grid, then a
/// simplex polish around the best cell.
inline PhaseFit best_virtual_z(const std::function<double(const VirtualZ&)>& fidelity) {
  constexpr int kGrid = 24;
  const double step = 2.0 * std::numbers::pi / kGrid;
  PhaseFit best{{}, -1.0};
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const VirtualZ z{i * step, j * step};
      const double f = fidelity(z);
      if (f > best.fidelity) best = {z, f};
    }
  }
  const Box box{{best.z.q1 - step, best.z.q2 - step}, {best.z.q1 + step, best.z.q2 + step}};
  const auto r = nelder_mead([&](const std::vector<double>& x) { return -fidelity(VirtualZ{x[0], x[1]}); },
                             {best.z.q1, best.z.q2}, box, {200, 0.1, 1e-9, 1e-13});
  if (-r.value > best.fidelity) best = {VirtualZ{r.x[0], r.x[1]}, -r.value};
  return best;
}

struct EvaluationOptions {
  HilbertSpace space;
  IntegratorSettings integrator;
  bool correct_phases = true;
  std::optional<VirtualZ> fixed_phases;  // use these instead of fitting
  std::optional<int> shots;              // sampled tomography
  std::uint64_t seed = 20260101;
};

/// Everything one gate run produces.
struct GateEvaluation {
  double fidelity = 0.0;      // after virtual Z
  double raw_fidelity = 0.0;  // no phase correction
  VirtualZ phases;
  ChiMatrix chi;
  std::vector<Matrix> qutrit_outputs;  // 36 reduced two-qutrit states
  std::vector<Matrix> reconstructed;   // 36 tomography estimates (4x4)
  LeakageReport leakage;
  double halving_change = 0.0;
  double norm_defect = 0.0;
  double trace_defect = 0.0;
  int rhs_evaluations = 0;
  GateChannel channel;
};

/// Reduced two-qutrit output of a logical input (resonator traced out).
inline Matrix reduced_output(const GateChannel& channel, const Vector& logical_input) {
  return trace_out_resonator(channel.apply_ket(logical_input), channel.space);
}

/// Tomography of every input through `channel`, chi reconstruction and
/// fidelity.
inline GateEvaluation analyze_channel(const GateChannel& channel, const EvaluationOptions& opt = {}) {
  GateEvaluation ev;
  const auto inputs = input_states();
  const int l1 = channel.space.levels_q1;
  const int l2 = channel.space.levels_q2;
  std::mt19937_64 rng(opt.seed);
  for (const auto& in : inputs) {
    Matrix out = reduced_output(channel, in);
    const auto records = measure_all(out, l1, l2, opt.shots, opt.shots ? &rng : nullptr);
    ev.reconstructed.push_back(reconstruct_density(records).matrix());
    ev.qutrit_outputs.push_back(std::move(out));
  }
  ev.leakage = leakage_report(ev.qutrit_outputs, l1, l2);
  ev.chi = reconstruct_chi(ev.reconstructed).chi;
  ev.raw_fidelity = process_fidelity(ev.chi, chi_ideal_cnot());
  if (opt.fixed_phases) {
    ev.phases = *opt.fixed_phases;
    ev.fidelity = corrected_fidelity(ev.chi, ev.phases);
  } else if (opt.correct_phases) {
    const PhaseFit fit = best_virtual_z([&](const VirtualZ& z) { return corrected_fidelity(ev.chi, z); });
    ev.phases = fit.z;
    ev.fidelity = fit.fidelity;
  } else {
    ev.fidelity = ev.raw_fidelity;
  }
  ev.channel = channel;
  ev.halving_change = channel.halving_change;
  ev.rhs_evaluations = channel.rhs_evaluations;
  return ev;
}

/// Full pipeline for a device and an explicit drive.
inline GateEvaluation evaluate_gate(const DeviceParams& device, const PulseSchedule& schedule, bool with_decoherence,
                                    const EvaluationOptions& opt = {}) {
  device.validate();
  const SystemHamiltonian h = build_hamiltonian(device, schedule, opt.space);
  const CollapseSet collapse = with_decoherence ? standard_collapse_set(device, opt.space) : CollapseSet{};
  const GateRun run = run_gate(h, collapse, opt.integrator);
  GateEvaluation ev = analyze_channel(run.channel, opt);
  ev.norm_defect = run.max_norm_defect;
  ev.trace_defect = run.max_trace_defect;
  return ev;
}

/// Fidelity of the gate described by `params` (drive from its own tuning).
inline double fidelity_objective(const DeviceParams& params, bool with_decoherence, const EvaluationOptions& opt = {}) {
  return evaluate_gate(params, make_schedule(params), with_decoherence, opt).fidelity;
}

/// Closed-system fidelity straight from the propagated kets,
/// sum_n |tr(U^dag K_n)|^2 / 16 over the resonator blocks K_n of the logical
/// columns, maximized over virtual Z. Equal to the tomography pipeline in
/// exact mode, and much cheaper inside an optimizer loop.
inline PhaseFit closed_fidelity_fast(const DeviceParams& device, const PulseSchedule& schedule,
                                     const HilbertSpace& space, const IntegratorSettings& settings) {
  const SystemHamiltonian h = build_hamiltonian(device, schedule, space);
  const GateRun run = run_gate(h, {}, settings);
  const auto idx = logical_indices(space);
  std::vector<Matrix> kraus;
  for (int n = 0; n < space.fock_dim; ++n) {
    Matrix k(4, 4);
    for (int a = 0; a < 4; ++a) {
      const auto l = space.labels(idx[a]);
      for (int b = 0; b < 4; ++b) k(a, b) = run.final_kets(space.index(l[0], l[1], n), b);
    }
    kraus.push_back(std::move(k));
  }
  return best_virtual_z([&](const VirtualZ& z) {
    const Matrix u = z.target();
    double f = 0.0;
    for (const auto& k : kraus) f += std::norm((u.adjoint() * k).trace()) / 16.0;
    return f;
  });
}

/// (|gg> + |fg>) / sqrt2, which CNOT maps to the Bell state.
inline Vector bell_input() {
  Vector v = Vector::Zero(4);
  v(0) = v(2) = std::sqrt(0.5);
  return v;
}

/// (|gg> + |ff>) / sqrt2.
inline Vector bell_target() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = std::sqrt(0.5);
  return v;
}

struct BellResult {
  Matrix rho;  // reconstructed, virtual Z applied
  double fidelity = 0.0;
  double concurrence = 0.0;
};

/// Bell-state generation through `channel`: prepare bell_input(), run the
/// gate, state tomography, then the virtual Z phases.
inline BellResult bell_state(const GateChannel& channel, const VirtualZ& phases, std::optional<int> shots = std::nullopt,
                             std::uint64_t seed = 20260101) {
  const Matrix out = reduced_output(channel, bell_input());
  std::mt19937_64 rng(seed);
  const auto records = measure_all(out, channel.space.levels_q1, channel.space.levels_q2, shots,
                                   shots ? &rng : nullptr);
  const Matrix z = phases.matrix();
  BellResult r;
  r.rho = z * reconstruct_density(records).matrix() * z.adjoint();
  r.fidelity = state_fidelity(r.rho, bell_target());
  r.concurrence = concurrence(r.rho);
  return r;
}

/// Channel of a logical 4x4 unitary on a resonator-free qutrit space.
inline GateChannel channel_of_unitary(const Matrix& u) {
  const HilbertSpace space{3, 3, 1};
  const auto idx = logical_indices(space);
  Matrix kets = Matrix::Zero(space.dim(), 4);
  for (int a = 0; a < 4; ++a) kets.row(idx[a]) = u.row(a);
  return channel_from_kets(space, kets);
}

// ---------------------------------------------------------------------------
// Calibration.

struct CalibrationBounds {
  std::array<double, 2> gate_time;  // s
  std::array<double, 2> omega1;     // rad/s
  std::array<double, 2> omega2;

  /// Gate time in [0.5, 2] pi / Omega, omega_1 within 30 MHz and omega_2
  /// within 2 MHz of the resonator.
  static CalibrationBounds around(const DeviceParams& p) {
    const double tpi = std::numbers::pi / std::max(p.omega_ge_drive, p.omega_ef_drive);
    return {{0.5 * tpi, 2.0 * tpi}, {p.omega_r - mhz(30.0), p.omega_r + mhz(30.0)},
            {p.omega_r - mhz(2.0), p.omega_r + mhz(2.0)}};
  }

  void validate() const {
    for (const auto* b : {&gate_time, &omega1, &omega2}) {
      if (!((*b)[0] <= (*b)[1])) throw std::invalid_argument("calibration bounds are empty");
    }
    if (!(gate_time[0] > 0.0)) throw std::invalid_argument("gate time bounds must be positive");
  }
};

struct OptimizationResult {
  double gate_time = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double fidelity = 0.0;  // closed-system objective at the optimum
  int evaluations = 0;
  bool converged = false;
  std::pair<double, double> tones{};  // the fixed drive frequencies
};

struct CalibrationOptions {
  int budget = 150;  // objective evaluations, coarse grid included
  HilbertSpace space;
  IntegratorSettings integrator{.verify = false};
};

/// Device with the calibrated frequencies and gate time applied.
inline DeviceParams apply_calibration(DeviceParams p, const OptimizationResult& r) {
  p.gate_time = r.gate_time;
  p.omega = {r.omega1, r.omega2};
  return p;
}

/// Schedule for a calibrated device: the fixed tones with the plateau
/// filling the calibrated gate time.
inline PulseSchedule calibrated_schedule(const DeviceParams& nominal, const OptimizationResult& r) {
  return make_schedule(apply_calibration(nominal, r), r.tones);
}

/// Coarse grid in gate time (0.7 to 1.6 pi / Omega past the ramp) and
/// omega_1 (12 MHz either side of nominal), a short omega_2 line, then a
/// bounded simplex from the best coarse point. Deterministic.
inline OptimizationResult calibrate(const DeviceParams& nominal, const CalibrationBounds& bounds,
                                    const CalibrationOptions& opt = {}) {
  nominal.validate();
  bounds.validate();
  if (opt.budget < 50) throw std::invalid_argument("calibration budget must be at least 50 evaluations");
  OptimizationResult res;
  res.tones = tuned_drive_frequencies(nominal);

  // Simplex coordinates: gate time in ns, frequencies in MHz off the resonator.
  auto objective = [&](const std::array<double, 3>& x) {
    ++res.evaluations;
    DeviceParams d = nominal;
    d.gate_time = std::max(ns(x[0]), 2.0 * d.ramp_time);
    d.omega = {nominal.omega_r + mhz(x[1]), nominal.omega_r + mhz(x[2])};
    return closed_fidelity_fast(d, make_schedule(d, res.tones), opt.space, opt.integrator).fidelity;
  };
  const std::array<double, 3> lo{to_ns(bounds.gate_time[0]), to_mhz(bounds.omega1[0] - nominal.omega_r),
                                 to_mhz(bounds.omega2[0] - nominal.omega_r)};
  const std::array<double, 3> hi{to_ns(bounds.gate_time[1]), to_mhz(bounds.omega1[1] - nominal.omega_r),
                                 to_mhz(bounds.omega2[1] - nominal.omega_r)};
  const double tpi_ns = to_ns(std::numbers::pi / std::max(nominal.omega_ge_drive, nominal.omega_ef_drive));
  std::array<double, 3> x{std::clamp(tpi_ns + to_ns(nominal.ramp_time), lo[0], hi[0]),
                          std::clamp(to_mhz(nominal.omega[0] - nominal.omega_r), lo[1], hi[1]),
                          std::clamp(to_mhz(nominal.omega[1] - nominal.omega_r), lo[2], hi[2])};
  // Joint grid in gate time and Q1 frequency around the starting point,
  // clipped to the bounds, then a line in Q2 frequency through the best cell.
  double best = -1.0;
  auto consider = [&](std::array<double, 3> trial) {
    for (int a = 0; a < 3; ++a) trial[a] = std::clamp(trial[a], lo[a], hi[a]);
    const double f = objective(trial);
    if (f > best) {
      best = f;
      x = trial;
    }
  };
  const std::array<double, 3> start = x;
  const bool small = opt.budget < 120;
  const int rows = small ? 4 : 7, cols = small ? 5 : 9;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      consider({to_ns(nominal.ramp_time) + tpi_ns * (0.7 + 0.9 * i / (rows - 1)),
                start[1] + 24.0 * j / (cols - 1) - 12.0, start[2]});
    }
  }
  const std::array<double, 3> centre = x;
  for (int k = 0; k < 9; ++k) {
    if (k != 4) consider({centre[0], centre[1], start[2] + 0.1 * (k - 4)});
  }
  const int remaining = opt.budget - res.evaluations;
  NelderMeadResult nm;
  nm.x = {x[0], x[1], x[2]};
  nm.value = -best;
  if (remaining >= 4) {
    const Box box{{lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}};
    nm = nelder_mead([&](const std::vector<double>& v) { return -objective({v[0], v[1], v[2]}); },
                     {x[0], x[1], x[2]}, box, {remaining, 0.03, 1e-5, 1e-8});
    if (-nm.value < best) {
      nm.x = {x[0], x[1], x[2]};
      nm.value = -best;
    }
  }
  res.gate_time = std::max(ns(nm.x[0]), 2.0 * nominal.ramp_time);
  res.omega1 = nominal.omega_r + mhz(nm.x[1]);
  res.omega2 = nominal.omega_r + mhz(nm.x[2]);
  res.fidelity = -nm.value;
  res.converged = nm.converged;
  return res;
}

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepRow {
  double alpha = 0.0;  // rad/s, both qutrits
  double drive = 0.0;  // rad/s, both tones
};

/// The eleven configurations of the fidelity table, in column order.
inline std::vector<SweepRow> sweep_configurations() {
  std::vector<SweepRow> rows;
  for (double a : {247.0, 500.0, 800.0, 1000.0, 2000.0}) rows.push_back({mhz(a), mhz(2.3)});
  for (double w : {2.3, 1.8, 1.5, 1.0, 0.5}) rows.push_back({mhz(247.0), mhz(w)});
  rows.push_back({mhz(1000.0), mhz(1.5)});
  return rows;
}

/// Nominal device for one configuration: both anharmonicities and both
/// drive amplitudes set, everything else from `base`.
inline DeviceParams configure(const DeviceParams& base, const SweepRow& row) {
  DeviceParams p = base;
  p.alpha = {row.alpha, row.alpha};
  p.omega_ge_drive = row.drive;
  p.omega_ef_drive = row.drive;
  p.gate_time = p.ramp_time + std::numbers::pi / row.drive;
  return p;
}

struct CalibratedGate {
  DeviceParams nominal;
  OptimizationResult calibration;
  GateEvaluation closed;
  std::optional<GateEvaluation> open;
};

/// Calibrates, then evaluates the calibrated gate with verified integration,
/// without and (optionally) with decoherence.
inline CalibratedGate calibrate_and_evaluate(const DeviceParams& nominal, bool with_decoherence,
                                             const CalibrationOptions& copt = {},
                                             const EvaluationOptions& eopt = {}) {
  CalibratedGate g;
  g.nominal = nominal;
  g.calibration = calibrate(nominal, CalibrationBounds::around(nominal), copt);
  const DeviceParams device = apply_calibration(nominal, g.calibration);
  const PulseSchedule schedule = calibrated_schedule(nominal, g.calibration);
  g.closed = evaluate_gate(device, schedule, false, eopt);
  if (with_decoherence) g.open = evaluate_gate(device, schedule, true, eopt);
  return g;
}

struct SweepEntry {
  SweepRow row;
  CalibratedGate gate;
};

/// Calibrates and evaluates every configuration. Repeated configurations
/// are computed once.
inline std::vector<SweepEntry> fidelity_sweep(const DeviceParams& base, bool with_decoherence = true,
                                             const CalibrationOptions& copt = {},
                                             const EvaluationOptions& eopt = {},
                                             std::vector<SweepRow> rows = sweep_configurations()) {
  std::vector<std::size_t> unique_of(rows.size());
  std::vector<SweepRow> unique;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = std::find_if(unique.begin(), unique.end(), [&](const SweepRow& r) {
      return r.alpha == rows[i].alpha && r.drive == rows[i].drive;
    });
    unique_of[i] = static_cast<std::size_t>(it - unique.begin());
    if (it == unique.end()) unique.push_back(rows[i]);
  }
  const auto gates = parallel_map(unique.size(), [&](std::size_t k) {
    return calibrate_and_evaluate(configure(base, unique[k]), with_decoherence, copt, eopt);
  });
  std::vector<SweepEntry> out;
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back({rows[i], gates[unique_of[i]]});
  return out;
}

struct SweepCell {
  double alpha = 0.0;
  double lambda = 0.0;
  OptimizationResult calibration;
};

struct SweepResult {
  std::vector<double> alpha_grid;
  std::vector<double> lambda_grid;
  std::vector<SweepCell> cells;  // alpha major

  const SweepCell& at(std::size_t i, std::size_t j) const { return cells.at(i * lambda_grid.size() + j); }
};

/// Closed-system calibration over an (alpha, lambda) grid with both drives
/// at `drive`; both qutrits share alpha and lambda.
inline SweepResult sweep_2d(const DeviceParams& base, const std::vector<double>& alpha_grid,
                            const std::vector<double>& lambda_grid, double drive = mhz(2.0),
                            const CalibrationOptions& copt = {}) {
  if (alpha_grid.empty() || lambda_grid.empty()) throw std::invalid_argument("sweep_2d: empty grid");
  SweepResult r{alpha_grid, lambda_grid, {}};
  const std::size_t n = alpha_grid.size() * lambda_grid.size();
  const auto cals = parallel_map(n, [&](std::size_t k) {
    DeviceParams p = configure(base, {alpha_grid[k / lambda_grid.size()], drive});
    p.lambda = {lambda_grid[k % lambda_grid.size()], lambda_grid[k % lambda_grid.size()]};
    return calibrate(p, CalibrationBounds::around(p), copt);
  });
  for (std::size_t k = 0; k < n; ++k) {
    r.cells.push_back({alpha_grid[k / lambda_grid.size()], lambda_grid[k % lambda_grid.size()], cals[k]});
  }
  return r;
}

struct RobustnessPoint {
  double offset = 0.0;         // rad/s
  double fidelity = 0.0;
  double infidelity = 0.0;     // 1 - fidelity
  double excess = 0.0;         // fidelity(0) - fidelity(offset)
  double estimate = 0.0;       // [pi offset^2 / (8 Omega^2)]^2
};

/// Re-simulates a fixed gate with both drive tones moved by each offset.
/// Virtual Z phases stay at their zero-offset values.
inline std::vector<RobustnessPoint> robustness_scan(const DeviceParams& device, const PulseSchedule& schedule,
                                                    const std::vector<double>& offsets, bool with_decoherence = false,
                                                    const EvaluationOptions& opt = {}) {
  const double drive = std::max(device.omega_ge_drive, device.omega_ef_drive);
  for (double d : offsets) {
    if (std::abs(d) > drive) throw std::invalid_argument("robustness offsets must stay within the drive amplitude");
  }
  const GateEvaluation base = evaluate_gate(device, schedule, with_decoherence, opt);
  EvaluationOptions fixed = opt;
  fixed.fixed_phases = base.phases;
  const auto points = parallel_map(offsets.size(), [&](std::size_t k) {
    PulseSchedule s = schedule;
    s.tones.at(0).frequency += offsets[k];
    s.tones.at(1).frequency += offsets[k];
    const double f = offsets[k] == 0.0 ? base.fidelity : evaluate_gate(device, s, with_decoherence, fixed).fidelity;
    const double x = std::numbers::pi * offsets[k] * offsets[k] / (8.0 * drive * drive);
    return RobustnessPoint{offsets[k], f, 1.0 - f, base.fidelity - f, x * x};
  });
  return points;
}

}  // namespace holocnot
