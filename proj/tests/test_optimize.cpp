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

#include "holocnot/optimize.hpp"

#include <gtest/gtest.h>

namespace holocnot {
namespace {

// A short gate on a small space keeps these fast.
const HilbertSpace kSmall{3, 3, 2};

DeviceParams short_gate() {
  DeviceParams p;
  p.omega_ge_drive = p.omega_ef_drive = mhz(6.0);
  p.gate_time = p.ramp_time + std::numbers::pi / mhz(6.0);
  return p;
}

TEST(VirtualZTest, IdentityPhasesLeaveTheTarget) {
  EXPECT_EQ(VirtualZ{}.target(), cnot_unitary());
  const VirtualZ z{0.3, -1.1};
  EXPECT_NEAR((z.matrix() * z.target() - cnot_unitary()).norm(), 0.0, 1e-15);
  EXPECT_NEAR(corrected_fidelity(chi_of_unitary(z.target()), z), 1.0, 1e-14);
}

TEST(VirtualZTest, FitRecoversKnownPhases) {
  const VirtualZ truth{2.0, 4.5};
  const ChiMatrix chi = chi_of_unitary(truth.target());
  const PhaseFit fit = best_virtual_z([&](const VirtualZ& z) { return corrected_fidelity(chi, z); });
  EXPECT_NEAR(fit.fidelity, 1.0, 1e-10);
  EXPECT_NEAR(std::abs(std::polar(1.0, fit.z.q1) - std::polar(1.0, truth.q1)), 0.0, 1e-4);
  EXPECT_NEAR(std::abs(std::polar(1.0, fit.z.q2) - std::polar(1.0, truth.q2)), 0.0, 1e-4);
}

TEST(Objective, UndrivenGateScoresAQuarterWithoutPhaseCorrection) {
  DeviceParams p = short_gate();
  PulseSchedule s = make_schedule(p);
  for (auto& t : s.tones) t.amplitude = 0.0;
  EvaluationOptions opt{.space = kSmall};
  opt.fixed_phases = VirtualZ{};
  const GateEvaluation ev = evaluate_gate(p, s, false, opt);
  // Free evolution is diagonal in the logical basis; |tr(CNOT^dag D)|^2 / 16
  // is at most 1/4 for diagonal unitaries D and reached up to phases.
  EXPECT_LE(ev.fidelity, 0.25 + 1e-9);
  EXPECT_LE(ev.raw_fidelity, 0.25 + 1e-9);
  const GateEvaluation fitted = evaluate_gate(p, s, false, {.space = kSmall});
  EXPECT_NEAR(fitted.fidelity, 0.25, 0.02);
  EXPECT_LE(fitted.fidelity, 0.25 + 1e-9);
}

TEST(Objective, FastPathMatchesTheTomographyPipeline) {
  const DeviceParams p = short_gate();
  const PulseSchedule s = make_schedule(p);
  const PhaseFit fast = closed_fidelity_fast(p, s, kSmall, {});
  const GateEvaluation full = evaluate_gate(p, s, false, {.space = kSmall});
  EXPECT_NEAR(fast.fidelity, full.fidelity, 1e-8);
}

TEST(Objective, DecoherenceDoesNotHelp) {
  const DeviceParams p = short_gate();
  const PulseSchedule s = make_schedule(p);
  const GateEvaluation closed = evaluate_gate(p, s, false, {.space = kSmall});
  EvaluationOptions fixed{.space = kSmall};
  fixed.fixed_phases = closed.phases;
  const GateEvaluation open = evaluate_gate(p, s, true, fixed);
  EXPECT_LE(open.fidelity, closed.fidelity + 1e-6);
  EXPECT_LE(open.trace_defect, 1e-8);
  for (const auto& rho : open.reconstructed) EXPECT_GE(DensityMatrix(rho).min_eigenvalue(), -1e-10);
}

TEST(Objective, ShotNoiseIsSeeded) {
  const DeviceParams p = short_gate();
  const PulseSchedule s = make_schedule(p);
  EvaluationOptions opt{.space = kSmall, .integrator = {.verify = false}};
  opt.shots = 500;
  const double a = evaluate_gate(p, s, false, opt).fidelity;
  const double b = evaluate_gate(p, s, false, opt).fidelity;
  EXPECT_EQ(a, b);
  opt.seed += 1;
  EXPECT_NE(evaluate_gate(p, s, false, opt).fidelity, a);
}

TEST(Bell, PerfectGateGivesTheBellState) {
  const BellResult b = bell_state(channel_of_unitary(cnot_unitary()), VirtualZ{});
  EXPECT_NEAR(b.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(b.concurrence, 1.0, 1e-7);
  // Uncorrected phases on the Q2 |f> branch rotate the state away from the target.
  const VirtualZ z{0.0, std::numbers::pi / 2.0};
  const BellResult off = bell_state(channel_of_unitary(z.target()), VirtualZ{});
  EXPECT_NEAR(off.fidelity, 0.5, 1e-12);
  EXPECT_NEAR(bell_state(channel_of_unitary(z.target()), z).fidelity, 1.0, 1e-12);
  EXPECT_NEAR(off.concurrence, 1.0, 1e-7);
}

TEST(Calibration, BoundsAndBudget) {
  const DeviceParams p = short_gate();
  CalibrationBounds b = CalibrationBounds::around(p);
  EXPECT_NO_THROW(b.validate());
  std::swap(b.omega1[0], b.omega1[1]);
  EXPECT_THROW(b.validate(), std::invalid_argument);
  EXPECT_THROW(calibrate(p, CalibrationBounds::around(p), {.budget = 49, .space = kSmall}), std::invalid_argument);
}

TEST(Calibration, DeterministicWithinBoundsAndBudget) {
  const DeviceParams p = short_gate();
  const CalibrationBounds b = CalibrationBounds::around(p);
  const CalibrationOptions opt{.budget = 60, .space = kSmall};
  const OptimizationResult r1 = calibrate(p, b, opt);
  const OptimizationResult r2 = calibrate(p, b, opt);
  EXPECT_EQ(r1.gate_time, r2.gate_time);
  EXPECT_EQ(r1.omega1, r2.omega1);
  EXPECT_EQ(r1.fidelity, r2.fidelity);
  EXPECT_LE(r1.evaluations, opt.budget);
  EXPECT_GE(r1.gate_time, b.gate_time[0] - 1e-15);
  EXPECT_LE(r1.gate_time, b.gate_time[1] + 1e-15);
  EXPECT_GE(r1.omega1, b.omega1[0]);
  EXPECT_LE(r1.omega1, b.omega1[1]);
  EXPECT_GE(r1.omega2, b.omega2[0]);
  EXPECT_LE(r1.omega2, b.omega2[1]);
  // The reported optimum is reproducible from the returned settings.
  const PhaseFit again =
      closed_fidelity_fast(apply_calibration(p, r1), calibrated_schedule(p, r1), kSmall, opt.integrator);
  EXPECT_NEAR(again.fidelity, r1.fidelity, 1e-12);
  // And no worse than the uncalibrated gate.
  EXPECT_GE(r1.fidelity, closed_fidelity_fast(p, make_schedule(p, r1.tones), kSmall, opt.integrator).fidelity);
}

TEST(FidelitySweep, ConfigurationsAndDeduplication) {
  const auto rows = sweep_configurations();
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_NEAR(to_mhz(rows[0].alpha), 247.0, 1e-9);
  EXPECT_NEAR(to_mhz(rows[9].drive), 0.5, 1e-12);
  EXPECT_EQ(rows[0].alpha, rows[5].alpha);
  EXPECT_EQ(rows[0].drive, rows[5].drive);
  const DeviceParams c = configure(DeviceParams{}, rows[10]);
  EXPECT_NEAR(to_mhz(c.alpha[1]), 1000.0, 1e-9);
  EXPECT_NEAR(to_ns(c.gate_time), 10.0 + 1e3 / 3.0, 1e-6);

  const std::vector<SweepRow> pair{{mhz(800.0), mhz(6.0)}, {mhz(800.0), mhz(6.0)}};
  const auto out = fidelity_sweep(DeviceParams{}, false, {.budget = 50, .space = kSmall}, {.space = kSmall}, pair);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].gate.closed.fidelity, out[1].gate.closed.fidelity);
  EXPECT_FALSE(out[0].gate.open.has_value());
}

TEST(Sweep2d, GridShapeAndGateTimes) {
  const std::vector<double> alphas{mhz(300.0), mhz(900.0)};
  const std::vector<double> lambdas{mhz(30.0)};
  const SweepResult r = sweep_2d(DeviceParams{}, alphas, lambdas, mhz(6.0), {.budget = 50, .space = kSmall});
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_EQ(r.at(1, 0).alpha, alphas[1]);
  const double tpi = std::numbers::pi / mhz(6.0);
  for (const auto& c : r.cells) {
    EXPECT_GE(c.calibration.fidelity, 0.0);
    EXPECT_LE(c.calibration.fidelity, 1.0 + 1e-9);
    EXPECT_GE(c.calibration.gate_time, tpi - 2.0 * DeviceParams{}.ramp_time);
  }
  EXPECT_THROW(sweep_2d(DeviceParams{}, {}, lambdas), std::invalid_argument);
}

TEST(Robustness, ZeroOffsetIsTheBaselineAndOffsetsAreBounded) {
  const DeviceParams p = short_gate();
  const PulseSchedule s = make_schedule(p);
  const EvaluationOptions opt{.space = kSmall, .integrator = {.verify = false}};
  const auto pts = robustness_scan(p, s, {0.0, mhz(0.1)}, false, opt);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].excess, 0.0);
  EXPECT_EQ(pts[0].estimate, 0.0);
  EXPECT_NEAR(pts[0].infidelity, 1.0 - pts[0].fidelity, 0.0);
  const double x = std::numbers::pi * 0.01 / (8.0 * 36.0);
  EXPECT_NEAR(pts[1].estimate / (x * x), 1.0, 1e-12);
  EXPECT_THROW(robustness_scan(p, s, {mhz(7.0)}, false, opt), std::invalid_argument);
}

}  // namespace
}  // namespace holocnot
