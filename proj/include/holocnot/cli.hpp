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

// Command-line front end. Every subcommand writes its files into --out and a
// <subcommand>.manifest.json next to them.
//
// Exit codes: 0 success, 1 usage error, 2 configuration or parameter error,
// 3 numerical failure.

#pragma once

#include "config.hpp"
#include "dressed.hpp"
#include "evolve.hpp"
#include "optimize.hpp"
#include "tomography.hpp"
#include "version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace holocnot::cli {

using nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3 };

struct RunManifest {
  std::string config_source;
  std::string config_digest;
  std::string subcommand;
  std::vector<std::string> arguments;
  IntegratorSettings integrator;
  std::string version = kVersion;
  std::string timestamp;
  std::vector<std::string> outputs;

  json to_json() const {
    return {{"config_source", config_source},
            {"config_digest", config_digest},
            {"subcommand", subcommand},
            {"arguments", arguments},
            {"integrator",
             {{"max_step_ns", to_ns(integrator.max_step)},
              {"columns", integrator.columns},
              {"tolerance", integrator.tolerance},
              {"max_refinements", integrator.max_refinements},
              {"verify", integrator.verify}}},
            {"version", version},
            {"timestamp", timestamp},
            {"outputs", outputs}};
  }
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

/// Output sink for one run: files land in `dir` and are recorded in the
/// manifest.
class Run {
 public:
  Run(std::string subcommand, std::vector<std::string> arguments, const Config& cfg, fs::path dir)
      : cfg_(cfg), dir_(std::move(dir)) {
    manifest_.config_source = cfg.source;
    manifest_.config_digest = cfg.digest;
    manifest_.subcommand = std::move(subcommand);
    manifest_.arguments = std::move(arguments);
    manifest_.integrator = cfg.integrator;
    manifest_.timestamp = utc_timestamp();
    fs::create_directories(dir_);
  }

  /// CSV with `#` metadata lines, then the header row.
  std::ofstream csv(const std::string& name, const std::string& header) {
    std::ofstream f = open(name);
    f << "# config_digest=" << cfg_.digest << "\n";
    f << "# integrator max_step_ns=" << to_ns(cfg_.integrator.max_step) << " columns=" << cfg_.integrator.columns
      << " tolerance=" << cfg_.integrator.tolerance << "\n";
    f << header << "\n";
    f << std::setprecision(10);
    return f;
  }

  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << "\n"; }

  void finish() { write_json(manifest_.subcommand + ".manifest.json", manifest_.to_json()); }

 private:
  std::ofstream open(const std::string& name) {
    const fs::path path = dir_ / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    manifest_.outputs.push_back(name);
    return f;
  }

  const Config& cfg_;
  fs::path dir_;
  RunManifest manifest_;
};

/// "fg0" -> |f1 g2 0>.
inline QuantumState parse_basis_label(const std::string& label, const HilbertSpace& space) {
  auto level = [&](char c) {
    switch (c) {
      case 'g': return 0;
      case 'e': return 1;
      case 'f': return 2;
      case 'h': return 3;
      default: throw std::invalid_argument("initial state '" + label + "': unknown level '" + c + "'");
    }
  };
  if (label.size() < 3) throw std::invalid_argument("initial state must look like fg0 (Q1 level, Q2 level, photons)");
  int n = 0;
  try {
    n = std::stoi(label.substr(2));
  } catch (const std::exception&) {
    throw std::invalid_argument("initial state '" + label + "': bad photon number");
  }
  const int k1 = level(label[0]);
  const int k2 = level(label[1]);
  if (k1 >= space.levels_q1 || k2 >= space.levels_q2 || n < 0 || n >= space.fock_dim) {
    throw std::invalid_argument("initial state '" + label + "' is outside the Hilbert space");
  }
  return space.basis(k1, k2, n);
}

inline std::string basis_label(const HilbertSpace& space, int i) {
  static const char names[] = {'g', 'e', 'f', 'h'};
  const auto l = space.labels(i);
  return std::string{names[l[0]], names[l[1]]} + std::to_string(l[2]);
}

inline json matrix_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"real", re}, {"imag", im}};
}

struct CommonOptions {
  std::string config = "default";
  std::string out = ".";
  std::optional<int> shots;
  std::uint64_t seed = 20260101;
  bool calibrate = false;
  bool closed_only = false;
  int budget = CalibrationOptions{}.budget;
};

inline EvaluationOptions evaluation_options(const Config& cfg, const CommonOptions& o) {
  EvaluationOptions e;
  e.space = cfg.space;
  e.integrator = cfg.integrator;
  e.shots = o.shots;
  e.seed = o.seed;
  return e;
}

inline CalibrationOptions calibration_options(const Config& cfg, const CommonOptions& o) {
  CalibrationOptions c;
  c.space = cfg.space;
  c.integrator = cfg.integrator;
  c.integrator.verify = false;
  c.budget = o.budget;
  return c;
}

/// The gate to run: configured as is, or calibrated first.
struct GateChoice {
  DeviceParams device;
  PulseSchedule schedule;
  std::optional<OptimizationResult> calibration;
};

inline GateChoice choose_gate(const Config& cfg, const CommonOptions& o) {
  if (!o.calibrate) return {cfg.device, cfg.schedule(), std::nullopt};
  const OptimizationResult r = calibrate(cfg.device, CalibrationBounds::around(cfg.device), calibration_options(cfg, o));
  std::cout << "calibrated: gate_time " << to_ns(r.gate_time) << " ns, omega_1 " << to_mhz(r.omega1) << " MHz, omega_2 "
            << to_mhz(r.omega2) << " MHz (" << r.evaluations << " evaluations)\n";
  return {apply_calibration(cfg.device, r), calibrated_schedule(cfg.device, r), r};
}

inline json calibration_json(const std::optional<OptimizationResult>& r) {
  if (!r) return nullptr;
  return {{"gate_time_ns", to_ns(r->gate_time)},
          {"omega_1_mhz", to_mhz(r->omega1)},
          {"omega_2_mhz", to_mhz(r->omega2)},
          {"closed_fidelity", r->fidelity},
          {"evaluations", r->evaluations},
          {"converged", r->converged}};
}

// ---------------------------------------------------------------------------
// Subcommands.

inline void run_shifts(Run& run, const Config& cfg) {
  const DeviceParams& p = cfg.device;
  const StarkShiftReport r = stark_delta2(p.lambda[0], p.alpha[0], p.lambda[1], DressedBranch::minus);
  const double d1 = psi1_drive_shift(p.omega_ge_drive, p.lambda[1], p.delta1_convention);
  json j{{"delta1_convention", to_string(p.delta1_convention)},
         {"delta1_mhz", to_mhz(d1)},
         {"delta2_h_mhz", to_mhz(r.delta2_h)},
         {"delta2_e_plus_mhz", to_mhz(r.delta2_e_plus)},
         {"delta2_e_minus_mhz", to_mhz(r.delta2_e_minus)},
         {"delta2_total_mhz", to_mhz(r.delta2_total)},
         {"delta2_approx_mhz", to_mhz(r.delta2_approx)},
         {"numeric", nullptr}};
  if (cfg.space.levels_q1 >= 4 && cfg.space.levels_q2 >= 4) {
    const ShiftComparison c = verify_shifts_numerically(p, cfg.space);
    j["numeric"] = {{"drive_mhz", to_mhz(c.numeric_drive)},         {"photon_mhz", to_mhz(c.numeric_photon)},
                    {"total_mhz", to_mhz(c.numeric_total)},         {"reference_mhz", to_mhz(c.numeric_reference)},
                    {"analytic_total_mhz", to_mhz(c.analytic_total)}, {"relative_error", c.relative_error},
                    {"drive_ratio", c.drive_ratio}};
  }
  run.write_json("shifts.json", j);
  std::cout << std::fixed << std::setprecision(4);
  std::cout << std::left << std::setw(22) << "delta1 (MHz)" << to_mhz(d1) << "\n";
  std::cout << std::setw(22) << "delta2_h (MHz)" << to_mhz(r.delta2_h) << "\n";
  std::cout << std::setw(22) << "delta2_e+ (MHz)" << to_mhz(r.delta2_e_plus) << "\n";
  std::cout << std::setw(22) << "delta2_e- (MHz)" << to_mhz(r.delta2_e_minus) << "\n";
  std::cout << std::setw(22) << "delta2 total (MHz)" << to_mhz(r.delta2_total) << "\n";
  std::cout << std::setw(22) << "delta2 approx (MHz)" << to_mhz(r.delta2_approx) << "\n";
  if (!j["numeric"].is_null()) {
    std::cout << std::setw(22) << "numeric total (MHz)" << j["numeric"]["total_mhz"].get<double>() << "\n";
    std::cout << std::setw(22) << "relative error" << j["numeric"]["relative_error"].get<double>() << "\n";
  }
}

inline void run_dressed(Run& run, const Config& cfg, int max_manifold) {
  const DeviceParams& p = cfg.device;
  auto f = run.csv("dressed.csv", "set,label,energy_mhz,residual_mhz,orthonormality_defect");
  const HilbertSpace& space = cfg.space;
  // Q2-resonator Jaynes-Cummings ladder with Q1 decoupled, both on resonance.
  DeviceParams jc = p;
  jc.omega = {p.omega_r, p.omega_r};
  jc.lambda[0] = 0.0;
  const Operator h = static_hamiltonian(jc, space);
  for (int n = 0; n <= std::min(max_manifold, space.fock_dim - 1); ++n) {
    const DressedSpectrum s = jc_dressed_states(n, p.lambda[1], space);
    for (const auto& e : s.pairs) {
      f << "jc," << e.label << "," << to_mhz(e.energy) << "," << to_mhz((h * e.state - e.energy * e.state).norm())
        << "," << s.orthonormality_defect() << "\n";
    }
  }
  DeviceParams both = p;
  both.omega = {p.omega_r, p.omega_r};
  const Operator h2 = static_hamiltonian(both, space);
  const DressedSpectrum t = single_excitation_triplet(p.lambda[0], p.lambda[1], space);
  for (const auto& e : t.pairs) {
    f << "triplet," << e.label << "," << to_mhz(e.energy) << "," << to_mhz((h2 * e.state - e.energy * e.state).norm())
      << "," << t.orthonormality_defect() << "\n";
  }
  const DriveDetunings d = drive_detunings(p);
  auto g = run.csv("detunings.csv", "name,detuning_mhz");
  g << "minus_d1_plus," << to_mhz(d.minus_d1_plus) << "\nminus_d1_minus," << to_mhz(d.minus_d1_minus)
    << "\nminus_d2_plus," << to_mhz(d.minus_d2_plus) << "\nminus_d2_minus," << to_mhz(d.minus_d2_minus)
    << "\nplus_d1_plus," << to_mhz(d.plus_d1_plus) << "\nplus_d1_minus," << to_mhz(d.plus_d1_minus)
    << "\nplus_d2_plus," << to_mhz(d.plus_d2_plus) << "\nplus_d2_minus," << to_mhz(d.plus_d2_minus) << "\n";
  std::cout << "dressed spectra written (" << space.dim() << "-dimensional space)\n";
}

inline void run_evolve(Run& run, const Config& cfg, const std::string& initial, int points, bool decoherence) {
  if (points < 2) throw std::invalid_argument("--points must be at least 2");
  const HilbertSpace& space = cfg.space;
  const QuantumState psi0 = parse_basis_label(initial, space);
  const PulseSchedule schedule = cfg.schedule();
  const SystemHamiltonian h = build_hamiltonian(cfg.device, schedule, space);
  std::vector<double> times(points);
  for (int k = 0; k < points; ++k) times[k] = schedule.duration() * k / (points - 1);

  std::vector<Eigen::VectorXd> pops;
  std::vector<double> norms;
  if (decoherence) {
    const auto prop = propagate_lindblad(h, standard_collapse_set(cfg.device, space), psi0 * psi0.adjoint(), times,
                                         cfg.integrator);
    for (const auto& rho : prop.states) {
      pops.push_back(rho.diagonal().real());
      norms.push_back(rho.trace().real());
    }
  } else {
    const auto prop = propagate_schrodinger(h, psi0, times, cfg.integrator);
    for (const auto& psi : prop.states) {
      pops.push_back(psi.col(0).cwiseAbs2());
      norms.push_back(psi.col(0).squaredNorm());
    }
  }
  // Columns: every basis state that ever holds more than 1e-6.
  std::vector<int> shown;
  for (int i = 0; i < space.dim(); ++i) {
    double peak = 0.0;
    for (const auto& p : pops) peak = std::max(peak, p(i));
    if (peak > 1e-6) shown.push_back(i);
  }
  std::string header = "time_ns";
  for (int i : shown) header += ",p_" + basis_label(space, i);
  header += decoherence ? ",trace" : ",norm";
  auto f = run.csv("evolve.csv", header);
  for (int k = 0; k < points; ++k) {
    f << to_ns(times[k]);
    for (int i : shown) f << "," << pops[k](i);
    f << "," << norms[k] << "\n";
  }
  std::cout << "evolved " << initial << " over " << to_ns(schedule.duration()) << " ns; final norm/trace "
            << std::setprecision(12) << norms.back() << "\n";
}

inline void run_gate_cmd(Run& run, const Config& cfg, const CommonOptions& o) {
  const GateChoice g = choose_gate(cfg, o);
  const GateEvaluation ev = evaluate_gate(g.device, g.schedule, false, evaluation_options(cfg, o));
  const HilbertSpace& space = cfg.space;
  const auto run_kets = run_gate(build_hamiltonian(g.device, g.schedule, space), {}, cfg.integrator);
  const auto idx = logical_indices(space);
  Matrix gate(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) gate(a, b) = run_kets.final_kets(idx[a], b);
  }
  const Matrix corrected = ev.phases.matrix() * gate;
  run.write_json("gate.json", {{"gate", matrix_json(gate)},
                               {"corrected_gate", matrix_json(corrected)},
                               {"virtual_z", {ev.phases.q1, ev.phases.q2}},
                               {"fidelity", ev.fidelity},
                               {"raw_fidelity", ev.raw_fidelity},
                               {"leakage_e", {ev.leakage.average[0], ev.leakage.average[1]}},
                               {"calibration", calibration_json(g.calibration)}});
  std::cout << std::fixed << std::setprecision(4) << "gate on {gg, gf, fg, ff} after virtual Z (|entry|, arg/pi):\n";
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      std::cout << "  " << std::abs(corrected(a, b)) << " " << std::setw(7) << std::showpos
                << std::arg(corrected(a, b)) / std::numbers::pi << std::noshowpos;
    }
    std::cout << "\n";
  }
  std::cout << "process fidelity vs CNOT: " << ev.fidelity << " (without phase correction " << ev.raw_fidelity << ")\n";
  std::cout << "average |e> population: Q1 " << ev.leakage.average[0] << ", Q2 " << ev.leakage.average[1] << "\n";
}

inline void run_bell(Run& run, const Config& cfg, const CommonOptions& o) {
  const GateChoice g = choose_gate(cfg, o);
  EvaluationOptions eo = evaluation_options(cfg, o);
  const GateEvaluation closed = evaluate_gate(g.device, g.schedule, false, eo);
  eo.fixed_phases = closed.phases;
  const GateEvaluation ev = o.closed_only ? closed : evaluate_gate(g.device, g.schedule, true, eo);
  const BellResult b = bell_state(ev.channel, ev.phases, o.shots, o.seed);
  run.write_json("bell.json", {{"density_matrix", matrix_json(b.rho)},
                               {"fidelity", b.fidelity},
                               {"concurrence", b.concurrence},
                               {"decoherence", !o.closed_only},
                               {"calibration", calibration_json(g.calibration)}});
  std::cout << std::fixed << std::setprecision(4) << "Bell state fidelity " << b.fidelity << ", concurrence " << b.concurrence << "\n";
}

inline void run_qpt(Run& run, const Config& cfg, const CommonOptions& o) {
  const GateChoice g = choose_gate(cfg, o);
  EvaluationOptions eo = evaluation_options(cfg, o);
  const GateEvaluation closed = evaluate_gate(g.device, g.schedule, false, eo);
  eo.fixed_phases = closed.phases;
  const GateEvaluation ev = o.closed_only ? closed : evaluate_gate(g.device, g.schedule, true, eo);
  const auto inputs = input_states();
  const Matrix target = ev.phases.target();
  {
    auto f = run.csv("qpt_states.csv", "input,state_fidelity,retained_trace");
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const Vector ideal = target * inputs[k];
      const Matrix& rho = ev.reconstructed[k];
      f << input_label(static_cast<int>(k)) << ","
        << (ideal.adjoint() * rho * ideal)(0, 0).real() / std::max(1e-300, rho.trace().real()) << ","
        << rho.trace().real() << "\n";
    }
  }
  {
    auto f = run.csv("qpt_leakage.csv", "input,e_population_q1,e_population_q2");
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      f << input_label(static_cast<int>(k)) << "," << ev.leakage.per_input[k][0] << "," << ev.leakage.per_input[k][1]
        << "\n";
    }
  }
  json labels = json::array();
  for (int m = 0; m < 16; ++m) labels.push_back(pauli_label(m));
  run.write_json("chi.json", {{"basis", labels},
                              {"chi", matrix_json(ev.chi.chi)},
                              {"process_fidelity", ev.fidelity},
                              {"raw_process_fidelity", ev.raw_fidelity},
                              {"virtual_z", {ev.phases.q1, ev.phases.q2}},
                              {"decoherence", !o.closed_only},
                              {"calibration", calibration_json(g.calibration)}});
  std::cout << std::fixed << std::setprecision(4) << "process fidelity " << ev.fidelity << "; average |e> population Q1 "
            << ev.leakage.average[0] << ", Q2 " << ev.leakage.average[1] << "\n";
}

inline void run_table2(Run& run, const Config& cfg, const CommonOptions& o) {
  const auto entries = fidelity_sweep(cfg.device, !o.closed_only, calibration_options(cfg, o), evaluation_options(cfg, o));
  auto f = run.csv("table2.csv",
                   "column,alpha_ghz,omega_mhz,gate_time_ns,fidelity_with_decoherence,fidelity_without_decoherence,"
                   "omega_1_mhz,omega_2_mhz,evaluations");
  int col = 1;
  for (const auto& e : entries) {
    const auto& c = e.gate.calibration;
    f << col++ << "," << to_mhz(e.row.alpha) / 1000.0 << "," << to_mhz(e.row.drive) << "," << to_ns(c.gate_time) << ",";
    if (e.gate.open) f << e.gate.open->fidelity;
    f << "," << e.gate.closed.fidelity << "," << to_mhz(c.omega1) << "," << to_mhz(c.omega2) << "," << c.evaluations
      << "\n";
    std::cout << "column " << col - 1 << ": T = " << std::fixed << std::setprecision(1) << to_ns(c.gate_time)
              << " ns, F = " << std::setprecision(3) << (e.gate.open ? e.gate.open->fidelity : NAN) << " / "
              << e.gate.closed.fidelity << "\n";
  }
}

inline std::vector<double> linear_grid(double lo, double hi, int steps) {
  if (steps < 1) throw std::invalid_argument("--steps must be at least 1");
  if (hi < lo) throw std::invalid_argument("grid upper bound below lower bound");
  std::vector<double> g(steps);
  for (int k = 0; k < steps; ++k) g[k] = steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1);
  return g;
}

inline void run_sweep2d(Run& run, const Config& cfg, const CommonOptions& o, double alpha_min, double alpha_max,
                        double lambda_min, double lambda_max, int steps) {
  std::vector<double> alphas;
  std::vector<double> lambdas;
  for (double a : linear_grid(alpha_min, alpha_max, steps)) alphas.push_back(mhz(a * 1000.0));
  for (double l : linear_grid(lambda_min, lambda_max, steps)) lambdas.push_back(mhz(l));
  const SweepResult r = sweep_2d(cfg.device, alphas, lambdas, mhz(2.0), calibration_options(cfg, o));
  auto f = run.csv("sweep2d.csv", "alpha_ghz,lambda_mhz,gate_time_ns,fidelity,meets_threshold,omega_1_mhz,omega_2_mhz");
  int above = 0;
  for (const auto& c : r.cells) {
    const bool ok = c.calibration.fidelity >= 0.99;
    above += ok;
    f << to_mhz(c.alpha) / 1000.0 << "," << to_mhz(c.lambda) << "," << to_ns(c.calibration.gate_time) << ","
      << c.calibration.fidelity << "," << (ok ? 1 : 0) << "," << to_mhz(c.calibration.omega1) << ","
      << to_mhz(c.calibration.omega2) << "\n";
  }
  run.write_json("sweep2d.json", {{"alpha_ghz", {alpha_min, alpha_max}},
                                  {"lambda_mhz", {lambda_min, lambda_max}},
                                  {"steps", steps},
                                  {"drive_mhz", 2.0},
                                  {"threshold", 0.99},
                                  {"cells", r.cells.size()},
                                  {"cells_above_threshold", above},
                                  {"budget_per_cell", o.budget}});
  std::cout << above << " of " << r.cells.size() << " cells reach 0.99\n";
}

inline void run_robustness(Run& run, const Config& cfg, const CommonOptions& o, double max_offset_khz, int points) {
  if (points < 1) throw std::invalid_argument("--points must be at least 1");
  const GateChoice g = choose_gate(cfg, o);
  std::vector<double> offsets;
  for (double k : linear_grid(-max_offset_khz, max_offset_khz, 2 * points + 1)) offsets.push_back(mhz(k / 1000.0));
  const auto scan = robustness_scan(g.device, g.schedule, offsets, !o.closed_only, evaluation_options(cfg, o));
  auto f = run.csv("robustness.csv", "offset_khz,fidelity,infidelity,excess_infidelity,estimate");
  for (const auto& p : scan) {
    f << to_mhz(p.offset) * 1000.0 << "," << p.fidelity << "," << p.infidelity << "," << p.excess << "," << p.estimate
      << "\n";
  }
  std::cout << std::scientific << std::setprecision(3) << "largest excess infidelity "
            << std::max_element(scan.begin(), scan.end(), [](auto& a, auto& b) { return a.excess < b.excess; })->excess
            << "\n";
}

// ---------------------------------------------------------------------------

/// Parses argv, runs one subcommand and returns the exit code.
inline int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Holonomic CNOT simulator for two qutrits on a bus resonator", "holocnot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CommonOptions o;
  std::string initial = "fg0";
  int points = 201;
  int max_manifold = 2;
  bool decoherence = false;
  double alpha_min = 0.2, alpha_max = 4.0, lambda_min = 10.0, lambda_max = 120.0;
  int steps = 5;
  double max_offset_khz = 200.0;
  int offset_points = 4;
  int shots = 0;

  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "configuration file, or 'default'");
    s->add_option("--out", o.out, "output directory");
  };
  auto gate_flags = [&](CLI::App* s) {
    s->add_flag("--calibrate", o.calibrate, "calibrate gate time and qubit frequencies first");
    s->add_option("--shots", shots, "sampled tomography with this many shots per setting")->check(CLI::NonNegativeNumber);
    s->add_option("--seed", o.seed, "seed for sampled tomography");
  };
  auto budget_flag = [&](CLI::App* s) {
    s->add_option("--budget", o.budget, "objective evaluations per calibration")->check(CLI::Range(50, 100000));
  };

  auto* shifts = app.add_subcommand("shifts", "Stark shift formulas and their numerical check");
  auto* dressed = app.add_subcommand("dressed", "dressed-state spectra and drive detunings");
  auto* evolve = app.add_subcommand("evolve", "trajectory of one basis state under the configured pulse");
  auto* gate = app.add_subcommand("gate", "gate matrix, fidelity and leakage");
  auto* bell = app.add_subcommand("bell", "Bell-state generation");
  auto* qpt = app.add_subcommand("qpt", "quantum process tomography");
  auto* table2 = app.add_subcommand("table2", "fidelity table over anharmonicity and drive amplitude");
  auto* sweep2d = app.add_subcommand("sweep2d", "calibrated fidelity over an (alpha, lambda) grid");
  auto* robustness = app.add_subcommand("robustness", "fidelity against drive frequency offsets");
  for (auto* s : {shifts, dressed, evolve, gate, bell, qpt, table2, sweep2d, robustness}) common(s);
  dressed->add_option("--max-manifold", max_manifold, "highest Jaynes-Cummings manifold");
  evolve->add_option("--initial", initial, "basis label: Q1 level, Q2 level, photons (e.g. fg0)");
  evolve->add_option("--points", points, "output samples");
  evolve->add_flag("--decoherence", decoherence, "Lindblad evolution");
  for (auto* s : {gate, bell, qpt, robustness}) gate_flags(s);
  for (auto* s : {gate, bell, qpt, robustness, table2, sweep2d}) budget_flag(s);
  for (auto* s : {bell, qpt, table2}) s->add_flag("--no-decoherence", o.closed_only, "closed system only");
  table2->add_option("--shots", shots, "sampled tomography")->check(CLI::NonNegativeNumber);
  table2->add_option("--seed", o.seed, "seed for sampled tomography");
  sweep2d->add_option("--alpha-min", alpha_min, "GHz");
  sweep2d->add_option("--alpha-max", alpha_max, "GHz");
  sweep2d->add_option("--lambda-min", lambda_min, "MHz");
  sweep2d->add_option("--lambda-max", lambda_max, "MHz");
  sweep2d->add_option("--steps", steps, "grid points per axis");
  robustness->add_option("--max-offset-khz", max_offset_khz, "largest tone offset");
  robustness->add_option("--points", offset_points, "offsets on each side of zero");
  bool with_decoherence = false;
  robustness->add_flag("--decoherence", with_decoherence, "include decoherence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }
  if (shots > 0) o.shots = shots;
  o.closed_only = o.closed_only || (robustness->parsed() && !with_decoherence);

  CLI::App* sub = app.get_subcommands().front();
  std::vector<std::string> arguments(argv + 1, argv + argc);
  try {
    const Config cfg = load_config(o.config);
    for (const auto& w : cfg.device.warnings()) std::cerr << "warning: " << w << "\n";
    Run run(sub->get_name(), arguments, cfg, o.out);
    const std::string name = sub->get_name();
    if (name == "shifts") run_shifts(run, cfg);
    else if (name == "dressed") run_dressed(run, cfg, max_manifold);
    else if (name == "evolve") run_evolve(run, cfg, initial, points, decoherence);
    else if (name == "gate") run_gate_cmd(run, cfg, o);
    else if (name == "bell") run_bell(run, cfg, o);
    else if (name == "qpt") run_qpt(run, cfg, o);
    else if (name == "table2") run_table2(run, cfg, o);
    else if (name == "sweep2d") run_sweep2d(run, cfg, o, alpha_min, alpha_max, lambda_min, lambda_max, steps);
    else if (name == "robustness") run_robustness(run, cfg, o, max_offset_khz, offset_points);
    run.finish();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}

}  // namespace holocnot::cli
