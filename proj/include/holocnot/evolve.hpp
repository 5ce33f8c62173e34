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

// Time evolution: the three-level effective holonomy model, closed-system
// propagation and the Lindblad master equation for the full device.
//
// Full-device propagation runs in the interaction picture of the bare level
// energies (the frame_diagonal of model.hpp). That picture is also the frame
// of the qubits' own rotating references, so propagated states are directly
// comparable with the ideal gate. Each Hamiltonian entry then carries a single
// phase exp(-i w t) and the dissipator is unchanged by the transformation.

#pragma once

#include "hilbert.hpp"
#include "integrator.hpp"
#include "model.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace holocnot {

// ---------------------------------------------------------------------------
// Effective three-level model on span{|g2 0>, |f2 0>, |psi_1^->} (Q1 in |f>).

struct EffectiveCoupling {
  double omega = 0.0;  // sqrt(W_ge^2 + W_ef^2) / sqrt2
  double phi = 0.0;    // tan(phi/2) = W_ef / W_ge
};

inline EffectiveCoupling effective_coupling(double omega_ge, double omega_ef) {
  if (omega_ge == 0.0 && omega_ef == 0.0) {
    throw std::invalid_argument("effective_coupling: both Rabi frequencies are zero");
  }
  return {std::hypot(omega_ge, omega_ef) / std::sqrt(2.0), 2.0 * std::atan2(omega_ef, omega_ge)};
}

/// W [cos(phi/2)|g0> - sin(phi/2)|f0>] <psi_1^-| + h.c. The minus sign is the
/// pi phase of the e-f tone.
inline Operator effective_hamiltonian(double omega_ge, double omega_ef) {
  const EffectiveCoupling c = effective_coupling(omega_ge, omega_ef);
  Operator h = Operator::Zero(3, 3);
  h(0, 2) = c.omega * std::cos(c.phi / 2.0);
  h(1, 2) = -c.omega * std::sin(c.phi / 2.0);
  h(2, 0) = h(0, 2);
  h(2, 1) = h(1, 2);
  return h;
}

/// exp(-i H t) for Hermitian H.
inline Operator evolve_hermitian(const Operator& h, double t) {
  if (!is_hermitian(h, 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff()))) {
    throw std::invalid_argument("evolve_hermitian: operator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Operator evolve_effective(const Operator& h_eff, double duration) {
  if (!(duration > 0.0)) throw std::invalid_argument("evolve_effective: duration must be positive");
  return evolve_hermitian(h_eff, duration);
}

/// Ideal gate on {|gg>, |gf>, |fg>, |ff>}: identity when the control is in
/// |g>, [[-cos phi, sin phi], [sin phi, cos phi]] when it is in |f>.
inline Operator holonomy_unitary(double phi) {
  Operator u = Operator::Identity(4, 4);
  u(2, 2) = -std::cos(phi);
  u(2, 3) = std::sin(phi);
  u(3, 2) = std::sin(phi);
  u(3, 3) = std::cos(phi);
  return u;
}

/// Max over sample times of |<psi_i(t)| H(t) |psi_j(t)>| for the logical
/// states carried in the columns of `states`.
inline double parallel_transport_residual(const std::function<Operator(double)>& h_eff,
                                          const std::vector<double>& times,
                                          const std::vector<Matrix>& states) {
  if (times.size() != states.size()) {
    throw std::invalid_argument("parallel_transport_residual: times and states differ in length");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Matrix m = states[k].adjoint() * h_eff(times[k]) * states[k];
    worst = std::max(worst, m.cwiseAbs().maxCoeff());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Generic dense propagation, used for small test systems.

/// Schrodinger propagation of the columns of psi0 under a dense H(t).
inline Propagation<Matrix> propagate_schrodinger(const std::function<Operator(double)>& hamiltonian,
                                                 const Matrix& psi0, const std::vector<double>& times,
                                                 const IntegratorSettings& settings,
                                                 const std::vector<double>& breakpoints = {}) {
  auto rhs = [&](double t, const Matrix& y, Matrix& dy) { dy.noalias() = cplx(0.0, -1.0) * (hamiltonian(t) * y); };
  return integrate(rhs, psi0, times, breakpoints, settings);
}

struct Collapse {
  Operator op;
  double rate = 0.0;  // L = sqrt(rate) * op
  std::string label;
};

using CollapseSet = std::vector<Collapse>;

/// Lindblad propagation of rho0 under a dense H(t).
inline Propagation<Matrix> propagate_lindblad(const std::function<Operator(double)>& hamiltonian,
                                              const CollapseSet& collapse, const Matrix& rho0,
                                              const std::vector<double>& times,
                                              const IntegratorSettings& settings,
                                              const std::vector<double>& breakpoints = {}) {
  Operator g = Operator::Zero(rho0.rows(), rho0.cols());
  for (const auto& c : collapse) {
    if (c.rate < 0.0) throw std::invalid_argument("collapse rate must be non-negative");
    g += c.rate * c.op.adjoint() * c.op;
  }
  auto rhs = [&](double t, const Matrix& rho, Matrix& drho) {
    const Operator h = hamiltonian(t);
    const Operator heff = h - cplx(0.0, 0.5) * g;
    drho.noalias() = cplx(0.0, -1.0) * (heff * rho);
    drho.noalias() += cplx(0.0, 1.0) * (rho * heff.adjoint());
    for (const auto& c : collapse) drho.noalias() += c.rate * (c.op * rho * c.op.adjoint());
  };
  return integrate(rhs, rho0, times, breakpoints, settings);
}

// ---------------------------------------------------------------------------
// Full-device kernels.

/// Decoherence channels: cascade decay f -> e -> g at 1/T1_f and 1/T1_e and
/// pure dephasing through the level number n at 2/T_phi on each qutrit, so
/// the |j><k| coherence decays at (j - k)^2 / T_phi. Photon loss at kappa
/// when non-zero.
inline CollapseSet standard_collapse_set(const DeviceParams& p, const HilbertSpace& space) {
  CollapseSet set;
  for (int j = 0; j < 2; ++j) {
    const Subsystem s = j == 0 ? Subsystem::q1 : Subsystem::q2;
    const int levels = space.local_dim(s);
    const std::string q = "q" + std::to_string(j + 1);
    set.push_back({embed(qutrit_transition(levels, 1, 0), s, space), 1.0 / p.t1_e[j], q + " e->g"});
    set.push_back({embed(qutrit_transition(levels, 2, 1), s, space), 1.0 / p.t1_f[j], q + " f->e"});
    set.push_back({level_number(s, space), 2.0 / p.t_phi[j], q + " dephase"});
  }
  if (p.kappa > 0.0) {
    set.push_back({embed(annihilation(space.fock_dim), Subsystem::resonator, space), p.kappa, "photon loss"});
  }
  return set;
}

/// Pure-dephasing time giving a g-e Ramsey time T2* under the channels above:
/// 1/T2* = 1/(2 T1) + 1/T_phi.
inline double pure_dephasing_from_t2star(double t1, double t2_star) {
  if (!(t1 > 0.0) || !(t2_star > 0.0)) throw std::invalid_argument("T1 and T2* must be positive");
  const double rate = 1.0 / t2_star - 0.5 / t1;
  if (!(rate > 0.0)) throw std::invalid_argument("T2* exceeds the 2 T1 limit");
  return 1.0 / rate;
}

/// Sparse right-hand sides in the interaction picture of the frame diagonal.
class InteractionKernel {
 public:
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;
  using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  InteractionKernel(const SystemHamiltonian& h, const CollapseSet& collapse = {})
      : dim_(h.space.dim()), ramp_(h.ramp_time), plateau_(h.plateau_time) {
    Eigen::VectorXd damping = Eigen::VectorXd::Zero(dim_);
    for (const auto& c : collapse) {
      if (c.rate < 0.0) throw std::invalid_argument("collapse rate must be non-negative");
      if (c.rate == 0.0) continue;
      const Operator gl = c.op.adjoint() * c.op;
      const Operator off = gl - Operator(gl.diagonal().asDiagonal());
      if (off.cwiseAbs().maxCoeff() > 1e-14) {
        throw std::invalid_argument("collapse operator '" + c.label + "' has non-diagonal L^dag L");
      }
      damping += c.rate * gl.diagonal().real();
      Jump jump;
      for (int col = 0; col < dim_; ++col) {
        for (int row = 0; row < dim_; ++row) {
          if (c.op(row, col) != 0.0) {
            jump.out.push_back(row);
            jump.in.push_back(col);
            jump.amp.push_back(std::sqrt(c.rate) * c.op(row, col));
          }
        }
      }
      jumps_.push_back(std::move(jump));
    }

    std::map<std::pair<long long, bool>, std::size_t> index;
    std::vector<Eigen::Triplet<cplx>> pattern;
    for (const auto& term : h.terms) {
      for (const auto& e : term.entries) {
        const double w = term.frequency - (h.diagonal(e.row) - h.diagonal(e.col));
        const auto key = std::make_pair(std::llround(w), term.enveloped);
        auto it = index.find(key);
        if (it == index.end()) {
          it = index.emplace(key, groups_.size()).first;
          groups_.push_back({w, term.enveloped, {}, {}});
        }
        groups_[it->second].values.push_back(e.value);
        groups_[it->second].slots.push_back(static_cast<int>(pattern.size()));
        pattern.emplace_back(e.row, e.col, cplx(1.0));
      }
    }
    // The damping -i/2 sum L^dag L sits on the diagonal of the generator.
    std::vector<std::pair<int, cplx>> diagonal;
    for (int r = 0; r < dim_; ++r) {
      if (damping(r) == 0.0) continue;
      diagonal.emplace_back(static_cast<int>(pattern.size()), cplx(0.0, -0.5 * damping(r)));
      pattern.emplace_back(r, r, cplx(1.0));
    }
    // Fix the sparsity pattern once, then map every entry to its value slot.
    h_.resize(dim_, dim_);
    h_.setFromTriplets(pattern.begin(), pattern.end());
    h_.makeCompressed();
    std::vector<int> slot_of(pattern.size());
    for (std::size_t k = 0; k < pattern.size(); ++k) {
      slot_of[k] = static_cast<int>(&h_.coeffRef(pattern[k].row(), pattern[k].col()) - h_.valuePtr());
    }
    for (auto& g : groups_) {
      for (int& s : g.slots) s = slot_of[s];
    }
    for (auto& [slot, value] : diagonal) damping_slots_.emplace_back(slot_of[slot], value);
  }

  int dim() const { return dim_; }

  /// Fastest phase rotation among the couplings (rad/s).
  double max_frequency() const {
    double w = 0.0;
    for (const auto& g : groups_) w = std::max(w, std::abs(g.frequency));
    return w;
  }

  std::vector<double> breakpoints() const {
    return PulseSchedule{{}, ramp_, plateau_}.breakpoints();
  }

  /// H_I(t) - (i/2) sum_k L_k^dag L_k; Hermitian when there is no collapse.
  const Sparse& generator(double t) const {
    std::fill(h_.valuePtr(), h_.valuePtr() + h_.nonZeros(), cplx(0.0));
    const double env = flattop_envelope(t, ramp_, plateau_);
    cplx* v = h_.valuePtr();
    for (const auto& g : groups_) {
      if (g.enveloped && env == 0.0) continue;
      const cplx c = std::polar(g.enveloped ? env : 1.0, -g.frequency * t);
      for (std::size_t k = 0; k < g.slots.size(); ++k) v[g.slots[k]] += c * g.values[k];
    }
    for (const auto& [slot, value] : damping_slots_) v[slot] += value;
    return h_;
  }

  /// dY = -i H_I(t) Y for a column block of kets.
  void schrodinger(double t, const Matrix& y, Matrix& dy) const {
    const Sparse& h = generator(t);
    dy.setZero(y.rows(), y.cols());
    const Eigen::Index n = y.rows();
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      for (Eigen::Index c = 0; c < n; ++c) {
        const cplx yc = y(c, j);
        if (yc == 0.0) continue;
        for (Sparse::InnerIterator it(h, c); it; ++it) dy(it.row(), j) += it.value() * yc;
      }
    }
    dy *= cplx(0.0, -1.0);
  }

  /// Lindblad right-hand side for a horizontal stack of dim x dim operators,
  /// stored row-major so both sides of the commutator are row updates:
  /// -i G rho + i rho G^dag = -i G rho + (-i G rho^dag)^dag.
  void lindblad(double t, const RowMatrix& y, RowMatrix& dy) const {
    const Sparse& g = generator(t);
    const int blocks = static_cast<int>(y.cols() / dim_);
    adjoint_.resize(y.rows(), y.cols());
    for (int b = 0; b < blocks; ++b) {
      adjoint_.middleCols(b * dim_, dim_) = y.middleCols(b * dim_, dim_).adjoint();
    }
    dy.setZero(y.rows(), y.cols());
    right_.setZero(y.rows(), y.cols());
    for (int c = 0; c < dim_; ++c) {
      for (Sparse::InnerIterator it(g, c); it; ++it) {
        const cplx w = cplx(0.0, -1.0) * it.value();
        dy.row(it.row()) += w * y.row(c);
        right_.row(it.row()) += w * adjoint_.row(c);
      }
    }
    for (int b = 0; b < blocks; ++b) {
      const int off = b * dim_;
      dy.middleCols(off, dim_) += right_.middleCols(off, dim_).adjoint();
    }
    for (const auto& j : jumps_) {
      const std::size_t n = j.out.size();
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
          const cplx w = j.amp[p] * std::conj(j.amp[q]);
          const cplx* src = &y(j.in[p], j.in[q]);
          cplx* dst = &dy(j.out[p], j.out[q]);
          for (int b = 0; b < blocks; ++b) dst[b * dim_] += w * src[b * dim_];
        }
      }
    }
  }

 private:
  struct Group {
    double frequency;
    bool enveloped;
    std::vector<cplx> values;
    std::vector<int> slots;
  };
  struct Jump {
    std::vector<int> out;
    std::vector<int> in;
    std::vector<cplx> amp;
  };

  int dim_;
  double ramp_;
  double plateau_;
  std::vector<Group> groups_;
  std::vector<std::pair<int, cplx>> damping_slots_;
  std::vector<Jump> jumps_;
  mutable Sparse h_;
  mutable RowMatrix adjoint_;
  mutable RowMatrix right_;
};

/// Macro step matched to the fastest coupling phase of the kernel.
inline IntegratorSettings tuned_settings(const InteractionKernel& kernel, IntegratorSettings s) {
  const double w = kernel.max_frequency();
  if (w > 0.0) s.max_step = std::min(s.max_step, 2.0 / w);
  return s;
}

/// Closed-system propagation of the kets in the columns of psi0; states are
/// returned in the interaction picture.
inline Propagation<Matrix> propagate_schrodinger(const SystemHamiltonian& h, const Matrix& psi0,
                                                 const std::vector<double>& times,
                                                 const IntegratorSettings& settings) {
  if (psi0.rows() != h.space.dim()) throw DimensionError("initial state does not live on the full space");
  const InteractionKernel kernel(h);
  auto rhs = [&](double t, const Matrix& y, Matrix& dy) { kernel.schrodinger(t, y, dy); };
  return integrate(rhs, psi0, times, kernel.breakpoints(), tuned_settings(kernel, settings));
}

/// Lindblad propagation of a horizontal stack of operators (each dim x dim);
/// states are returned in the interaction picture.
inline Propagation<Matrix> propagate_lindblad(const SystemHamiltonian& h, const CollapseSet& collapse,
                                              const Matrix& rho_stack, const std::vector<double>& times,
                                              const IntegratorSettings& settings) {
  const int dim = h.space.dim();
  if (rho_stack.rows() != dim || rho_stack.cols() % dim != 0) {
    throw DimensionError("operator stack does not live on the full space");
  }
  const InteractionKernel kernel(h, collapse);
  using RowMatrix = InteractionKernel::RowMatrix;
  auto rhs = [&](double t, const RowMatrix& y, RowMatrix& dy) { kernel.lindblad(t, y, dy); };
  auto rows = integrate(rhs, RowMatrix(rho_stack), times, kernel.breakpoints(), tuned_settings(kernel, settings));
  Propagation<Matrix> out;
  out.times = std::move(rows.times);
  for (auto& st : rows.states) out.states.emplace_back(st);
  out.macro_steps = rows.macro_steps;
  out.rhs_evaluations = rows.rhs_evaluations;
  out.halving_change = rows.halving_change;
  return out;
}

// ---------------------------------------------------------------------------
// The gate as a channel on the logical space.

/// Logical basis {|gg>, |gf>, |fg>, |ff>} with the resonator in vacuum.
inline std::array<int, 4> logical_indices(const HilbertSpace& space) {
  return {space.index(Level::g, Level::g, 0), space.index(Level::g, Level::f, 0),
          space.index(Level::f, Level::g, 0), space.index(Level::f, Level::f, 0)};
}

/// Images E(|a><b|) of the 16 logical matrix units on the full space.
struct GateChannel {
  HilbertSpace space;
  std::array<Matrix, 16> images;
  double halving_change = 0.0;
  int rhs_evaluations = 0;

  const Matrix& image(int a, int b) const { return images[a * 4 + b]; }

  /// Full-space output for a logical input density matrix (4x4).
  Matrix apply(const Matrix& rho_logical) const {
    if (rho_logical.rows() != 4 || rho_logical.cols() != 4) throw DimensionError("logical input must be 4x4");
    Matrix out = Matrix::Zero(space.dim(), space.dim());
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        if (rho_logical(a, b) != 0.0) out += rho_logical(a, b) * image(a, b);
      }
    }
    return out;
  }

  Matrix apply_ket(const Vector& psi_logical) const { return apply(psi_logical * psi_logical.adjoint()); }
};

/// Channel of a closed evolution whose columns are the images of the four
/// logical kets.
inline GateChannel channel_from_kets(const HilbertSpace& space, const Matrix& kets) {
  GateChannel ch;
  ch.space = space;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) ch.images[a * 4 + b] = kets.col(a) * kets.col(b).adjoint();
  }
  return ch;
}

inline Matrix logical_kets(const HilbertSpace& space) {
  Matrix psi = Matrix::Zero(space.dim(), 4);
  const auto idx = logical_indices(space);
  for (int a = 0; a < 4; ++a) psi(idx[a], a) = 1.0;
  return psi;
}

struct GateRun {
  Matrix final_kets;  // closed system only: dim x 4
  GateChannel channel;
  double max_norm_defect = 0.0;   // closed: max | ||psi|| - 1 |
  double max_trace_defect = 0.0;  // open: max | tr E(|a><a|) - 1 |
};

/// Runs the full pulse on the four logical kets (closed) or the ten matrix
/// units |a><b|, a <= b (open).
inline GateRun run_gate(const SystemHamiltonian& h, const CollapseSet& collapse,
                        const IntegratorSettings& settings) {
  const HilbertSpace& space = h.space;
  const std::vector<double> times{0.0, h.duration()};
  GateRun run;
  if (collapse.empty()) {
    auto prop = propagate_schrodinger(h, logical_kets(space), times, settings);
    run.final_kets = prop.states.back();
    run.channel = channel_from_kets(space, run.final_kets);
    run.channel.halving_change = prop.halving_change;
    run.channel.rhs_evaluations = prop.rhs_evaluations;
    for (int a = 0; a < 4; ++a) {
      run.max_norm_defect = std::max(run.max_norm_defect, std::abs(run.final_kets.col(a).norm() - 1.0));
    }
    return run;
  }
  const int dim = space.dim();
  const auto idx = logical_indices(space);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) pairs.emplace_back(a, b);
  }
  Matrix stack = Matrix::Zero(dim, dim * static_cast<int>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) stack(idx[pairs[k].first], k * dim + idx[pairs[k].second]) = 1.0;
  auto prop = propagate_lindblad(h, collapse, stack, times, settings);
  const Matrix& out = prop.states.back();
  run.channel.space = space;
  run.channel.halving_change = prop.halving_change;
  run.channel.rhs_evaluations = prop.rhs_evaluations;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [a, b] = pairs[k];
    Matrix img = out.middleCols(k * dim, dim);
    if (a == b) {
      img = 0.5 * (img + img.adjoint()).eval();
      run.max_trace_defect = std::max(run.max_trace_defect, std::abs(img.trace().real() - 1.0));
    }
    run.channel.images[b * 4 + a] = img.adjoint();
    run.channel.images[a * 4 + b] = std::move(img);
  }
  return run;
}

struct GateExtraction {
  Matrix gate;                     // 4x4 overlaps <logical a, 0| U |logical b, 0>
  std::array<double, 4> leakage{}; // 1 - ||projection||^2 per input
};

/// Closed-system gate matrix on the logical space and per-input leakage.
inline GateExtraction extract_gate(const DeviceParams& p, const HilbertSpace& space,
                                   const IntegratorSettings& settings = {}, double detuning = 0.0) {
  const SystemHamiltonian h = build_hamiltonian(p, make_schedule(p, detuning), space);
  const GateRun run = run_gate(h, {}, settings);
  const auto idx = logical_indices(space);
  GateExtraction g;
  g.gate = Matrix::Zero(4, 4);
  for (int b = 0; b < 4; ++b) {
    double kept = 0.0;
    for (int a = 0; a < 4; ++a) {
      g.gate(a, b) = run.final_kets(idx[a], b);
      kept += std::norm(g.gate(a, b));
    }
    g.leakage[b] = 1.0 - kept;
  }
  return g;
}

}  // namespace holocnot
