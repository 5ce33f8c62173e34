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

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace holocnot {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense square matrix on a (sub)space. Kept as an alias so Eigen expressions
/// compose without conversions.
using Operator = Matrix;
using QuantumState = Vector;

inline constexpr cplx I{0.0, 1.0};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Qutrit level labels. `h` is the fourth level and only enters through
/// off-resonant couplings.
enum class Level : int { g = 0, e = 1, f = 2, h = 3 };

inline constexpr int idx(Level l) { return static_cast<int>(l); }

/// Subsystems in the fixed tensor ordering Q1 (x) Q2 (x) resonator.
enum class Subsystem : int { q1 = 0, q2 = 1, resonator = 2 };

/// Truncated space of two multilevel qutrits and one resonator mode.
/// Basis index of |k1, k2, n> is (k1 * levels_q2 + k2) * fock_dim + n.
struct HilbertSpace {
  int levels_q1 = 4;
  int levels_q2 = 4;
  int fock_dim = 5;

  void validate() const {
    if (levels_q1 < 3 || levels_q2 < 3) {
      throw DimensionError("qutrits need at least 3 levels (g, e, f), got " +
                           std::to_string(levels_q1) + " and " + std::to_string(levels_q2));
    }
    if (fock_dim < 2) {
      throw DimensionError("fock_dim must be >= 2, got " + std::to_string(fock_dim));
    }
  }

  int dim() const { return levels_q1 * levels_q2 * fock_dim; }

  int local_dim(Subsystem s) const {
    switch (s) {
      case Subsystem::q1: return levels_q1;
      case Subsystem::q2: return levels_q2;
      case Subsystem::resonator: return fock_dim;
    }
    throw DimensionError("unknown subsystem");
  }

  int index(int k1, int k2, int n) const {
    if (k1 < 0 || k1 >= levels_q1 || k2 < 0 || k2 >= levels_q2 || n < 0 || n >= fock_dim) {
      throw DimensionError("basis label out of range");
    }
    return (k1 * levels_q2 + k2) * fock_dim + n;
  }

  int index(Level k1, Level k2, int n) const { return index(idx(k1), idx(k2), n); }

  /// Inverse of index(): returns {k1, k2, n}.
  std::array<int, 3> labels(int i) const {
    return {i / (levels_q2 * fock_dim), (i / fock_dim) % levels_q2, i % fock_dim};
  }

  QuantumState basis(int k1, int k2, int n) const {
    QuantumState v = QuantumState::Zero(dim());
    v(index(k1, k2, n)) = 1.0;
    return v;
  }

  QuantumState basis(Level k1, Level k2, int n) const { return basis(idx(k1), idx(k2), n); }

  /// Total excitation number sum_j k_j + n of basis state i.
  int excitations(int i) const {
    auto l = labels(i);
    return l[0] + l[1] + l[2];
  }

  bool operator==(const HilbertSpace&) const = default;
};

inline Operator identity(int dim) { return Operator::Identity(dim, dim); }

inline Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Photon annihilation operator, a[n-1, n] = sqrt(n).
inline Operator annihilation(int fock_dim) {
  if (fock_dim < 2) throw DimensionError("annihilation needs fock_dim >= 2");
  Operator a = Operator::Zero(fock_dim, fock_dim);
  for (int n = 1; n < fock_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// |to><from| on a single qutrit.
inline Operator qutrit_transition(int levels, int from, int to) {
  if (from < 0 || to < 0 || from >= levels || to >= levels) {
    throw DimensionError("level index out of range for " + std::to_string(levels) + " levels");
  }
  Operator op = Operator::Zero(levels, levels);
  op(to, from) = 1.0;
  return op;
}

inline Operator qutrit_transition(int levels, Level from, Level to) {
  return qutrit_transition(levels, idx(from), idx(to));
}

/// sum_k sqrt(k+1) |k+1><k|, the transmon ladder raising operator.
inline Operator ladder_raise(int levels) {
  Operator op = Operator::Zero(levels, levels);
  for (int k = 0; k + 1 < levels; ++k) op(k + 1, k) = std::sqrt(static_cast<double>(k + 1));
  return op;
}

/// Identity (x) op (x) identity in the Q1 (x) Q2 (x) resonator ordering.
inline Operator embed(const Operator& op, Subsystem s, const HilbertSpace& space) {
  const int local = space.local_dim(s);
  if (op.rows() != local || op.cols() != local) {
    throw DimensionError("operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + " but subsystem dimension is " +
                         std::to_string(local));
  }
  const Operator i1 = identity(space.levels_q1);
  const Operator i2 = identity(space.levels_q2);
  const Operator ir = identity(space.fock_dim);
  switch (s) {
    case Subsystem::q1: return kron(kron(op, i2), ir);
    case Subsystem::q2: return kron(kron(i1, op), ir);
    case Subsystem::resonator: return kron(kron(i1, i2), op);
  }
  throw DimensionError("unknown subsystem");
}

/// Projector onto level k of one qutrit, embedded in the full space.
inline Operator level_projector(Subsystem s, int k, const HilbertSpace& space) {
  const int local = space.local_dim(s);
  return embed(qutrit_transition(local, k, k), s, space);
}

/// Level number operator sum_k k |k><k| of one qutrit.
inline Operator level_number(Subsystem s, const HilbertSpace& space) {
  const int local = space.local_dim(s);
  Operator n = Operator::Zero(local, local);
  for (int k = 1; k < local; ++k) n(k, k) = k;
  return embed(n, s, space);
}

inline double hermiticity_defect(const Operator& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Operator& a, double tol = 1e-12) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

/// Partial trace over the resonator: returns the two-qutrit reduced operator.
inline Operator trace_out_resonator(const Operator& rho, const HilbertSpace& space) {
  if (rho.rows() != space.dim() || rho.cols() != space.dim()) {
    throw DimensionError("operator does not live on the full space");
  }
  const int q = space.levels_q1 * space.levels_q2;
  const int f = space.fock_dim;
  Operator out = Operator::Zero(q, q);
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      cplx s = 0.0;
      for (int n = 0; n < f; ++n) s += rho(a * f + n, b * f + n);
      out(a, b) = s;
    }
  }
  return out;
}

/// Density matrix with the validity checks used throughout: Hermitian,
/// positive semidefinite up to round-off, trace in (0, 1]. Sub-unit trace is
/// legal and means population left the space being described.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Operator rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) throw DimensionError("density matrix must be square");
  }

  static DensityMatrix pure(const QuantumState& psi) { return DensityMatrix(psi * psi.adjoint()); }

  const Operator& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  double trace() const { return rho_.trace().real(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Empty string when valid, otherwise the first violated condition.
  std::string check(double herm_tol = 1e-10, double eig_tol = 1e-8, double trace_tol = 1e-9) const {
    if (hermiticity_defect(rho_) > herm_tol) return "not Hermitian";
    if (min_eigenvalue() < -eig_tol) return "negative eigenvalue";
    const double tr = trace();
    if (!(tr > 0.0) || tr > 1.0 + trace_tol) return "trace outside (0, 1]";
    return {};
  }

 private:
  Operator hermitian_part() const { return 0.5 * (rho_ + rho_.adjoint()); }

  Operator rho_;
};

}  // namespace holocnot
