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

// State and process tomography on the {|g>, |f>} computational space.
//
// Readout sequence per qutrit: an e-f pi swap, then I, X/2 or Y/2 on the
// {g, e} pair, then projective readout. After the swap a physical "e" click
// means logical |f>, and a physical "f" click means the state was in |e>
// before the sequence (leakage). Population in |h> reads out as "f".
//
// Logical basis order |gg>, |gf>, |fg>, |ff>, with |g> = |0>, |f> = |1>.
// Pauli basis order II, IX, IY, IZ, XI, ..., ZZ (first factor on Q1).

#pragma once

#include "hilbert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace holocnot {

class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TomoOp { I, X2, Y2 };

inline const char* to_string(TomoOp op) {
  switch (op) {
    case TomoOp::I: return "I";
    case TomoOp::X2: return "X/2";
    case TomoOp::Y2: return "Y/2";
  }
  return "?";
}

struct TomographySetting {
  TomoOp q1 = TomoOp::I;
  TomoOp q2 = TomoOp::I;
};

/// The nine settings, Q1 major.
inline std::array<TomographySetting, 9> tomography_settings() {
  constexpr std::array<TomoOp, 3> ops{TomoOp::I, TomoOp::X2, TomoOp::Y2};
  std::array<TomographySetting, 9> out;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) out[a * 3 + b] = {ops[a], ops[b]};
  }
  return out;
}

/// Outcome labels per qutrit after relabeling: 0 = g, 1 = f (logical), 2 = e (leaked).
struct TomographyRecord {
  TomographySetting setting;
  std::array<double, 9> probabilities{};  // index o1 * 3 + o2

  /// Probabilities of the four logical outcomes gg, gf, fg, ff.
  std::array<double, 4> retained() const {
    return {probabilities[0], probabilities[1], probabilities[3], probabilities[4]};
  }
};

namespace detail {

inline const Matrix& pauli(int k) {
  static const std::array<Matrix, 4> p = [] {
    std::array<Matrix, 4> m;
    for (auto& x : m) x = Matrix::Zero(2, 2);
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, cplx(0, -1), cplx(0, 1), 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return p.at(k);
}

/// Readout unitary on one qutrit (levels >= 3): setting rotation on {g, e}
/// after the e-f swap.
inline Matrix readout_unitary(TomoOp op, int levels) {
  Matrix swap = Matrix::Identity(levels, levels);
  swap(1, 1) = 0.0;
  swap(2, 2) = 0.0;
  swap(1, 2) = 1.0;
  swap(2, 1) = 1.0;
  Matrix rot = Matrix::Identity(levels, levels);
  const double c = std::sqrt(0.5);
  if (op == TomoOp::X2) {
    rot(0, 0) = c;
    rot(0, 1) = cplx(0, -c);
    rot(1, 0) = cplx(0, -c);
    rot(1, 1) = c;
  } else if (op == TomoOp::Y2) {
    rot(0, 0) = c;
    rot(0, 1) = -c;
    rot(1, 0) = c;
    rot(1, 1) = c;
  }
  return rot * swap;
}

/// Physical readout level -> relabeled outcome: g -> 0, e -> 1 (logical f), f and h -> 2.
inline int relabel(int level) { return level == 0 ? 0 : (level == 1 ? 1 : 2); }

}  // namespace detail

/// Two-qubit Pauli operator P_a (x) P_b, index m = 4 a + b.
inline Matrix pauli_2q(int m) {
  if (m < 0 || m >= 16) throw std::out_of_range("two-qubit Pauli index out of range");
  return kron(detail::pauli(m / 4), detail::pauli(m % 4));
}

inline std::string pauli_label(int m) {
  static const char* names = "IXYZ";
  return std::string{names[m / 4], names[m % 4]};
}

/// Embeds a logical 4x4 operator into the two-qutrit space (levels each).
inline Matrix embed_logical(const Matrix& op4, int levels_q1, int levels_q2) {
  Matrix out = Matrix::Zero(levels_q1 * levels_q2, levels_q1 * levels_q2);
  const std::array<int, 2> lv{0, 2};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      out(lv[a / 2] * levels_q2 + lv[a % 2], lv[b / 2] * levels_q2 + lv[b % 2]) = op4(a, b);
    }
  }
  return out;
}

/// Logical block of a two-qutrit operator.
inline Matrix logical_block(const Matrix& op, int levels_q1, int levels_q2) {
  if (op.rows() != levels_q1 * levels_q2) throw DimensionError("operator does not live on the two-qutrit space");
  const std::array<int, 2> lv{0, 2};
  Matrix out(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) out(a, b) = op(lv[a / 2] * levels_q2 + lv[a % 2], lv[b / 2] * levels_q2 + lv[b % 2]);
  }
  return out;
}

/// The 36 product inputs, row-major over
/// {|g>, (|g>-i|f>)/sqrt2, (|g>+i|f>)/sqrt2, (|g>+|f>)/sqrt2, (|g>-|f>)/sqrt2, |f>}.
inline std::vector<QuantumState> input_states() {
  const double c = std::sqrt(0.5);
  std::array<Vector, 6> one;
  for (auto& v : one) v = Vector::Zero(2);
  one[0] << 1, 0;
  one[1] << c, cplx(0, -c);
  one[2] << c, cplx(0, c);
  one[3] << c, c;
  one[4] << c, -c;
  one[5] << 0, 1;
  std::vector<QuantumState> out;
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) out.push_back(kron(one[a], one[b]));
  }
  return out;
}

inline std::string input_label(int k) {
  static const std::array<const char*, 6> names{"g", "g-if", "g+if", "g+f", "g-f", "f"};
  return std::string(names.at(k / 6)) + "," + names.at(k % 6);
}

/// Readout statistics of a two-qutrit state (levels_q1 * levels_q2 square).
/// With `shots`, probabilities are replaced by multinomial frequencies.
inline TomographyRecord simulate_measurement(const Matrix& rho, int levels_q1, int levels_q2,
                                             const TomographySetting& setting,
                                             std::optional<int> shots = std::nullopt,
                                             std::mt19937_64* rng = nullptr) {
  if (levels_q1 < 3 || levels_q2 < 3) throw DimensionError("tomography needs qutrits with at least 3 levels");
  if (rho.rows() != levels_q1 * levels_q2 || rho.cols() != rho.rows()) {
    throw DimensionError("state does not live on the two-qutrit space");
  }
  const Matrix u = kron(detail::readout_unitary(setting.q1, levels_q1), detail::readout_unitary(setting.q2, levels_q2));
  const Matrix out = u * rho * u.adjoint();
  TomographyRecord rec;
  rec.setting = setting;
  for (int k1 = 0; k1 < levels_q1; ++k1) {
    for (int k2 = 0; k2 < levels_q2; ++k2) {
      const double p = std::max(0.0, out(k1 * levels_q2 + k2, k1 * levels_q2 + k2).real());
      rec.probabilities[detail::relabel(k1) * 3 + detail::relabel(k2)] += p;
    }
  }
  if (shots) {
    if (*shots <= 0) throw std::invalid_argument("shot count must be positive");
    if (rng == nullptr) throw std::invalid_argument("shot sampling needs a random generator");
    std::array<double, 9> w = rec.probabilities;
    double total = 0.0;
    for (double x : w) total += x;
    if (!(total > 0.0)) throw std::invalid_argument("shot sampling of a zero state");
    std::discrete_distribution<int> dist(w.begin(), w.end());
    std::array<int, 9> counts{};
    for (int s = 0; s < *shots; ++s) ++counts[dist(*rng)];
    for (int k = 0; k < 9; ++k) rec.probabilities[k] = total * counts[k] / static_cast<double>(*shots);
  }
  return rec;
}

/// Measurement of a logical 4x4 state (no leakage).
inline TomographyRecord simulate_measurement(const Matrix& rho4, const TomographySetting& setting,
                                             std::optional<int> shots = std::nullopt,
                                             std::mt19937_64* rng = nullptr) {
  if (rho4.rows() != 4 || rho4.cols() != 4) throw DimensionError("logical state must be 4x4");
  return simulate_measurement(embed_logical(rho4, 3, 3), 3, 3, setting, shots, rng);
}

inline std::array<TomographyRecord, 9> measure_all(const Matrix& rho, int levels_q1, int levels_q2,
                                                   std::optional<int> shots = std::nullopt,
                                                   std::mt19937_64* rng = nullptr) {
  std::array<TomographyRecord, 9> out;
  const auto settings = tomography_settings();
  for (int s = 0; s < 9; ++s) out[s] = simulate_measurement(rho, levels_q1, levels_q2, settings[s], shots, rng);
  return out;
}

namespace detail {

/// Retained probability of outcome o in setting s is tr(M_{s,o} rho) with M
/// the logical block of the readout POVM element. Rows: s * 4 + o; columns:
/// Pauli coefficient r_m in rho = sum_m r_m P_m / 4.
inline const Eigen::MatrixXd& density_design() {
  static const Eigen::MatrixXd a = [] {
    Eigen::MatrixXd m(36, 16);
    const auto settings = tomography_settings();
    for (int s = 0; s < 9; ++s) {
      const Matrix u = kron(readout_unitary(settings[s].q1, 3), readout_unitary(settings[s].q2, 3));
      for (int o = 0; o < 4; ++o) {
        // Logical outcome o = (o1, o2) is physical level (relabel^-1) g -> 0, f -> e = 1.
        const int k1 = o / 2, k2 = o % 2;
        Matrix proj = Matrix::Zero(9, 9);
        proj(k1 * 3 + k2, k1 * 3 + k2) = 1.0;
        const Matrix povm = logical_block(u.adjoint() * proj * u, 3, 3);
        for (int p = 0; p < 16; ++p) m(s * 4 + o, p) = (povm * pauli_2q(p)).trace().real() / 4.0;
      }
    }
    return m;
  }();
  return a;
}

inline const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>& density_solver() {
  static const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> qr = [] {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> d(density_design());
    if (d.rank() != 16) throw ReconstructionError("density design matrix is rank deficient");
    return d;
  }();
  return qr;
}

inline Matrix hermitian_from_pauli(const Eigen::VectorXd& r) {
  Matrix rho = Matrix::Zero(4, 4);
  for (int p = 0; p < 16; ++p) rho += r(p) / 4.0 * pauli_2q(p);
  return rho;
}

/// Clips negative eigenvalues; returns the clipped matrix.
inline Matrix clip_psd(const Matrix& h) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Unconstrained least-squares estimate, Hermitian by construction.
inline Matrix linear_density_estimate(const std::array<TomographyRecord, 9>& records) {
  Eigen::VectorXd b(36);
  const auto settings = tomography_settings();
  for (int s = 0; s < 9; ++s) {
    if (records[s].setting.q1 != settings[s].q1 || records[s].setting.q2 != settings[s].q2) {
      throw ReconstructionError("records must follow the tomography_settings() order");
    }
    const auto r = records[s].retained();
    for (int o = 0; o < 4; ++o) b(s * 4 + o) = r[o];
  }
  return detail::hermitian_from_pauli(detail::density_solver().solve(b));
}

/// Least-squares density matrix from the retained probabilities, made PSD by
/// eigenvalue clipping. The trace is left as fitted.
inline DensityMatrix reconstruct_density(const std::array<TomographyRecord, 9>& records) {
  const Matrix lin = linear_density_estimate(records);
  Matrix rho = detail::clip_psd(lin);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

/// Process matrix in the two-qubit Pauli basis, E(rho) = sum chi_mn P_m rho P_n.
struct ChiMatrix {
  Matrix chi = Matrix::Zero(16, 16);

  double trace() const { return chi.trace().real(); }
  double min_eigenvalue() const {
    return Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (chi + chi.adjoint()), Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
  }
  Matrix apply(const Matrix& rho4) const {
    Matrix out = Matrix::Zero(4, 4);
    for (int m = 0; m < 16; ++m) {
      for (int n = 0; n < 16; ++n) {
        if (chi(m, n) != 0.0) out += chi(m, n) * pauli_2q(m) * rho4 * pauli_2q(n);
      }
    }
    return out;
  }
};

/// c_m = tr(P_m U) / 4, so U = sum_m c_m P_m.
inline Vector pauli_coefficients(const Matrix& u) {
  if (u.rows() != 4 || u.cols() != 4) throw DimensionError("two-qubit operator must be 4x4");
  Vector c(16);
  for (int m = 0; m < 16; ++m) c(m) = (pauli_2q(m) * u).trace() / 4.0;
  return c;
}

inline ChiMatrix chi_of_unitary(const Matrix& u) {
  const Vector c = pauli_coefficients(u);
  return ChiMatrix{c * c.adjoint()};
}

/// chi of a channel given by Kraus operators.
inline ChiMatrix chi_of_kraus(const std::vector<Matrix>& kraus) {
  ChiMatrix out;
  for (const auto& k : kraus) {
    const Vector c = pauli_coefficients(k);
    out.chi += c * c.adjoint();
  }
  return out;
}

/// CNOT with control Q1, target Q2: (II + ZI + IX - ZX) / 2.
inline Matrix cnot_unitary() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u(2, 3) = 1.0;
  u(3, 2) = 1.0;
  return u;
}

inline ChiMatrix chi_ideal_cnot() { return chi_of_unitary(cnot_unitary()); }

namespace detail {

/// Hermitian basis of 16x16 matrices: diagonal units, then (E_mn + E_nm) and
/// i(E_mn - E_nm) for m < n.
struct HermitianBasisEntry {
  int m;
  int n;
  int kind;  // 0 diagonal, 1 symmetric, 2 antisymmetric
};

inline const std::vector<HermitianBasisEntry>& chi_parameterization() {
  static const std::vector<HermitianBasisEntry> basis = [] {
    std::vector<HermitianBasisEntry> b;
    for (int m = 0; m < 16; ++m) b.push_back({m, m, 0});
    for (int m = 0; m < 16; ++m) {
      for (int n = m + 1; n < 16; ++n) {
        b.push_back({m, n, 1});
        b.push_back({m, n, 2});
      }
    }
    return b;
  }();
  return basis;
}

/// Real coordinates of a Hermitian 4x4: Re diagonal then Re/Im of the upper triangle.
inline void hermitian_coordinates(const Matrix& h, double* out) {
  int k = 0;
  for (int i = 0; i < 4; ++i) out[k++] = h(i, i).real();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      out[k++] = h(i, j).real();
      out[k++] = h(i, j).imag();
    }
  }
}

inline const Eigen::MatrixXd& chi_design() {
  static const Eigen::MatrixXd a = [] {
    const auto inputs = input_states();
    const auto& basis = chi_parameterization();
    Eigen::MatrixXd m(36 * 16, 256);
    std::array<Matrix, 16> p;
    for (int k = 0; k < 16; ++k) p[k] = pauli_2q(k);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const Matrix rho = inputs[i] * inputs[i].adjoint();
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto& e = basis[j];
        Matrix img;
        if (e.kind == 0) {
          img = p[e.m] * rho * p[e.m];
        } else if (e.kind == 1) {
          img = p[e.m] * rho * p[e.n] + p[e.n] * rho * p[e.m];
        } else {
          img = I * (p[e.m] * rho * p[e.n]) - I * (p[e.n] * rho * p[e.m]);
        }
        hermitian_coordinates(img, &m(i * 16, j));
      }
    }
    return m;
  }();
  return a;
}

inline const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>& chi_solver() {
  static const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> d = [] {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> s(chi_design());
    if (s.rank() != 256) throw ReconstructionError("process design matrix is rank deficient");
    return s;
  }();
  return d;
}

inline Matrix chi_from_parameters(const Eigen::VectorXd& x) {
  const auto& basis = chi_parameterization();
  Matrix chi = Matrix::Zero(16, 16);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& e = basis[j];
    if (e.kind == 0) {
      chi(e.m, e.m) += x(j);
    } else if (e.kind == 1) {
      chi(e.m, e.n) += x(j);
      chi(e.n, e.m) += x(j);
    } else {
      chi(e.m, e.n) += I * x(j);
      chi(e.n, e.m) -= I * x(j);
    }
  }
  return chi;
}

inline Eigen::VectorXd chi_parameters(const Matrix& chi) {
  const auto& basis = chi_parameterization();
  Eigen::VectorXd x(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& e = basis[j];
    x(j) = e.kind == 0 ? chi(e.m, e.m).real() : (e.kind == 1 ? chi(e.m, e.n).real() : chi(e.m, e.n).imag());
  }
  return x;
}

}  // namespace detail

struct ProcessReconstruction {
  ChiMatrix chi;
  double residual = 0.0;      // ||A x - b|| of the returned chi
  double clipped_weight = 0.0;  // sum of negative eigenvalues removed
};

/// Least-squares chi from the 36 output states (input_states() order).
/// Hermitian exactly through the real parameterization; PSD by clipping the
/// negative eigenvalues, then refitting the overall scale of the clipped
/// matrix. No trace constraint.
inline ProcessReconstruction reconstruct_chi(const std::vector<Matrix>& outputs) {
  if (outputs.size() != 36) throw ReconstructionError("process tomography needs 36 output states");
  Eigen::VectorXd b(36 * 16);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i].rows() != 4 || outputs[i].cols() != 4) throw DimensionError("output states must be 4x4");
    detail::hermitian_coordinates(0.5 * (outputs[i] + outputs[i].adjoint()), &b(i * 16));
  }
  const Eigen::VectorXd x = detail::chi_solver().solve(b);
  const Matrix lin = detail::chi_from_parameters(x);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(lin);
  ProcessReconstruction out;
  out.clipped_weight = -es.eigenvalues().cwiseMin(0.0).sum();
  Matrix chi = detail::clip_psd(lin);
  if (out.clipped_weight > 0.0) {
    const Eigen::VectorXd ax = detail::chi_design() * detail::chi_parameters(chi);
    const double denom = ax.squaredNorm();
    const double scale = denom > 0.0 ? std::max(0.0, ax.dot(b) / denom) : 0.0;
    chi *= scale;
  }
  out.chi.chi = 0.5 * (chi + chi.adjoint());
  out.residual = (detail::chi_design() * detail::chi_parameters(out.chi.chi) - b).norm();
  return out;
}

/// tr(chi_id chi_meas), real part.
inline double process_fidelity(const ChiMatrix& meas, const ChiMatrix& ideal) {
  const cplx f = (ideal.chi * meas.chi).trace();
  return f.real();
}

/// <psi| rho |psi> for a logical pure target.
inline double state_fidelity(const Matrix& rho, const Vector& target) {
  if (rho.rows() != target.size()) throw DimensionError("state and target differ in dimension");
  if (hermiticity_defect(rho) > 1e-8) throw std::invalid_argument("state_fidelity: state is not Hermitian");
  return (target.adjoint() * rho * target)(0, 0).real();
}

/// Wootters concurrence max(0, s1 - s2 - s3 - s4), s_i the decreasing square
/// roots of the eigenvalues of rho (Y x Y) rho* (Y x Y).
inline double concurrence(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("concurrence needs a two-qubit state");
  if (hermiticity_defect(rho) > 1e-8) throw std::invalid_argument("concurrence: state is not Hermitian");
  const Matrix yy = pauli_2q(10);
  const Matrix r = rho * yy * rho.conjugate() * yy;
  const Eigen::ComplexEigenSolver<Matrix> es(r, false);
  std::array<double, 4> s{};
  for (int k = 0; k < 4; ++k) s[k] = std::sqrt(std::max(0.0, es.eigenvalues()(k).real()));
  std::sort(s.begin(), s.end(), std::greater<>());
  return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

/// Average populations of |e> on Q1 and Q2 over a set of two-qutrit states.
struct LeakageReport {
  std::vector<std::array<double, 2>> per_input;
  std::array<double, 2> average{};
};

inline std::array<double, 2> excited_populations(const Matrix& rho, int levels_q1, int levels_q2) {
  std::array<double, 2> e{};
  for (int k1 = 0; k1 < levels_q1; ++k1) {
    for (int k2 = 0; k2 < levels_q2; ++k2) {
      const double p = rho(k1 * levels_q2 + k2, k1 * levels_q2 + k2).real();
      if (k1 == 1) e[0] += p;
      if (k2 == 1) e[1] += p;
    }
  }
  return e;
}

inline LeakageReport leakage_report(const std::vector<Matrix>& states, int levels_q1, int levels_q2) {
  LeakageReport r;
  for (const auto& rho : states) {
    r.per_input.push_back(excited_populations(rho, levels_q1, levels_q2));
    r.average[0] += r.per_input.back()[0];
    r.average[1] += r.per_input.back()[1];
  }
  if (!states.empty()) {
    r.average[0] /= static_cast<double>(states.size());
    r.average[1] /= static_cast<double>(states.size());
  }
  return r;
}

}  // namespace holocnot
