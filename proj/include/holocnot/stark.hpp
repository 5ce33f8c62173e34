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

// Second-order AC Stark shifts of the single-excitation dressed state of the
// target qubit. All quantities are angular frequencies (rad/s); shifts are
// signed energies, negative meaning the level moves down.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace holocnot {

class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Which dressed state of the n = 1 Jaynes-Cummings doublet a shift refers to.
enum class DressedBranch { minus, plus };

/// How the drive-induced shift of |psi_1^-> enters the compensation. The
/// two readings differ by a factor of two; `single` shifts the level by
/// delta_1, `doubled` by 2 delta_1.
enum class Delta1Convention { single, doubled };

inline const char* to_string(Delta1Convention c) {
  return c == Delta1Convention::single ? "single" : "doubled";
}

/// delta_1 = W^2 / ((2 - sqrt2) L) + W^2 / ((2 + sqrt2) L), which collapses to
/// 2 W^2 / L.
inline double stark_delta1(double omega_ge, double lambda2) {
  if (lambda2 == 0.0) throw SingularityError("stark_delta1: lambda2 must be non-zero");
  return 2.0 * omega_ge * omega_ge / lambda2;
}

/// The two-term literal form of stark_delta1, kept for cross-checks.
inline double stark_delta1_two_term(double omega_ge, double lambda2) {
  const double s2 = std::sqrt(2.0);
  const double w2 = omega_ge * omega_ge;
  return w2 / ((2.0 - s2) * lambda2) + w2 / ((2.0 + s2) * lambda2);
}

/// Magnitude of the downward drive-induced shift of |psi_1^-> under the chosen
/// convention.
inline double psi1_drive_shift(double omega_ge, double lambda2, Delta1Convention c) {
  const double d1 = stark_delta1(omega_ge, lambda2);
  return c == Delta1Convention::single ? d1 : 2.0 * d1;
}

struct StarkShiftReport {
  DressedBranch branch = DressedBranch::minus;
  double delta1 = 0.0;           // drive-induced, 2 W_ge^2 / lambda2 (magnitude)
  double delta2_h = 0.0;         // via |h1>|g2 0>
  double delta2_e_plus = 0.0;    // via |e1>|psi_2^+>
  double delta2_e_minus = 0.0;   // via |e1>|psi_2^->
  double delta2_total = 0.0;     // sum of the three photon-induced terms
  double delta2_approx = 0.0;    // -9 lambda1^2 / (4 alpha1)
};

namespace detail {

inline double checked_denominator(double d, double scale, const char* what) {
  if (std::abs(d) <= 1e-6 * scale) {
    throw SingularityError(std::string("stark_delta2: near-zero denominator in ") + what);
  }
  return d;
}

}  // namespace detail

/// Photon-induced shifts of |f1>|psi_1^{-/+}> from couplings to |h1 g2 0> and
/// |e1 psi_2^{+/-}>. `omega_ge` only fills the delta1 field of the report.
inline StarkShiftReport stark_delta2(double lambda1, double alpha1, double lambda2,
                                     DressedBranch branch, double omega_ge = 0.0) {
  if (!(alpha1 > 0.0)) throw std::invalid_argument("stark_delta2: alpha1 must be positive");
  const double s2 = std::sqrt(2.0);
  const double scale = std::abs(alpha1) + std::abs(lambda2);
  StarkShiftReport r;
  r.branch = branch;
  r.delta1 = lambda2 != 0.0 ? stark_delta1(omega_ge, lambda2) : 0.0;

  const double h_coupling_sq = 1.5 * lambda1 * lambda1;  // (sqrt3 lambda1 / sqrt2)^2
  const double e_coupling = s2 * lambda1 / 2.0;
  if (branch == DressedBranch::minus) {
    r.delta2_h = h_coupling_sq / detail::checked_denominator(2.0 * alpha1 - lambda2, scale, "2a1-l2");
    const double cp = e_coupling * (1.0 - s2);
    const double cm = e_coupling * (1.0 + s2);
    r.delta2_e_plus = -cp * cp / detail::checked_denominator(alpha1 + (1.0 + s2) * lambda2, scale, "a1+(1+s2)l2");
    r.delta2_e_minus = -cm * cm / detail::checked_denominator(alpha1 + (1.0 - s2) * lambda2, scale, "a1+(1-s2)l2");
  } else {
    r.delta2_h = h_coupling_sq / detail::checked_denominator(2.0 * alpha1 + lambda2, scale, "2a1+l2");
    const double cp = e_coupling * (1.0 + s2);
    const double cm = e_coupling * (1.0 - s2);
    r.delta2_e_plus = -cp * cp / detail::checked_denominator(alpha1 - (1.0 - s2) * lambda2, scale, "a1-(1-s2)l2");
    r.delta2_e_minus = -cm * cm / detail::checked_denominator(alpha1 - (1.0 + s2) * lambda2, scale, "a1-(1+s2)l2");
  }
  r.delta2_total = r.delta2_h + r.delta2_e_plus + r.delta2_e_minus;
  r.delta2_approx = -9.0 * lambda1 * lambda1 / (4.0 * alpha1);
  return r;
}

}  // namespace holocnot
