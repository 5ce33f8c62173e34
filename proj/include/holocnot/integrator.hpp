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

// Fixed-step Gragg-Bulirsch-Stoer integration of linear matrix ODEs
// dY/dt = F(t, Y), with convergence checked by repeated step halving.
//
// Each macro step runs the modified midpoint rule with n_j = 2, 4, ..., 2k
// substeps and extrapolates the results to zero step in h^2, giving order 2k.
// The step sequence never adapts to the solution, so results are bitwise
// reproducible for a fixed macro step.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace holocnot {

class IntegratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorSettings {
  double max_step = 2e-9;   // largest macro step (s)
  int columns = 6;          // extrapolation depth; order 2 * columns
  double tolerance = 1e-10; // max entry change between successive halvings
  int max_refinements = 6;
  bool verify = true;       // run the halving check; false trusts the first grid
};

/// Outcome of a converged propagation: states at each requested time.
template <class State>
struct Propagation {
  std::vector<double> times;
  std::vector<State> states;
  int macro_steps = 0;      // on the accepted grid
  int rhs_evaluations = 0;  // over every attempted grid
  double halving_change = 0.0;
};

namespace detail {

/// One extrapolated macro step from t to t + h.
template <class State, class Rhs>
State gbs_step(const Rhs& rhs, double t, double h, const State& y, int columns,
               int& evaluations) {
  State f0;
  rhs(t, y, f0);
  ++evaluations;
  std::vector<State> prev, cur;
  State z0, z1, fz, zn;
  for (int j = 0; j < columns; ++j) {
    const int n = 2 * (j + 1);
    const double sub = h / n;
    z0 = y;
    z1 = y + sub * f0;
    for (int m = 1; m < n; ++m) {
      rhs(t + m * sub, z1, fz);
      zn = z0 + (2.0 * sub) * fz;
      z0 = std::move(z1);
      z1 = std::move(zn);
    }
    rhs(t + h, z1, fz);
    evaluations += n;
    cur.resize(j + 1);
    cur[0] = 0.5 * (z0 + z1 + sub * fz);
    // Aitken-Neville: cur[k] = T_{j,k}, prev[k] = T_{j-1,k}.
    for (int k = 1; k <= j; ++k) {
      const double ratio = double(n) / double(2 * (j - k + 1));
      cur[k] = cur[k - 1] + (cur[k - 1] - prev[k - 1]) / (ratio * ratio - 1.0);
    }
    std::swap(prev, cur);
  }
  return prev.back();
}

inline std::vector<double> merged_grid(std::vector<double> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace detail

/// Integrates on a fixed grid: each interval between consecutive knots is
/// split into ceil(length / step) equal macro steps. Knots are the union of
/// `sample_times` and `breakpoints`; states are returned at `sample_times`.
template <class State, class Rhs>
Propagation<State> integrate_fixed(const Rhs& rhs, const State& y0, const std::vector<double>& sample_times,
                                   const std::vector<double>& breakpoints, double step, int columns) {
  if (sample_times.empty()) throw std::invalid_argument("integrate: no sample times");
  if (!(step > 0.0)) throw std::invalid_argument("integrate: step must be positive");
  if (columns < 1) throw std::invalid_argument("integrate: columns must be >= 1");
  if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
    throw std::invalid_argument("integrate: sample times must be increasing");
  }
  std::vector<double> knots = sample_times;
  for (double b : breakpoints) {
    if (b > sample_times.front() && b < sample_times.back()) knots.push_back(b);
  }
  knots = detail::merged_grid(std::move(knots));

  Propagation<State> out;
  State y = y0;
  std::size_t next_sample = 0;
  auto record = [&](double t) {
    while (next_sample < sample_times.size() && sample_times[next_sample] == t) {
      out.times.push_back(t);
      out.states.push_back(y);
      ++next_sample;
    }
  };
  record(knots.front());
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double len = knots[i + 1] - a;
    const int steps = std::max(1, static_cast<int>(std::ceil(len / step - 1e-9)));
    const double h = len / steps;
    for (int s = 0; s < steps; ++s) {
      y = detail::gbs_step(rhs, a + s * h, h, y, columns, out.rhs_evaluations);
    }
    out.macro_steps += steps;
    record(knots[i + 1]);
  }
  return out;
}

/// Integrates with step halving until two successive grids agree to
/// settings.tolerance in every entry of every sampled state.
template <class State, class Rhs>
Propagation<State> integrate(const Rhs& rhs, const State& y0, const std::vector<double>& sample_times,
                             const std::vector<double>& breakpoints, const IntegratorSettings& settings) {
  double step = settings.max_step;
  Propagation<State> coarse = integrate_fixed(rhs, y0, sample_times, breakpoints, step, settings.columns);
  if (!settings.verify) return coarse;
  int evaluations = coarse.rhs_evaluations;
  for (int r = 0; r < settings.max_refinements; ++r) {
    step *= 0.5;
    Propagation<State> fine = integrate_fixed(rhs, y0, sample_times, breakpoints, step, settings.columns);
    evaluations += fine.rhs_evaluations;
    double change = 0.0;
    for (std::size_t i = 0; i < fine.states.size(); ++i) {
      change = std::max(change, (fine.states[i] - coarse.states[i]).cwiseAbs().maxCoeff());
    }
    fine.halving_change = change;
    fine.rhs_evaluations = evaluations;
    if (change <= settings.tolerance) return fine;
    coarse = std::move(fine);
  }
  throw IntegratorError("integrator did not converge after " + std::to_string(settings.max_refinements) +
                        " step halvings (last change " + std::to_string(coarse.halving_change) + ")");
}

}  // namespace holocnot
