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

// Box-constrained Nelder-Mead minimizer. Trial points are clamped onto the
// box, the evaluation budget is hard, and ties are broken by insertion order,
// so a run is a pure function of its inputs.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace holocnot {

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }

  void validate() const {
    if (lower.size() != upper.size() || lower.empty()) throw std::invalid_argument("box bounds mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(lower[i] <= upper[i])) throw std::invalid_argument("box lower bound exceeds upper bound");
    }
  }

  std::vector<double> clamp(std::vector<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    return x;
  }

  bool contains(const std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
  }
};

struct NelderMeadOptions {
  int max_evaluations = 150;
  double initial_scale = 0.1;  // simplex edge as a fraction of each box width
  double x_tolerance = 1e-4;   // simplex extent, as a fraction of the box width
  double f_tolerance = 1e-7;   // spread of objective values over the simplex
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f over the box starting from x0. Counts every call to f against
/// the budget, including the initial simplex.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0, const Box& box,
                                    const NelderMeadOptions& opt = {}) {
  box.validate();
  const std::size_t n = box.size();
  if (x0.size() != n) throw std::invalid_argument("nelder_mead: start point has the wrong dimension");
  if (opt.max_evaluations < static_cast<int>(n) + 1) {
    throw std::invalid_argument("nelder_mead: budget smaller than the initial simplex");
  }

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  std::vector<std::vector<double>> pts;
  std::vector<double> vals;
  pts.push_back(box.clamp(x0));
  vals.push_back(eval(pts[0]));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p = pts[0];
    const double width = box.upper[i] - box.lower[i];
    const double step = opt.initial_scale * (width > 0.0 ? width : 1.0);
    p[i] += (p[i] + step <= box.upper[i]) ? step : -step;
    p = box.clamp(p);
    pts.push_back(p);
    vals.push_back(eval(p));
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2;
    std::vector<double> v2;
    for (auto i : order) {
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };
  auto extent = [&] {
    double e = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double width = box.upper[i] - box.lower[i];
        e = std::max(e, std::abs(pts[k][i] - pts[0][i]) / (width > 0.0 ? width : 1.0));
      }
    }
    return e;
  };
  auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return box.clamp(r);
  };

  sort_simplex();
  while (res.evaluations < opt.max_evaluations) {
    if (extent() < opt.x_tolerance && vals[n] - vals[0] < opt.f_tolerance) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[k][i] / static_cast<double>(n);
    }
    const auto xr = blend(centroid, pts[n], -1.0);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      if (res.evaluations >= opt.max_evaluations) {
        pts[n] = xr;
        vals[n] = fr;
      } else {
        const auto xe = blend(centroid, pts[n], -2.0);
        const double fe = eval(xe);
        pts[n] = fe < fr ? xe : xr;
        vals[n] = std::min(fe, fr);
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      if (res.evaluations >= opt.max_evaluations) break;
      const bool outside = fr < vals[n];
      const auto xc = outside ? blend(centroid, xr, 0.5) : blend(centroid, pts[n], 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, vals[n])) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (std::size_t k = 1; k <= n && res.evaluations < opt.max_evaluations; ++k) {
          pts[k] = blend(pts[0], pts[k], 0.5);
          vals[k] = eval(pts[k]);
        }
      }
    }
    sort_simplex();
  }
  if (!res.converged && extent() < opt.x_tolerance && vals[n] - vals[0] < opt.f_tolerance) res.converged = true;
  res.x = pts[0];
  res.value = vals[0];
  return res;
}

}  // namespace holocnot
