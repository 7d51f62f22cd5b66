// Copyright 2026 The hybridspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Adaptive Dormand-Prince 5(4) integrator for complex Eigen states.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include <Eigen/Core>

#include "hybridspin/errors.hpp"

namespace hybridspin {

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 0.0;  ///< 0 selects the step automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double smallest_step = std::numeric_limits<double>::infinity();
};

namespace detail {

template <class State>
double scaled_rms(const State& err, const State& y0, const State& y1, double atol, double rtol) {
  const auto n = err.size();
  if (n == 0) return 0.0;
  double acc = 0.0;
  const auto* e = err.data();
  const auto* a = y0.data();
  const auto* b = y1.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    const double q = std::abs(e[i]) / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace detail

/// Integrates dy/dt = rhs(t, y, dydt) from `t0` through every time in
/// `sample_times` (non-decreasing, all >= t0). `observer(index, t, y)` is
/// called at each sample; steps are clamped to land on samples exactly.
/// Throws StiffnessError when the step size underflows and IntegrationError
/// when the step budget is exhausted or the state becomes non-finite.
template <class State, class Rhs, class Observer>
IntegratorStats integrate_dopri5(Rhs&& rhs, State& y, double t0,
                                 std::span<const double> sample_times,
                                 const IntegratorOptions& opt, Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  IntegratorStats stats;
  double t = t0;
  State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
  rhs(t, y, k1);
  ++stats.rhs_evaluations;

  double h = opt.initial_step;
  const double t_last = sample_times.empty() ? t0 : sample_times.back();
  if (!(h > 0.0)) {
    const double d0 = detail::scaled_rms(y, y, y, opt.abs_tol, opt.rel_tol);
    const double d1 = detail::scaled_rms(k1, y, y, opt.abs_tol, opt.rel_tol);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, std::max(std::abs(t_last - t0), 1e-12));
  }
  h = std::min(h, opt.max_step);

  bool last_rejected = false;
  for (std::size_t s = 0; s < sample_times.size(); ++s) {
    const double target = sample_times[s];
    if (target < t) throw InvalidArgument("sample times must be non-decreasing and >= t0");
    while (t < target) {
      const double remaining = target - t;
      bool clamped = false;
      double step = h;
      if (step >= remaining * (1.0 - 1e-12)) {
        step = remaining;
        clamped = true;
      }
      const double scale = std::max({std::abs(t), std::abs(target), 1e-300});
      if (!clamped && step < 1e-14 * scale) {
        throw StiffnessError("step size underflow; the system is too stiff for the tolerances",
                             t);
      }
      if (stats.accepted + stats.rejected >= opt.max_steps) {
        throw IntegrationError("step budget exhausted", t);
      }

      ytmp = y + (step * a21) * k1;
      rhs(t + c2 * step, ytmp, k2);
      ytmp = y + step * (a31 * k1 + a32 * k2);
      rhs(t + c3 * step, ytmp, k3);
      ytmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * step, ytmp, k4);
      ytmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * step, ytmp, k5);
      ytmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + step, ytmp, k6);
      ynew = y + step * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      const double t_new = clamped ? target : t + step;
      rhs(t_new, ynew, k7);
      stats.rhs_evaluations += 6;
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double en = detail::scaled_rms(err, y, ynew, opt.abs_tol, opt.rel_tol);
      if (!std::isfinite(en)) {
        throw IntegrationError("non-finite state during integration", t);
      }
      double factor = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
      if (en <= 1.0) {
        factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 5.0);
        ++stats.accepted;
        stats.smallest_step = std::min(stats.smallest_step, step);
        t = t_new;
        y.swap(ynew);
        k1.swap(k7);
        last_rejected = false;
        // A clamped step says nothing about the natural step size.
        if (!clamped || factor < 1.0) h = std::min(step * factor, opt.max_step);
      } else {
        ++stats.rejected;
        last_rejected = true;
        h = step * std::max(0.2, factor);
      }
    }
    observer(s, t, y);
  }
  return stats;
}

}  // namespace hybridspin
