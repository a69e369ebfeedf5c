#pragma once

// Adaptive Dormand-Prince 5(4) integrator for Eigen-valued ODEs y' = f(t, y).

#include <algorithm>
#include <cmath>

#include "jpmcount/error.hpp"

namespace jpmcount::ode {

struct Options {
  double rtol = 1e-9;
  double atol = 1e-12;
  /// Zero selects an automatic first step.
  double initial_step = 0.0;
  long max_steps = 5'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, const Options& opt) {
  const auto scale =
      (opt.atol + opt.rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  return (err.cwiseAbs().array() / scale).maxCoeff();
}

}  // namespace detail

/// Integrates from t0 to t1 and returns y(t1). `rhs(t, y)` must return dy/dt.
template <class State, class Rhs>
State integrate(Rhs&& rhs, State y, double t0, double t1, const Options& opt = {},
                Stats* stats = nullptr) {
  if (t1 < t0) throw InvalidArgument("ode::integrate: t1 < t0");
  if (t1 == t0) return y;

  // Dormand-Prince tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t1 - t0;
  double t = t0;
  State k1 = rhs(t, y);

  double h = opt.initial_step;
  if (h <= 0.0) {
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1.cwiseAbs().maxCoeff();
    h = (d1 > 0.0) ? 0.01 * std::max(d0, opt.atol / opt.rtol) / d1 : span;
    h = std::min(h, span);
  }
  const double h_floor = span * 1e-14;

  Stats local;
  for (long step = 0; step < opt.max_steps; ++step) {
    if (t >= t1) break;
    h = std::min(h, t1 - t);
    const State k2 = rhs(t + c2 * h, (y + h * a21 * k1).eval());
    const State k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    const State k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const State k5 =
        rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 = rhs(
        t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = rhs(t + h, y_new);
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = detail::scaled_error(err, y, y_new, opt);
    if (!std::isfinite(en)) throw NumericalError("ode::integrate: non-finite state");
    if (en <= 1.0) {
      t = (t1 - (t + h) < h_floor) ? t1 : t + h;
      y = std::move(y_new);
      k1 = std::move(k7);
      ++local.accepted;
    } else {
      ++local.rejected;
    }
    const double factor = (en == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h *= factor;
    if (t < t1 && h < h_floor) throw NumericalError("ode::integrate: step size underflow");
  }
  if (t < t1) throw NumericalError("ode::integrate: step budget exhausted");
  if (stats) *stats = local;
  return y;
}

}  // namespace jpmcount::ode
