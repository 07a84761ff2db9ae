#pragma once

// Adaptive embedded Runge-Kutta 4(5), Dormand-Prince coefficients.

#include <cmath>
#include <cstdint>
#include <functional>

#include "carnot/types.hpp"

namespace carnot {

struct OdeOptions {
  // Defaults sit two orders below the tightest sup-distance targets; flow
  // coordinates grow like s^2, so per-step relative error is amplified.
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  std::int64_t max_steps = 200000;
};

/// Integrates dy/dt = f(t, y) from t0 to t1 (either direction).
inline Vec integrate_ode(const std::function<Vec(double, const Vec&)>& f, Vec y,
                         double t0, double t1, const OdeOptions& opt = {}) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  if (t1 == t0) return y;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(opt.initial_step, std::abs(t1 - t0));
  Vec k1 = f(t, y);

  for (std::int64_t step = 0; step < opt.max_steps; ++step) {
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    const Vec k2 = f(t + c2 * h, y + h * (a21 * k1));
    const Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = f(t + h, ynew);
    const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double norm2 = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc = opt.abs_tol +
                        opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double q = err[i] / sc;
      norm2 += q * q;
    }
    const double enorm = std::sqrt(norm2 / static_cast<double>(y.size()));

    if (enorm <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      if (dir * (t - t1) >= 0.0) return y;
    }
    const double factor =
        enorm > 0.0 ? std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0) : 5.0;
    h *= factor;
    if (std::abs(h) < opt.min_step)
      throw ToleranceNotMet("integrate_ode: step size underflow");
  }
  throw ToleranceNotMet("integrate_ode: max step count exceeded");
}

}  // namespace carnot
