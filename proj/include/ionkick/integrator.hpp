#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <functional>
#include <limits>

#include "ionkick/errors.hpp"

namespace ionkick {

struct StepperOptions {
  double tol = 1e-10;       // absolute and relative local-error tolerance
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

// Adaptive embedded Dormand-Prince 5(4) on a complex matrix state.
// f(t, y, dydt) writes the derivative; observer(t, y) is called at t0 and
// after every accepted step. Throws NumericError on step-size underflow.
template <typename Deriv, typename Observer>
void integrate_adaptive(Deriv&& f, Eigen::MatrixXcd& y, double t0, double t1,
                        const StepperOptions& opt, Observer&& observer) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
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
  // 4th-order weights (include the k7 stage)
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                          e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                          e6 = 187.0 / 2100, e7 = 1.0 / 40;

  const double span = t1 - t0;
  if (span <= 0.0) throw NumericError("integration span must be positive");
  const double tol = opt.tol;

  Eigen::MatrixXcd k1(y.rows(), y.cols()), k2 = k1, k3 = k1, k4 = k1, k5 = k1,
                   k6 = k1, k7 = k1, ytmp = k1, y5 = k1, err = k1;

  double t = t0;
  double h = std::min({span / 100.0, opt.max_step, span});
  observer(t, y);
  long steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps)
      throw NumericError("integrator exceeded maximum step count");
    h = std::min({h, opt.max_step, t1 - t});
    if (h < span * 1e-15)
      throw NumericError("integrator step-size underflow (stiff failure) at t = " +
                         std::to_string(t));
    f(t, y, k1);
    ytmp = y + h * (a21 * k1);
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, y5, k7);
    err = y5 - (y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));

    double acc = 0.0;
    for (Eigen::Index j = 0; j < y.cols(); ++j)
      for (Eigen::Index i = 0; i < y.rows(); ++i) {
        const double sc = tol + tol * std::max(std::abs(y(i, j)), std::abs(y5(i, j)));
        const double r = std::abs(err(i, j)) / sc;
        acc += r * r;
      }
    const double enorm = std::sqrt(acc / static_cast<double>(y.size()));

    if (enorm <= 1.0) {
      t += h;
      y = y5;
      observer(t, y);
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(enorm, 1e-10), -0.2), 0.2, 5.0);
    h *= factor;
  }
}

}  // namespace ionkick
