#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "dnp2d/errors.hpp"

namespace dnp2d {

enum class StepAction {
  accept,  // keep the step
  retry,   // invariant violated inside the step: halve and retry
  stop     // finish the integration early at this point
};

// Embedded Dormand-Prince 5(4) pair with adaptive step control for small
// fixed-size systems.  The observer sees every accepted step and may veto it
// (retried at half size before the integration is declared failed) or end
// the integration early.
template <std::size_t N>
class Rk45 {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<State(double, const State&)>;
  using Observer = std::function<StepAction(double, const State&)>;

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h0 = 1e-4;
    double h_max = 1.0;
    double h_min = 1e-14;
  };

  static void integrate(const Rhs& f, double t0, double t1, State y, const Options& opt,
                        const Observer& on_step) {
    double t = t0;
    double h = std::min(opt.h0, opt.h_max);
    State k[7];
    k[0] = f(t, y);
    while (t < t1) {
      h = std::min(h, t1 - t);
      State y5{}, y4{};
      for (;;) {
        stages(f, t, y, h, k, y5, y4);
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
          const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
          const double e = (y5[i] - y4[i]) / sc;
          err += e * e;
        }
        err = std::sqrt(err / N);
        if (!std::isfinite(err)) {
          // overflowing stage values: treat like a maximal error estimate
          h *= 0.2;
          if (!(h >= opt.h_min)) throw solver_error("rk45: state left the finite range", t);
          continue;
        }
        if (err <= 1.0) {
          const StepAction act = on_step(t + h, y5);
          if (act == StepAction::retry) {
            h *= 0.5;
            if (!(h >= opt.h_min))
              throw solver_error("rk45: invariant violated at minimal step", t);
            continue;
          }
          if (act == StepAction::stop) return;
          t += h;
          y = y5;
          k[0] = f(t, y);  // FSAL not exploited; rhs is cheap here
          const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
          h = std::min(opt.h_max, h * std::clamp(fac, 0.2, 5.0));
          break;
        }
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
        if (!(h >= opt.h_min)) throw solver_error("rk45: step size underflow", t);
      }
    }
  }

 private:
  static void stages(const Rhs& f, double t, const State& y, double h, State k[7], State& y5,
                     State& y4) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    State tmp;
    auto lc = [&](std::initializer_list<std::pair<double, const State*>> terms) {
      for (std::size_t i = 0; i < N; ++i) {
        double s = y[i];
        for (const auto& [c, v] : terms) s += h * c * (*v)[i];
        tmp[i] = s;
      }
      return tmp;
    };
    k[1] = f(t + c2 * h, lc({{a21, &k[0]}}));
    k[2] = f(t + c3 * h, lc({{a31, &k[0]}, {a32, &k[1]}}));
    k[3] = f(t + c4 * h, lc({{a41, &k[0]}, {a42, &k[1]}, {a43, &k[2]}}));
    k[4] = f(t + c5 * h, lc({{a51, &k[0]}, {a52, &k[1]}, {a53, &k[2]}, {a54, &k[3]}}));
    k[5] = f(t + h, lc({{a61, &k[0]}, {a62, &k[1]}, {a63, &k[2]}, {a64, &k[3]}, {a65, &k[4]}}));
    for (std::size_t i = 0; i < N; ++i)
      y5[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
    k[6] = f(t + h, y5);
    for (std::size_t i = 0; i < N; ++i)
      y4[i] = y[i] + h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                          e6 * k[5][i] + e7 * k[6][i]);
  }
};

}  // namespace dnp2d
