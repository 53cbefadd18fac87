#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dnp2d/field2d.hpp"

namespace dnp2d::analysis {

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;  // of log(value) against log(t)
  double residual_rms = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  int points = 0;
};

// Ordinary least squares on (log t, log value) restricted to [t_lo, t_hi].
// Requires at least 5 strictly positive points in the window.
DecayFit decay_fit(std::span<const std::pair<double, double>> series, double t_lo, double t_hi);

// The L^{2^k} energy-estimate constants: a_1 = C/2, a_k = C 2^{k-2} a_{k-1}^2,
// tracked in log space (a_k grows doubly exponentially), with the companion
// exponent recurrence w_k = 2 w_{k-1} + (k-2), w_1 = -1 and v_k = 2^k - 1.
struct MoserConstants {
  double C = 0.0;
  std::vector<double> log_a;       // natural log of a_k, k = 1..k_max
  std::vector<long long> w;        // w_k
  std::vector<double> roots;       // a_k^{1/2^k}
  double a(int k) const;           // may overflow to +inf for large k; log_a is exact
  double closed_form_log_a(int k) const;  // (2^k - 1) ln C + w_k ln 2
};

MoserConstants moser_constants(double C, int k_max);

// ||u||_2 / (||grad u||_2^{1/2} ||u||_1^{1/2}); dilation invariant in 2D.
// The gradient is spectral, the norms are Riemann sums.
double nash_ratio(field2d::SpectralWorkspace& ws, const field2d::Field2D& u);

// Riemann-sum L^p norm of a 2D field; p = inf gives the max of samples.
double lp_norm(const field2d::Field2D& u, double p);

}  // namespace dnp2d::analysis
