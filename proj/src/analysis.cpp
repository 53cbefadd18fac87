#include "dnp2d/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dnp2d/kernels.hpp"

namespace dnp2d::analysis {

DecayFit decay_fit(std::span<const std::pair<double, double>> series, double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("decay_fit: need t_lo < t_hi");
  std::vector<double> x, y;
  for (const auto& [t, v] : series) {
    if (t < t_lo || t > t_hi) continue;
    if (!(v > 0.0))
      throw std::invalid_argument("decay_fit: values in the window must be strictly positive");
    x.push_back(std::log(t));
    y.push_back(std::log(v));
  }
  if (x.size() < 5) throw std::invalid_argument("decay_fit: need at least 5 points in the window");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.exponent * x[i]);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = static_cast<int>(x.size());
  return fit;
}

double MoserConstants::a(int k) const { return std::exp(log_a.at(k - 1)); }

double MoserConstants::closed_form_log_a(int k) const {
  const double vk = std::pow(2.0, k) - 1.0;
  return vk * std::log(C) + static_cast<double>(w.at(k - 1)) * std::log(2.0);
}

MoserConstants moser_constants(double C, int k_max) {
  if (!(C > 0.0)) throw std::invalid_argument("moser_constants: need C > 0");
  if (k_max < 1 || k_max > 40)
    throw std::invalid_argument("moser_constants: need 1 <= k_max <= 40");
  MoserConstants mc;
  mc.C = C;
  mc.log_a.resize(k_max);
  mc.w.resize(k_max);
  mc.roots.resize(k_max);
  const double lnC = std::log(C), ln2 = std::log(2.0);
  mc.log_a[0] = lnC - ln2;  // a_1 = C/2
  mc.w[0] = -1;
  for (int k = 2; k <= k_max; ++k) {
    mc.log_a[k - 1] = lnC + (k - 2) * ln2 + 2.0 * mc.log_a[k - 2];
    mc.w[k - 1] = 2 * mc.w[k - 2] + (k - 2);
  }
  for (int k = 1; k <= k_max; ++k)
    mc.roots[k - 1] = std::exp(mc.log_a[k - 1] / std::pow(2.0, k));
  return mc;
}

double nash_ratio(field2d::SpectralWorkspace& ws, const field2d::Field2D& u) {
  const double peak = kern::max_abs(u.values);
  if (peak == 0.0) throw std::invalid_argument("nash_ratio: field must not be identically zero");
  double min_v = 0.0;
  for (double v : u.values) min_v = std::min(min_v, v);
  if (min_v < -1e-12 * peak)
    throw std::invalid_argument("nash_ratio: field must be nonnegative");
  const double n2 = lp_norm(u, 2.0);
  const double n1 = lp_norm(u, 1.0);
  auto [gx, gy] = ws.gradient(u);
  const double g2 = std::sqrt(lp_norm(gx, 2.0) * lp_norm(gx, 2.0) +
                              lp_norm(gy, 2.0) * lp_norm(gy, 2.0));
  return n2 / (std::sqrt(g2) * std::sqrt(n1));
}

double lp_norm(const field2d::Field2D& u, double p) {
  if (std::isinf(p)) return kern::max_abs(u.values);
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: need p >= 1");
  const double s = kern::sum_abs_pow(u.values, p);
  return std::pow(s * u.cell_area(), 1.0 / p);
}

}  // namespace dnp2d::analysis
