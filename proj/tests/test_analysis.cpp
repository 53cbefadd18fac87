#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dnp2d/analysis.hpp"
#include "dnp2d/field2d.hpp"

using namespace dnp2d;
using namespace dnp2d::analysis;
using field2d::Field2D;
using field2d::SpectralWorkspace;
using field2d::gaussian_field;
using profile::kPi;

namespace {
std::vector<std::pair<double, double>> power_series(double c, double expo, int n, double lo,
                                                    double hi) {
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i < n; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    s.emplace_back(t, c * std::pow(t, expo));
  }
  return s;
}
}  // namespace

TEST_CASE("decay_fit recovers exact power laws") {
  const auto s = power_series(2.0, -0.5, 40, 1.0, 100.0);
  const auto fit = decay_fit(s, 1.0, 100.0);
  CHECK(fit.exponent == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.residual_rms < 1e-12);
  CHECK(fit.points == 40);
}

TEST_CASE("decay_fit tolerates a small multiplicative wobble") {
  // value = 3 t^{-0.75} (1 + 0.01 sin log t) over two decades
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i < 50; ++i) {
    const double t = std::pow(10.0, 2.0 * i / 49.0);
    s.emplace_back(t, 3.0 * std::pow(t, -0.75) * (1.0 + 0.01 * std::sin(std::log(t))));
  }
  const auto fit = decay_fit(s, 1.0, 100.0);
  CHECK(std::abs(fit.exponent + 0.75) <= 0.01);
}

TEST_CASE("decay_fit input validation") {
  auto s = power_series(1.0, -1.0, 10, 1.0, 10.0);
  CHECK_THROWS_AS(decay_fit(s, 5.0, 6.0), std::invalid_argument);  // < 5 points
  s[3].second = 0.0;
  CHECK_THROWS_AS(decay_fit(s, 1.0, 10.0), std::invalid_argument);  // nonpositive value
}

TEST_CASE("moser constants: explicit small cases") {
  const auto mc = moser_constants(2.0, 4);
  CHECK(mc.a(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mc.a(2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mc.a(3) == doctest::Approx(16.0).epsilon(1e-13));
  // closed-form cross-check at k = 3: a_3 = C^7 2^{w_3} = 2^7 2^{-3}
  CHECK(mc.a(3) == doctest::Approx(std::pow(2.0, 7) * std::pow(2.0, -3)).epsilon(1e-13));
  CHECK(mc.w[0] == -1);
  CHECK(mc.w[1] == -2);
  CHECK(mc.w[2] == -3);
  CHECK(mc.w[3] == -4);
}

TEST_CASE("moser closed-form identity holds in log space for random C") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uc(0.5, 10.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double C = uc(rng);
    const auto mc = moser_constants(C, 35);
    for (int k = 1; k <= 35; ++k) {
      const double lhs = mc.log_a[k - 1];
      const double rhs = mc.closed_form_log_a(k);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      CHECK(mc.w[k - 1] < 0);
    }
  }
}

TEST_CASE("moser roots converge to C from below") {
  for (double C : {0.7, 1.0, 3.0}) {
    const auto mc = moser_constants(C, 30);
    for (int k = 1; k <= 30; ++k) CHECK(mc.roots[k - 1] <= C * (1.0 + 1e-12));
    CHECK(std::abs(mc.roots[29] - mc.roots[28]) < 1e-3);
    CHECK(std::abs(mc.roots[29] - C) < 1e-6 * C);
  }
  CHECK_THROWS_AS(moser_constants(-1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(moser_constants(1.0, 50), std::invalid_argument);
}

TEST_CASE("nash ratio of the unit Gaussian is (4 pi)^{-1/4}") {
  // u = e^{-|x|^2}: ||u||_2^2 = pi/2, ||u||_1 = pi, ||grad u||_2^2 = pi, so
  // ratio = (pi/2)^{1/2}/(pi^{1/4} pi^{1/2}) = (4 pi)^{-1/4} = 0.531126
  SpectralWorkspace ws(128, 12.0);
  const auto g = gaussian_field(128, 12.0, kPi, std::sqrt(0.5));
  CHECK(analysis::nash_ratio(ws, g) == doctest::Approx(std::pow(4.0 * kPi, -0.25)).epsilon(1e-6));
}

TEST_CASE("nash ratio is invariant under dilation and scalar multiples") {
  SpectralWorkspace ws(64, 10.0);
  const auto u = field2d::random_band_limited_field(64, 10.0, 5, 808u);
  const double r0 = nash_ratio(ws, u);

  SpectralWorkspace ws_half(64, 5.0);
  Field2D u_half{64, 5.0, 0.0, u.values};
  CHECK(nash_ratio(ws_half, u_half) == doctest::Approx(r0).epsilon(1e-12));

  Field2D scaled = u;
  for (auto& v : scaled.values) v *= 7.25;
  CHECK(nash_ratio(ws, scaled) == doctest::Approx(r0).epsilon(1e-12));
}

TEST_CASE("nash ratio input validation") {
  SpectralWorkspace ws(64, 10.0);
  const auto z = field2d::make_field(64, 10.0);
  CHECK_THROWS_AS(nash_ratio(ws, z), std::invalid_argument);
  auto neg = field2d::gaussian_field(64, 10.0, 1.0, 1.0);
  neg.values[5] = -1.0;
  CHECK_THROWS_AS(nash_ratio(ws, neg), std::invalid_argument);
}

TEST_CASE("2D lp_norm closed forms") {
  const auto z = field2d::make_field(64, 10.0);
  CHECK(lp_norm(z, 1.0) == 0.0);
  CHECK(lp_norm(z, 2.0) == 0.0);

  const double M = 0.4, sigma = 1.1;
  const auto g = gaussian_field(256, 30.0, M, sigma);
  CHECK(lp_norm(g, 1.0) == doctest::Approx(M).epsilon(1e-10));
  // ||M G||_{4/3} with G of variance 2t = sigma^2
  const double t = sigma * sigma / 2.0;
  const double closed = M * std::pow(4.0 * kPi * t, -0.25) * std::pow(0.75, 0.75);
  CHECK(lp_norm(g, 4.0 / 3.0) == doctest::Approx(closed).epsilon(1e-8));
  CHECK_THROWS_AS(lp_norm(g, 0.9), std::invalid_argument);
}
