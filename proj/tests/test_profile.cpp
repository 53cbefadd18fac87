#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dnp2d/errors.hpp"
#include "dnp2d/profile.hpp"

using namespace dnp2d;
using namespace dnp2d::profile;

TEST_CASE("mass_to_shoot evaluates m/(2m+4)") {
  // m = 4 (M_phys = 8 pi) -> a = 1/3
  CHECK(mass_to_shoot(8.0 * kPi).a == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // zero-mass limit
  CHECK(mass_to_shoot(1e-12).a == doctest::Approx(1e-12 / (2.0 * kPi) / 4.0).epsilon(1e-9));
  // saturation: a < 1/2 even for enormous mass
  const double a_big = mass_to_shoot(2.0 * kPi * 1e12).a;
  CHECK(a_big < 0.5);
  CHECK(a_big == doctest::Approx(0.4999999999995).epsilon(1e-12));

  CHECK_THROWS_AS(mass_to_shoot(0.0), std::invalid_argument);
  CHECK_THROWS_AS(mass_to_shoot(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(mass_to_shoot(std::nan("")), std::invalid_argument);
}

TEST_CASE("shoot_to_mass evaluates 4a/(1-2a)") {
  CHECK(shoot_to_mass({1.0 / 3.0}).m == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(shoot_to_mass({0.0}).m == 0.0);
  CHECK(shoot_to_mass({0.25}).m == doctest::Approx(4.0 * 0.25 / 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(shoot_to_mass({0.5}), std::invalid_argument);
  CHECK_THROWS_AS(shoot_to_mass({-0.1}), std::invalid_argument);
}

TEST_CASE("mass<->shoot round trip over six decades") {
  for (double M = 1e-3; M < 1.1e3; M *= 10.0) {
    const auto a = mass_to_shoot(M);
    CHECK(shoot_to_mass(a).M_phys == doctest::Approx(M).epsilon(1e-12));
  }
}

TEST_CASE("ode_rhs handles the y = 0 limit branch") {
  // xi''(0) = (a/2)(a - 1/2)
  CHECK(ode_rhs(0.0, 0.0, 1.0 / 3.0, 0.0) == doctest::Approx(-1.0 / 36.0).epsilon(1e-14));
  CHECK(ode_rhs(0.0, 0.0, 0.5, 0.0) == 0.0);
  // direct substitution: -0.25*0.2 + 0.5*0.2/4
  CHECK(ode_rhs(2.0, 0.5, 0.2, 0.0) == doctest::Approx(-0.025).epsilon(1e-14));
  CHECK_THROWS_AS(ode_rhs(0.0, 0.5, 0.2, 0.0), std::domain_error);
}

TEST_CASE("integrate_profile reproduces the independently computed mass") {
  // Reference value cross-checked with three independent adaptive integrators
  // (spread below 1e-11).  The closed form 4a/(1-2a) = 0.5 is an upper bound
  // only; the small-a expansion of the true mass is 4a + 8 ln2 a^2 + O(a^3).
  const auto p = integrate_profile({0.1}, 200.0, 1e-10);
  CHECK(p.m_tail() == doctest::Approx(0.465816708628).epsilon(2e-9));
  CHECK(p.m_tail() > 4.0 * 0.1);
  CHECK(p.m_tail() < 4.0 * 0.1 / (1.0 - 0.2));
}

TEST_CASE("tiny-a profile matches the linear closed form") {
  // Oracle: the a -> 0 linearization xi'' + xi'/4 = 0 with the same data has
  // the solution 4a(1 - e^{-y/4}).  The leading nonlinear correction is
  // relatively 2 ln2 a (= 1.39e-6 at a = 1e-6), so the spec's 1e-6 target is
  // attainable only up to that constant; assert 1.5e-6.
  const double a = 1e-6;
  const auto p = integrate_profile({a}, 50.0, 1e-12);
  double worst = 0.0;
  for (std::size_t i = 1; i < p.y_grid().size(); ++i) {
    const double lin = 4.0 * a * (1.0 - std::exp(-0.25 * p.y_grid()[i]));
    worst = std::max(worst, std::abs(p.xi()[i] - lin) / lin);
  }
  CHECK(worst < 1.5e-6);
  const double predicted = 2.0 * std::log(2.0) * a;
  CHECK(worst == doctest::Approx(predicted).epsilon(0.15));
}

TEST_CASE("bounded-branch invariants hold node-wise") {
  const double a = 0.3;
  const auto p = integrate_profile({a}, 100.0, 1e-10);
  for (std::size_t i = 1; i < p.y_grid().size(); ++i) {
    const double y = p.y_grid()[i];
    const double xp = p.xi_prime()[i];
    const double xpp = ode_rhs(y, p.xi()[i], xp, 0.0);
    CHECK(xp > 0.0);
    CHECK(xp < a + 1e-12);
    CHECK(xpp < 1e-12);
    CHECK(xpp > -0.125);
    CHECK(p.xi()[i] > 0.0);
    CHECK(p.xi()[i] < a * y + 1e-12);
  }
  // strictly increasing and concave on the grid
  for (std::size_t i = 1; i < p.y_grid().size(); ++i) {
    CHECK(p.xi()[i] > p.xi()[i - 1]);
    CHECK(p.xi_prime()[i] < p.xi_prime()[i - 1]);
  }
}

TEST_CASE("invariants hold for random shooting parameters") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> ua(0.02, 0.48);
  for (int trial = 0; trial < 12; ++trial) {
    const double a = ua(rng);
    const auto p = integrate_profile({a}, 80.0, 1e-9);
    const double A = 4.0 * a / (1.0 - 2.0 * a);
    for (std::size_t i = 1; i < p.y_grid().size(); ++i) {
      const double y = p.y_grid()[i];
      CHECK(p.xi_prime()[i] > -1e-9);
      CHECK(p.xi_prime()[i] < a + 1e-9);
      CHECK(p.xi()[i] <= A * (1.0 - std::exp((a - 0.5) * y / 2.0)) + 1e-8 * std::max(1.0, A));
    }
  }
}

TEST_CASE("a > 1/2 keeps the slope above 1/2 (finite-range demonstration)") {
  const auto p = integrate_profile({0.6}, 50.0, 1e-10);
  CHECK(p.y_grid().back() == doctest::Approx(50.0));
  CHECK(!p.bounded());
  double min_slope = 1e300;
  for (double xp : p.xi_prime()) min_slope = std::min(min_slope, xp);
  CHECK(min_slope > 0.5);
}

TEST_CASE("regularized profiles converge to the eps = 0 profile") {
  const double a = 0.15, y_max = 40.0;
  const auto base = integrate_profile({a}, y_max, 1e-10);
  double prev = 1e300;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const auto pe = integrate_profile({a}, y_max, 1e-10, eps);
    double gap = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double y = y_max * i / 500.0;
      gap = std::max(gap, std::abs(pe.xi_at(y) - base.xi_at(y)));
    }
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("integrate_profile rejects bad arguments") {
  CHECK_THROWS_AS(integrate_profile({0.0}, 10.0, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(integrate_profile({-0.2}, 10.0, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(integrate_profile({0.2}, -1.0, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(integrate_profile({0.2}, 10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_profile({0.2}, 10.0, 1e-8, -1e-3), std::invalid_argument);
}

TEST_CASE("picard iteration agrees with direct integration") {
  const auto pic = picard_solve({0.1}, 1.0, 1e-9, 100);
  const auto rk = integrate_profile({0.1}, 1.0, 1e-12);
  double sup = 0.0;
  for (std::size_t i = 0; i < pic.y_grid().size(); ++i)
    sup = std::max(sup, std::abs(pic.xi()[i] - rk.xi_at(pic.y_grid()[i])));
  CHECK(sup < 1e-8);  // spec property: < 10x the iteration tolerance
}

TEST_CASE("picard fixed point for a = 0 is identically zero") {
  const auto p = picard_solve({0.0}, 1.0, 1e-10, 10);
  for (double v : p.xi()) CHECK(v == 0.0);
  for (double v : p.xi_prime()) CHECK(v == 0.0);
}

TEST_CASE("picard operator preserves the initial data") {
  const auto p = picard_solve({0.2}, 0.5, 1e-10, 100);
  CHECK(p.xi()[0] == 0.0);
  CHECK(p.xi_prime()[0] == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("profile_for_mass calibrates to the requested mass") {
  // Reference calibrated slopes from an independent root solve over the
  // Radau-integrated mass map: a*(m=4) = 0.390065743004, a*(m=1) = 0.183787166147.
  const auto p8pi = profile_for_mass(8.0 * kPi, 1e-8);
  CHECK(p8pi.m_tail() == doctest::Approx(4.0).epsilon(1e-7));
  CHECK(p8pi.a() == doctest::Approx(0.390065743004).epsilon(1e-6));
  CHECK(p8pi.a() > mass_to_shoot(8.0 * kPi).a);  // the closed form undershoots

  const auto p2pi = profile_for_mass(2.0 * kPi, 1e-8);
  CHECK(p2pi.m_tail() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(p2pi.a() == doctest::Approx(0.183787166147).epsilon(1e-6));

  const auto loose = profile_for_mass(0.5, 1e-3);
  CHECK(std::abs(loose.mass_phys() - 0.5) <= 1e-3 * 0.5);

  CHECK_THROWS_AS(profile_for_mass(-1.0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(profile_for_mass(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("self_similar_density evaluates (2/t) xi'(r^2/t)") {
  const auto p = integrate_profile({0.2}, 120.0, 1e-10);
  // r = 0: u = 2a/t
  CHECK(self_similar_density(p, 0.0, 1.0) == doctest::Approx(2.0 * 0.2).epsilon(1e-10));
  CHECK(self_similar_density(p, 0.0, 4.0) == doctest::Approx(0.1).epsilon(1e-10));
  // scaling u(l r, l^2 t) = l^-2 u(r, t), exact because y is invariant
  const double l = 2.0;
  for (double r : {0.5, 1.0, 3.0}) {
    const double lhs = self_similar_density(p, l * r, l * l * 1.7);
    const double rhs = self_similar_density(p, r, 1.7) / (l * l);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
  CHECK_THROWS_AS(self_similar_density(p, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(self_similar_density(p, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("density integrates back to the physical mass") {
  const auto p = integrate_profile({0.1}, 200.0, 1e-10);
  const double t = 2.0;
  // 2 pi int u(r,t) r dr telescopes to 2 pi xi(inf): trapezoid oracle
  const int n = 20000;
  const double r_max = std::sqrt(200.0 * t);
  double acc = 0.0, prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double r = r_max * i / n;
    const double g = 2.0 * kPi * r * self_similar_density(p, r, t);
    acc += 0.5 * (g + prev) * (r_max / n);
    prev = g;
  }
  CHECK(acc == doctest::Approx(p.mass_phys()).epsilon(1e-6));
}

TEST_CASE("integrate_profile reports the violation location on failure") {
  // The non-bounded branch flags a slope dropping to 1/2 as failure; feed a
  // value marginally above 1/2 so the invariant check must engage quickly.
  try {
    const auto p = integrate_profile({0.5000001}, 400.0, 1e-8);
    // If it survives the whole range the slope stayed above 1/2; also fine.
    CHECK(p.xi_prime().back() > 0.5);
  } catch (const solver_error& e) {
    CHECK(e.location() >= 0.0);
  }
}
