#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dnp2d/errors.hpp"
#include "dnp2d/profile.hpp"
#include "dnp2d/radial.hpp"

using namespace dnp2d;
using namespace dnp2d::radial;
using profile::kPi;

namespace {

ChargeDistribution gaussian_init(const RadialGrid& g, double mass, double sigma) {
  return init_from_density(g, [&](double r) {
    return mass / (2.0 * kPi * sigma * sigma) * std::exp(-r * r / (2.0 * sigma * sigma));
  });
}

}  // namespace

TEST_CASE("grids are strictly increasing and pinned") {
  const auto g = RadialGrid::geometric(128, 20.0, 1.05);
  CHECK(g.nodes.front() == 0.0);
  CHECK(g.nodes.back() == 20.0);
  for (std::size_t i = 1; i < g.nodes.size(); ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  CHECK_THROWS_AS(RadialGrid::geometric(8, 20.0, 1.05), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid::geometric(64, 20.0, 1.5), std::invalid_argument);
}

TEST_CASE("init_from_density: zero, Gaussian, and self-similar data") {
  const auto g = RadialGrid::geometric(256, 20.0, 1.02);

  const auto zero = init_from_density(g, [](double) { return 0.0; });
  CHECK(zero.M_phys == 0.0);
  for (double q : zero.Q) CHECK(q == 0.0);

  // closed-form radial integral of the unit Gaussian: Q(r) = 1 - e^{-r^2/2}
  const auto gauss = gaussian_init(g, 1.0, 1.0);
  CHECK(gauss.M_phys == doctest::Approx(1.0).epsilon(1e-4));
  for (std::size_t i = 0; i < g.nodes.size(); i += 16) {
    const double r = g.nodes[i];
    CHECK(gauss.Q[i] == doctest::Approx(1.0 - std::exp(-r * r / 2.0)).epsilon(5e-4));
  }

  // definition chain: u from a profile at t = 1 has Q(r)/(2 pi) = xi(r^2)
  const auto p = profile::integrate_profile({0.1}, 200.0, 1e-10);
  const auto Qp = init_from_density(
      g, [&](double r) { return profile::self_similar_density(p, r, 1.0); });
  for (std::size_t i = 8; i < g.nodes.size(); i += 32) {
    const double r = g.nodes[i];
    CHECK(Qp.Q[i] / (2.0 * kPi) == doctest::Approx(p.xi_at(r * r)).epsilon(2e-4));
  }

  CHECK_THROWS_AS(init_from_density(g, [](double) { return -1e-3; }), std::invalid_argument);
}

TEST_CASE("zero charge is a fixed point of step") {
  const auto g = RadialGrid::geometric(64, 10.0, 1.05);
  auto Q0 = init_from_density(g, [](double) { return 0.0; });
  const auto Q1 = step(Q0, 1e-2, StepParams{});
  for (double q : Q1.Q) CHECK(q == 0.0);
}

TEST_CASE("linear-only evolution follows the integrated heat closed form") {
  // With the transport term disabled the equation is the integrated 2D heat
  // equation; Gaussian data evolve as Q = M(1 - e^{-r^2/(2 s^2 + 4t)}).
  const auto g = RadialGrid::geometric(512, 30.0, 1.005);
  auto Q0 = gaussian_init(g, 1.0, 1.0);
  SolveParams sp;
  sp.step.nonlinear = false;
  sp.step.scheme = Scheme::crank_nicolson;
  sp.dt0 = 1e-5;
  sp.dt_max = 5e-3;
  const auto traj = solve(Q0, 1.0, {}, sp);
  const auto& Q1 = traj.snapshots.back();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double r = g.nodes[i];
    const double exact = Q0.M_phys * (1.0 - std::exp(-r * r / (2.0 + 4.0)));
    worst = std::max(worst, std::abs(Q1.Q[i] - exact));
  }
  CHECK(worst < 2e-3);  // second-order grid error at this resolution
}

TEST_CASE("small-mass run stays monotone and inside [0, M]") {
  const auto g = RadialGrid::geometric(128, 20.0, 1.05);
  auto Q0 = gaussian_init(g, 0.1, 1.0);
  SolveParams sp;
  sp.dt0 = 1e-4;
  sp.dt_max = 1e-3;
  const auto traj = solve(Q0, 1.0, {}, sp);  // ~1000 accepted steps at the cap
  for (const auto& snap : traj.snapshots) {
    CHECK(snap.Q.front() == 0.0);
    CHECK(snap.Q.back() == snap.M_phys);
    for (std::size_t i = 1; i < snap.Q.size(); ++i) {
      CHECK(snap.Q[i] >= -1e-12);
      CHECK(snap.Q[i] <= snap.M_phys * (1.0 + 1e-12));
      CHECK(snap.Q[i] - snap.Q[i - 1] >= -1e-9 * snap.M_phys);
    }
  }
}

TEST_CASE("interior mass drift below 1e-6 of the charge") {
  // needs a tiny first cell: the quadrature/derivative pair leaves an
  // irreducible Q(r_1)/(2 rho) term
  const auto g = RadialGrid::geometric(512, 60.0, 1.02);
  auto Q0 = gaussian_init(g, 0.1, 1.0);
  SolveParams sp;
  sp.dt0 = 1e-4;
  sp.dt_max = 0.5;
  const auto traj = solve(Q0, 100.0, {}, sp);
  const auto u = density_of(traj.snapshots.back());
  const auto re = init_from_density(g, u);
  CHECK(std::abs(re.M_phys - Q0.M_phys) < 1e-6 * Q0.M_phys);
}

TEST_CASE("density_of differentiates the closed form") {
  const auto g = RadialGrid::geometric(256, 10.0, 1.02);
  const double M = 0.7;
  ChargeDistribution Qd;
  Qd.grid = g;
  Qd.Q.resize(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    Qd.Q[i] = M * (1.0 - std::exp(-g.nodes[i] * g.nodes[i]));
  Qd.M_phys = Qd.Q.back();
  const auto u = density_of(Qd);
  for (std::size_t i = 0; i < g.nodes.size(); i += 8) {
    const double r = g.nodes[i];
    const double exact = M / kPi * std::exp(-r * r);
    CHECK(u[i] == doctest::Approx(exact).epsilon(5e-4));
  }

  // zero in, zero out
  ChargeDistribution z;
  z.grid = g;
  z.Q.assign(g.nodes.size(), 0.0);
  for (double v : density_of(z)) CHECK(v == 0.0);
}

TEST_CASE("density/charge round trip is second-order consistent") {
  const auto g = RadialGrid::geometric(256, 20.0, 1.02);
  const auto Q = gaussian_init(g, 1.0, 1.5);
  const auto u = density_of(Q);
  const auto back = init_from_density(g, u);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    worst = std::max(worst, std::abs(back.Q[i] - Q.Q[i]));
  CHECK(worst < 5e-5);
}

TEST_CASE("lp_norm_radial closed forms") {
  const auto g = RadialGrid::geometric(512, 12.0, 1.01);
  std::vector<double> u(g.nodes.size());
  const double M = 2.5;
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = M / kPi * std::exp(-g.nodes[i] * g.nodes[i]);
  CHECK(lp_norm_radial(g, u, 1.0) == doctest::Approx(M).epsilon(1e-6));
  for (auto& v : u) v /= M;  // u = (1/pi) e^{-r^2}: ||u||_2 = (2 pi)^{-1/2}
  CHECK(lp_norm_radial(g, u, 2.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-6));
  std::vector<double> zero(g.nodes.size(), 0.0);
  CHECK(lp_norm_radial(g, zero, 1.0) == 0.0);
  CHECK(lp_norm_radial(g, zero, 4.0 / 3.0) == 0.0);
  CHECK(lp_norm_radial(g, zero, std::numeric_limits<double>::infinity()) == 0.0);
  CHECK_THROWS_AS(lp_norm_radial(g, u, 0.5), std::invalid_argument);
}

TEST_CASE("self-similar initial data track xi(r^2/t)") {
  const auto p = profile::profile_for_mass(0.1, 1e-8);
  const auto g = RadialGrid::geometric(512, 20.0, 1.005);
  auto Q0 = init_from_density(
      g, [&](double r) { return profile::self_similar_density(p, r, 1.0); });
  Q0.t = 1.0;
  SolveParams sp;
  sp.step.scheme = Scheme::crank_nicolson;
  sp.dt0 = 1e-5;
  sp.dt_max = 0.02;
  const std::vector<double> sched{2.0, 5.0, 10.0};
  const auto traj = solve(Q0, 10.0, sched, sp);
  for (const auto& snap : traj.snapshots) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double y = g.nodes[i] * g.nodes[i] / snap.t;
      worst = std::max(worst, std::abs(snap.Q[i] / (2.0 * kPi) - p.xi_at(y)));
    }
    // discretization-floor bound measured at this resolution (m ~ 0.0159)
    CHECK(worst < 2e-6);
  }
}

TEST_CASE("grid refinement reduces the consistency error by about 4x") {
  const auto p = profile::profile_for_mass(0.1, 1e-8);
  auto consistency_error = [&](int n, double ratio, double dt_cap) {
    const auto g = RadialGrid::geometric(n, 20.0, ratio);
    auto Q0 = init_from_density(
        g, [&](double r) { return profile::self_similar_density(p, r, 1.0); });
    Q0.t = 1.0;
    SolveParams sp;
    sp.step.scheme = Scheme::crank_nicolson;
    sp.dt0 = 1e-5;
    sp.dt_max = dt_cap;
    const auto traj = solve(Q0, 2.0, {}, sp);
    const auto& snap = traj.snapshots.back();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double y = g.nodes[i] * g.nodes[i] / snap.t;
      worst = std::max(worst, std::abs(snap.Q[i] / (2.0 * kPi) - p.xi_at(y)));
    }
    return worst;
  };
  const double coarse = consistency_error(256, 1.01, 4e-3);
  const double fine = consistency_error(512, std::sqrt(1.01), 2e-3);
  CHECK(coarse / fine > 2.5);
  CHECK(coarse / fine < 8.0);
}

TEST_CASE("solve: empty schedule yields only the final state") {
  const auto g = RadialGrid::geometric(64, 10.0, 1.05);
  auto Q0 = gaussian_init(g, 0.05, 1.0);
  SolveParams sp;
  const auto traj = solve(Q0, 0.5, {}, sp);
  CHECK(traj.snapshots.size() == 1);
  CHECK(traj.snapshots.back().t == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("solve validates the schedule") {
  const auto g = RadialGrid::geometric(64, 10.0, 1.05);
  auto Q0 = gaussian_init(g, 0.05, 1.0);
  SolveParams sp;
  const std::vector<double> bad1{-0.1, 0.2};
  CHECK_THROWS_AS(solve(Q0, 0.5, bad1, sp), std::invalid_argument);
  const std::vector<double> bad2{0.3, 0.2};
  CHECK_THROWS_AS(solve(Q0, 0.5, bad2, sp), std::invalid_argument);
}

TEST_CASE("violent explicit steps are rejected, gentle ones accepted") {
  // CFL-violating transport with strong charge: the explicit term overshoots
  // and breaks monotonicity, which must surface as step_rejected.
  const auto g = RadialGrid::geometric(64, 10.0, 1.05);
  auto Q0 = gaussian_init(g, 200.0, 0.5);
  bool rejected = false;
  try {
    auto Q1 = step(Q0, 5.0, StepParams{});
    auto Q2 = step(Q1, 5.0, StepParams{});
    (void)Q2;
  } catch (const step_rejected&) {
    rejected = true;
  }
  CHECK(rejected);
  CHECK_NOTHROW(step(Q0, 1e-6, StepParams{}));
}

TEST_CASE("convergence diagnostic demands matching masses") {
  const auto p = profile::profile_for_mass(0.1, 1e-8);
  const auto g = RadialGrid::geometric(128, 20.0, 1.03);
  auto Q0 = gaussian_init(g, 0.2, 1.0);  // mass 2x the profile's
  Q0.t = 1.0;
  RadialTrajectory traj;
  traj.snapshots.push_back(Q0);
  CHECK_THROWS_AS(convergence_diagnostic(traj, p), std::invalid_argument);
}

TEST_CASE("diagnostic starts at the discretization floor for matched data") {
  const auto p = profile::profile_for_mass(0.1, 1e-8);
  const auto g = RadialGrid::geometric(512, 40.0, 1.005);
  std::vector<double> u0(g.nodes.size());
  for (std::size_t i = 0; i < u0.size(); ++i)
    u0[i] = profile::self_similar_density(p, g.nodes[i], 1.0);
  auto Q0 = init_from_density(g, u0);
  const double rescale = p.mass_phys() / Q0.M_phys;
  for (auto& v : u0) v *= rescale;
  Q0 = init_from_density(g, u0);
  Q0.t = 1.0;
  RadialTrajectory traj;
  traj.snapshots.push_back(Q0);
  const auto series = convergence_diagnostic(traj, p);
  CHECK(series.size() == 1);
  CHECK(series.front().second < 5e-5);  // pure interpolation/differentiation floor
}
