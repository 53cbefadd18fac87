#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dnp2d/profile.hpp"

namespace dnp2d::radial {

// Graded radial grid r_0 = 0 < r_1 < ... < r_N = r_max.  Geometric grading
// concentrates nodes near the origin where the integrated density curves most.
struct RadialGrid {
  std::vector<double> nodes;
  double ratio = 1.0;  // 1 = uniform

  static RadialGrid uniform(int n_cells, double r_max);
  static RadialGrid geometric(int n_cells, double r_max, double ratio);

  int cells() const { return static_cast<int>(nodes.size()) - 1; }
  double r_max() const { return nodes.back(); }
  std::string describe() const;
};

// Cumulative charge Q(r) = mass inside the ball of radius r, pinned to
// Q(0) = 0 and Q(r_max) = M_phys.
struct ChargeDistribution {
  RadialGrid grid;
  std::vector<double> Q;
  double t = 0.0;
  double M_phys = 0.0;
};

struct RadialTrajectory {
  std::vector<ChargeDistribution> snapshots;
  std::uint64_t config_hash = 0;
};

enum class Scheme { imex1, crank_nicolson };

struct StepParams {
  Scheme scheme = Scheme::imex1;
  bool nonlinear = true;
  double mono_tol_rel = 1e-9;  // allowed relative monotonicity defect of Q
};

struct SolveParams {
  StepParams step;
  double dt0 = 1e-5;
  double dt_max = 0.5;
  double dt_min = 1e-13;
  double grow_factor = 1.2;
  int grow_every = 20;
};

// Q by cumulative trapezoid of 2*pi*s*u0(s); M_phys = Q(r_max).  Negative
// density samples are rejected (nonnegativity is a standing assumption).
ChargeDistribution init_from_density(const RadialGrid& grid, std::span<const double> u0);
ChargeDistribution init_from_density(const RadialGrid& grid,
                                     const std::function<double(double)>& u0);

// One IMEX step: diffusion Q_rr - Q_r/r implicit (tridiagonal), transport
// -Q Q_r/(2 pi r) explicit, boundaries pinned.  Throws step_rejected when the
// step destroys monotonicity of Q beyond tolerance.
ChargeDistribution step(const ChargeDistribution& Qd, double dt, const StepParams& params);

// Drives step() with halving on rejection and snapshot landing; deterministic
// for a given configuration.
RadialTrajectory solve(const ChargeDistribution& Q0, double t_end, std::span<const double> schedule,
                       const SolveParams& params);

// u = Q_r/(2 pi r); u(0) from the one-sided limit Q ~ pi u(0) r^2.  Values
// below -clamp_tol are clamped to zero and counted.
std::vector<double> density_of(const ChargeDistribution& Qd, int* clamped = nullptr,
                               double clamp_tol = 1e-12);

// (int |u|^p 2 pi r dr)^{1/p} by trapezoid on the graded grid; p = inf gives
// the max of the samples.
double lp_norm_radial(const RadialGrid& grid, std::span<const double> u, double p);

// t^{1/4} ||u(.,t) - U_m(.,t)||_{4/3} per snapshot.  The trajectory and the
// profile must agree on the physical mass to 1e-6 relative.
std::vector<std::pair<double, double>> convergence_diagnostic(
    const RadialTrajectory& traj, const profile::SelfSimilarProfile& p);

}  // namespace dnp2d::radial
