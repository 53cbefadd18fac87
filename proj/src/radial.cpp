#include "dnp2d/radial.hpp"

#include <cmath>
#include <stdexcept>

#include "dnp2d/errors.hpp"
#include "dnp2d/tridiag.hpp"

namespace dnp2d::radial {

using profile::kPi;

RadialGrid RadialGrid::uniform(int n_cells, double r_max) {
  if (n_cells < 16) throw std::invalid_argument("RadialGrid: need N >= 16");
  if (!(r_max > 0.0)) throw std::invalid_argument("RadialGrid: need r_max > 0");
  RadialGrid g;
  g.ratio = 1.0;
  g.nodes.resize(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i)
    g.nodes[i] = r_max * static_cast<double>(i) / static_cast<double>(n_cells);
  return g;
}

RadialGrid RadialGrid::geometric(int n_cells, double r_max, double ratio) {
  if (n_cells < 16) throw std::invalid_argument("RadialGrid: need N >= 16");
  if (!(r_max > 0.0)) throw std::invalid_argument("RadialGrid: need r_max > 0");
  if (!(ratio >= 1.0) || !(ratio <= 1.2))
    throw std::invalid_argument("RadialGrid: geometric ratio must lie in [1, 1.2]");
  if (ratio == 1.0) return uniform(n_cells, r_max);
  RadialGrid g;
  g.ratio = ratio;
  g.nodes.resize(n_cells + 1);
  const double h0 = r_max * (ratio - 1.0) / (std::pow(ratio, n_cells) - 1.0);
  g.nodes[0] = 0.0;
  double h = h0;
  for (int i = 1; i <= n_cells; ++i) {
    g.nodes[i] = g.nodes[i - 1] + h;
    h *= ratio;
  }
  g.nodes[n_cells] = r_max;  // kill accumulated rounding at the boundary
  return g;
}

std::string RadialGrid::describe() const {
  if (ratio == 1.0) return "uniform";
  return "geometric ratio " + std::to_string(ratio);
}

namespace {

struct DiffWeights {
  // first and second derivative 3-point weights at interior nodes
  std::vector<double> d1l, d1c, d1r, d2l, d2c, d2r;
};

DiffWeights make_weights(const std::vector<double>& r) {
  const std::size_t n = r.size();
  DiffWeights w;
  w.d1l.resize(n - 2);
  w.d1c.resize(n - 2);
  w.d1r.resize(n - 2);
  w.d2l.resize(n - 2);
  w.d2c.resize(n - 2);
  w.d2r.resize(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1];
    const double hp = r[i + 1] - r[i];
    w.d1l[i - 1] = -hp / (hm * (hm + hp));
    w.d1c[i - 1] = (hp - hm) / (hm * hp);
    w.d1r[i - 1] = hm / (hp * (hm + hp));
    w.d2l[i - 1] = 2.0 / (hm * (hm + hp));
    w.d2c[i - 1] = -2.0 / (hm * hp);
    w.d2r[i - 1] = 2.0 / (hp * (hm + hp));
  }
  return w;
}

void check_distribution(const ChargeDistribution& Qd) {
  if (Qd.grid.nodes.size() != Qd.Q.size() || Qd.Q.size() < 3)
    throw std::invalid_argument("ChargeDistribution: grid/Q size mismatch");
}

}  // namespace

ChargeDistribution init_from_density(const RadialGrid& grid, std::span<const double> u0) {
  if (u0.size() != grid.nodes.size())
    throw std::invalid_argument("init_from_density: sample count must match grid nodes");
  for (double v : u0)
    if (v < 0.0 || !std::isfinite(v))
      throw std::invalid_argument(
          "init_from_density: density must be nonnegative (positivity is a standing assumption)");
  ChargeDistribution out;
  out.grid = grid;
  out.Q.resize(u0.size());
  out.Q[0] = 0.0;
  for (std::size_t i = 1; i < u0.size(); ++i) {
    const double gm = 2.0 * kPi * grid.nodes[i - 1] * u0[i - 1];
    const double gp = 2.0 * kPi * grid.nodes[i] * u0[i];
    out.Q[i] = out.Q[i - 1] + 0.5 * (grid.nodes[i] - grid.nodes[i - 1]) * (gm + gp);
  }
  out.M_phys = out.Q.back();
  out.t = 0.0;
  return out;
}

ChargeDistribution init_from_density(const RadialGrid& grid,
                                     const std::function<double(double)>& u0) {
  std::vector<double> samples(grid.nodes.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = u0(grid.nodes[i]);
  return init_from_density(grid, samples);
}

ChargeDistribution step(const ChargeDistribution& Qd, double dt, const StepParams& params) {
  check_distribution(Qd);
  if (!(dt > 0.0)) throw std::invalid_argument("step: need dt > 0");
  const auto& r = Qd.grid.nodes;
  const std::size_t n = r.size();
  const std::size_t ni = n - 2;
  const DiffWeights w = make_weights(r);
  const double theta = params.scheme == Scheme::crank_nicolson ? 0.5 : 1.0;
  const double eps_r = 0.5 * r[1];  // regularized 1/(2 pi r) at the first interior node

  std::vector<double> lower(ni), diag(ni), upper(ni), rhs(ni), x(ni), cp, dp;
  for (std::size_t j = 0; j < ni; ++j) {
    const std::size_t i = j + 1;
    const double Ll = w.d2l[j] - w.d1l[j] / r[i];
    const double Lc = w.d2c[j] - w.d1c[j] / r[i];
    const double Lr = w.d2r[j] - w.d1r[j] / r[i];
    const double Qr = w.d1l[j] * Qd.Q[i - 1] + w.d1c[j] * Qd.Q[i] + w.d1r[j] * Qd.Q[i + 1];
    const double LQ = Ll * Qd.Q[i - 1] + Lc * Qd.Q[i] + Lr * Qd.Q[i + 1];
    double nl = 0.0;
    if (params.nonlinear) {
      const double denom = 2.0 * kPi * (r[i] + (j == 0 ? eps_r : 0.0));
      nl = -Qd.Q[i] * Qr / denom;
    }
    lower[j] = -dt * theta * Ll;
    diag[j] = 1.0 - dt * theta * Lc;
    upper[j] = -dt * theta * Lr;
    rhs[j] = Qd.Q[i] + dt * nl + dt * (1.0 - theta) * LQ;
  }
  // Dirichlet pinning folded into the boundary rows
  rhs[0] -= lower[0] * 0.0;
  rhs[ni - 1] -= upper[ni - 1] * Qd.M_phys;
  tridiag_solve(lower, diag, upper, rhs, x, cp, dp);

  ChargeDistribution out;
  out.grid = Qd.grid;
  out.t = Qd.t + dt;
  out.M_phys = Qd.M_phys;
  out.Q.resize(n);
  out.Q[0] = 0.0;
  for (std::size_t j = 0; j < ni; ++j) out.Q[j + 1] = x[j];
  out.Q[n - 1] = Qd.M_phys;

  const double mono_tol = params.mono_tol_rel * std::max(Qd.M_phys, 1e-300);
  for (std::size_t i = 1; i < n; ++i)
    if (out.Q[i] - out.Q[i - 1] < -mono_tol)
      throw step_rejected("step: monotonicity of Q lost at r = " + std::to_string(r[i]));
  return out;
}

RadialTrajectory solve(const ChargeDistribution& Q0, double t_end, std::span<const double> schedule,
                       const SolveParams& params) {
  check_distribution(Q0);
  if (!(t_end > Q0.t)) throw std::invalid_argument("solve: need t_end > Q0.t");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] <= Q0.t || schedule[i] > t_end + 1e-12)
      throw std::invalid_argument("solve: schedule times must lie in (t0, t_end]");
    if (i > 0 && schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("solve: schedule must be strictly increasing");
  }

  RadialTrajectory traj;
  ChargeDistribution cur = Q0;
  double dt = params.dt0;
  int accepted = 0;
  std::size_t si = 0;
  while (cur.t < t_end - 1e-13) {
    double dt_eff = std::min(dt, params.dt_max);
    if (si < schedule.size()) dt_eff = std::min(dt_eff, schedule[si] - cur.t);
    dt_eff = std::min(dt_eff, t_end - cur.t);
    try {
      ChargeDistribution next = step(cur, dt_eff, params.step);
      cur = std::move(next);
    } catch (const step_rejected&) {
      dt *= 0.5;
      if (dt < params.dt_min)
        throw solver_error("solve: dt underflow while enforcing monotonicity", cur.t);
      continue;
    }
    ++accepted;
    if (accepted % params.grow_every == 0) dt *= params.grow_factor;
    if (si < schedule.size() && std::abs(cur.t - schedule[si]) < 1e-12) {
      traj.snapshots.push_back(cur);
      ++si;
    }
  }
  if (traj.snapshots.empty() || traj.snapshots.back().t < cur.t - 1e-12)
    traj.snapshots.push_back(cur);
  return traj;
}

std::vector<double> density_of(const ChargeDistribution& Qd, int* clamped, double clamp_tol) {
  check_distribution(Qd);
  if (Qd.Q.size() < 5)
    throw std::invalid_argument("density_of: need at least 5 nodes for the boundary closures");
  const auto& r = Qd.grid.nodes;
  const auto& Q = Qd.Q;
  const std::size_t n = r.size();
  const DiffWeights w = make_weights(r);
  std::vector<double> u(n);
  // Q ~ alpha r^2 + beta r^3 near the origin; u(0) = alpha/pi
  {
    const double r1 = r[1], r2 = r[2];
    const double alpha = (Q[1] * r2 * r2 * r2 - Q[2] * r1 * r1 * r1) /
                         (r1 * r1 * r2 * r2 * (r2 - r1));
    u[0] = alpha / kPi;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double Qr = w.d1l[i - 1] * Q[i - 1] + w.d1c[i - 1] * Q[i] + w.d1r[i - 1] * Q[i + 1];
    u[i] = Qr / (2.0 * kPi * r[i]);
  }
  {
    // Conservative closure at r_max: the last-node derivative is chosen so
    // that the cumulative trapezoid of 2 pi r u telescopes back to Q exactly
    // (up to the O(r_1^2) first-cell term).  On a uniform grid this reduces
    // to the backward difference.
    const double h1 = r[n - 1] - r[n - 2];   // h_N
    const double h2 = r[n - 2] - r[n - 3];   // h_{N-1}
    const double h3 = r[n - 3] - r[n - 4];   // h_{N-2}
    const double h4 = r[n - 4] - r[n - 5];   // h_{N-3}
    const double S2 = h4 / (2.0 * h3) + (h2 - h3) * (h3 + h2) / (2.0 * h3 * h2) - h1 / (2.0 * h2);
    const double S1 = h3 / (2.0 * h2) + (h1 - h2) * (h2 + h1) / (2.0 * h2 * h1);
    const double S0 = h2 / (2.0 * h1);
    const double Qr =
        (-2.0 * S2 * Q[n - 3] - 2.0 * S1 * Q[n - 2] + 2.0 * (1.0 - S0) * Q[n - 1]) / h1;
    u[n - 1] = Qr / (2.0 * kPi * r[n - 1]);
  }
  int nclamp = 0;
  for (double& v : u) {
    if (v < 0.0) {
      if (v < -clamp_tol) ++nclamp;
      v = 0.0;
    }
  }
  if (clamped) *clamped = nclamp;
  return u;
}

double lp_norm_radial(const RadialGrid& grid, std::span<const double> u, double p) {
  if (u.size() != grid.nodes.size())
    throw std::invalid_argument("lp_norm_radial: sample count must match grid nodes");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_radial: need p >= 1");
  double acc = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double gm = 2.0 * kPi * grid.nodes[i - 1] * std::pow(std::abs(u[i - 1]), p);
    const double gp = 2.0 * kPi * grid.nodes[i] * std::pow(std::abs(u[i]), p);
    acc += 0.5 * (grid.nodes[i] - grid.nodes[i - 1]) * (gm + gp);
  }
  return std::pow(acc, 1.0 / p);
}

std::vector<std::pair<double, double>> convergence_diagnostic(
    const RadialTrajectory& traj, const profile::SelfSimilarProfile& p) {
  if (traj.snapshots.empty())
    throw std::invalid_argument("convergence_diagnostic: empty trajectory");
  const double M_traj = traj.snapshots.front().M_phys;
  const double M_prof = p.mass_phys();
  if (std::abs(M_traj - M_prof) > 1e-6 * std::max(std::abs(M_prof), 1e-300))
    throw std::invalid_argument(
        "convergence_diagnostic: trajectory and profile masses differ beyond 1e-6 relative");
  std::vector<std::pair<double, double>> series;
  series.reserve(traj.snapshots.size());
  std::vector<double> diff;
  for (const auto& snap : traj.snapshots) {
    const std::vector<double> u = density_of(snap);
    diff.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      diff[i] = u[i] - profile::self_similar_density(p, snap.grid.nodes[i], snap.t);
    const double norm = lp_norm_radial(snap.grid, diff, 4.0 / 3.0);
    series.emplace_back(snap.t, std::pow(snap.t, 0.25) * norm);
  }
  return series;
}

}  // namespace dnp2d::radial
