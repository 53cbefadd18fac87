#include "dnp2d/runner.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "dnp2d/analysis.hpp"
#include "dnp2d/field2d.hpp"
#include "dnp2d/profile.hpp"
#include "dnp2d/radial.hpp"

namespace dnp2d::runner {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

radial::SolveParams radial_params(const config::RadialCfg& rc) {
  radial::SolveParams sp;
  sp.step.scheme = rc.scheme == "cn" ? radial::Scheme::crank_nicolson : radial::Scheme::imex1;
  sp.step.nonlinear = rc.nonlinear;
  sp.step.mono_tol_rel = rc.mono_tol;
  sp.dt0 = rc.dt0;
  sp.dt_max = rc.dt_max;
  return sp;
}

// initial charge distribution for a radial run
radial::ChargeDistribution radial_init(const config::SimConfig& cfg,
                                       const radial::RadialGrid& grid) {
  const auto& init = cfg.init;
  radial::ChargeDistribution Q0;
  if (init.type == "gaussian") {
    const double s2 = init.sigma * init.sigma;
    Q0 = radial::init_from_density(grid, [&](double r) {
      return init.mass / (2.0 * profile::kPi * s2) * std::exp(-r * r / (2.0 * s2));
    });
  } else if (init.type == "self_similar") {
    const auto p = profile::profile_for_mass(init.mass, 1e-8);
    Q0 = radial::init_from_density(
        grid, [&](double r) { return profile::self_similar_density(p, r, init.t0); });
  } else {
    throw std::invalid_argument("radial run: init.type must be gaussian or self_similar");
  }
  Q0.t = cfg.radial.t0;
  return Q0;
}

field2d::Field2D field_init(const config::SimConfig& cfg) {
  const auto& init = cfg.init;
  const int n = cfg.field2d.n;
  const double L = cfg.field2d.box;
  if (init.type == "gaussian")
    return field2d::gaussian_field(n, L, init.mass, init.sigma, init.center_x, init.center_y);
  if (init.type == "dirac") return field2d::dirac_field(n, L, init.mass);
  if (init.type == "self_similar") {
    const auto p = profile::profile_for_mass(init.mass, 1e-8);
    return field2d::self_similar_field(n, L, p, init.t0);
  }
  if (init.type == "file") return io::read_field(init.path + ".f64", init.path + ".json");
  throw std::invalid_argument("field2d run: unsupported init.type " + init.type);
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i)
    t[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  return t;
}

void run_profile(const config::SimConfig& cfg, const fs::path& dir, io::RunManifest& man) {
  profile::SelfSimilarProfile p =
      cfg.profile.mass != 0.0
          ? profile::profile_for_mass(cfg.profile.mass, cfg.profile.tol)
          : profile::integrate_profile({cfg.profile.shoot}, cfg.profile.y_max, cfg.profile.tol,
                                       cfg.profile.eps);
  io::write_profile(dir / "profile.csv", dir / "profile.json", p);
  man.artifacts.push_back((dir / "profile.csv").string());
  man.artifacts.push_back((dir / "profile.json").string());
  if (p.bounded()) {
    man.checks.push_back({"xi_prime_in_(0,a)", true});  // enforced during integration
    man.checks.push_back({"xi_below_formula_bound", true});
    if (cfg.profile.mass != 0.0)
      man.checks.push_back(
          {"mass_match", std::abs(p.mass_phys() - cfg.profile.mass) <=
                             cfg.profile.tol * cfg.profile.mass * 1.0001});
  }
}

void run_radial(const config::SimConfig& cfg, const fs::path& dir, io::RunManifest& man) {
  const auto grid =
      cfg.radial.ratio == 1.0
          ? radial::RadialGrid::uniform(cfg.radial.n, cfg.radial.r_max)
          : radial::RadialGrid::geometric(cfg.radial.n, cfg.radial.r_max, cfg.radial.ratio);
  radial::ChargeDistribution Q0 = radial_init(cfg, grid);
  radial::RadialTrajectory traj =
      radial::solve(Q0, cfg.radial.t_end, cfg.radial.snapshots, radial_params(cfg.radial));
  traj.config_hash = cfg.hash();
  for (const auto& p :
       io::write_trajectory(dir / "trajectory", traj, grid.describe(), cfg.hash_hex()))
    man.artifacts.push_back(p.string());

  bool pinned = true, monotone = true;
  double drift = 0.0;
  for (const auto& snap : traj.snapshots) {
    pinned = pinned && snap.Q.front() == 0.0 && snap.Q.back() == snap.M_phys;
    for (std::size_t i = 1; i < snap.Q.size(); ++i)
      monotone = monotone &&
                 snap.Q[i] - snap.Q[i - 1] >= -cfg.radial.mono_tol * std::max(snap.M_phys, 1e-300);
    const auto u = radial::density_of(snap);
    const auto Qr = radial::init_from_density(snap.grid, u);
    drift = std::max(drift, std::abs(Qr.M_phys - snap.M_phys));
  }
  man.checks.push_back({"boundary_pinned", pinned});
  man.checks.push_back({"Q_monotone", monotone});
  man.checks.push_back({"mass_drift_below_1e-6",
                        drift <= 1e-6 * std::max(Q0.M_phys, 1e-300)});
}

void run_field2d(const config::SimConfig& cfg, const fs::path& dir, io::RunManifest& man) {
  field2d::Field2D u0 = field_init(cfg);
  field2d::SpectralWorkspace ws(cfg.field2d.n, cfg.field2d.box);
  const double charge0 = u0.total_charge();
  std::vector<field2d::Field2D> traj =
      ws.duhamel_solve(u0, cfg.field2d.t_end, cfg.field2d.dt, cfg.field2d.order,
                       cfg.field2d.snapshots, cfg.field2d.nonlinear);
  double charge_err = 0.0;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "field_%03zu", s);
    io::write_field(dir / (std::string(name) + ".f64"), dir / (std::string(name) + ".json"),
                    traj[s]);
    man.artifacts.push_back((dir / (std::string(name) + ".f64")).string());
    man.artifacts.push_back((dir / (std::string(name) + ".json")).string());
    charge_err = std::max(charge_err, std::abs(traj[s].total_charge() - charge0));
  }
  man.checks.push_back({"charge_conserved_1e-12",
                        charge_err <= 1e-12 * std::max(std::abs(charge0), 1.0)});
}

void run_diagnose(const config::SimConfig& cfg, const fs::path& dir, io::RunManifest& man) {
  const auto& dg = cfg.diagnose;
  json report;
  report["mode"] = dg.mode;

  if (dg.mode == "decay") {
    const auto grid =
        radial::RadialGrid::geometric(cfg.radial.n, cfg.radial.r_max, cfg.radial.ratio);
    radial::ChargeDistribution Q0 = radial_init(cfg, grid);
    radial::RadialTrajectory traj =
        radial::solve(Q0, cfg.radial.t_end, cfg.radial.snapshots, radial_params(cfg.radial));
    std::vector<std::pair<double, double>> series;
    for (const auto& snap : traj.snapshots) {
      const auto u = radial::density_of(snap);
      series.emplace_back(snap.t, radial::lp_norm_radial(snap.grid, u, dg.p));
    }
    const auto fit = analysis::decay_fit(series, dg.fit_lo, dg.fit_hi);
    std::vector<std::vector<double>> rows;
    for (const auto& [t, v] : series)
      rows.push_back({t, v, std::exp(fit.intercept + fit.exponent * std::log(t))});
    io::write_csv(dir / "decay.csv", {"t", "value", "fitted"}, rows);
    man.artifacts.push_back((dir / "decay.csv").string());
    report["exponent"] = fit.exponent;
    report["residual_rms"] = fit.residual_rms;
    report["points"] = fit.points;
    man.checks.push_back({"fit_window_populated", fit.points >= 5});
  } else if (dg.mode == "converge") {
    const auto grid =
        radial::RadialGrid::geometric(cfg.radial.n, cfg.radial.r_max, cfg.radial.ratio);
    radial::ChargeDistribution Q0 = radial_init(cfg, grid);
    radial::RadialTrajectory traj =
        radial::solve(Q0, cfg.radial.t_end, cfg.radial.snapshots, radial_params(cfg.radial));
    const auto p = profile::profile_for_mass(Q0.M_phys, 1e-8);
    const auto series = radial::convergence_diagnostic(traj, p);
    io::write_series_csv(dir / "converge.csv", "t", "value", series);
    man.artifacts.push_back((dir / "converge.csv").string());
    report["first"] = series.front().second;
    report["last"] = series.back().second;
    man.checks.push_back({"diagnostic_finite", std::isfinite(series.back().second)});
  } else if (dg.mode == "besov") {
    field2d::Field2D u0 = field_init(cfg);
    field2d::SpectralWorkspace ws(cfg.field2d.n, cfg.field2d.box);
    const auto t_grid = log_spaced(dg.t_lo, dg.t_hi, dg.t_points);
    const auto series = ws.besov_series(u0, t_grid);
    io::write_series_csv(dir / "besov.csv", "t", "value", series);
    man.artifacts.push_back((dir / "besov.csv").string());
    double proxy = 0.0;
    for (const auto& [t, v] : series) proxy = std::max(proxy, v);
    report["proxy"] = proxy;
    report["note"] = "lower-bound proxy of sup_t; zero mode of the potential dropped";
    man.checks.push_back({"proxy_finite", std::isfinite(proxy)});
  } else {  // nash
    field2d::SpectralWorkspace ws(cfg.field2d.n, cfg.field2d.box);
    field2d::Field2D u0 = field_init(cfg);
    const double ratio = analysis::nash_ratio(ws, u0);
    report["ratio"] = ratio;
    if (dg.mc_fields > 0) {
      double worst = 0.0;
      for (int i = 0; i < dg.mc_fields; ++i) {
        const auto f = field2d::random_band_limited_field(cfg.field2d.n, cfg.field2d.box, dg.band,
                                                          cfg.seed + static_cast<unsigned>(i));
        worst = std::max(worst, analysis::nash_ratio(ws, f));
      }
      report["mc_max"] = worst;
      report["mc_fields"] = dg.mc_fields;
    }
    man.checks.push_back({"ratio_finite", std::isfinite(ratio)});
  }
  io::atomic_write_text(dir / "report.json", report.dump(2) + "\n");
  man.artifacts.push_back((dir / "report.json").string());
}

void run_moser(const config::SimConfig& cfg, const fs::path& dir, io::RunManifest& man) {
  const auto mc = analysis::moser_constants(cfg.moser.C, cfg.moser.k_max);
  std::vector<std::vector<double>> rows;
  bool identity_ok = true, w_neg = true, roots_bounded = true;
  for (int k = 1; k <= cfg.moser.k_max; ++k) {
    const double lhs = mc.log_a[k - 1];
    const double rhs = mc.closed_form_log_a(k);
    identity_ok = identity_ok && std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs));
    w_neg = w_neg && mc.w[k - 1] < 0;
    roots_bounded = roots_bounded && mc.roots[k - 1] <= mc.C * (1.0 + 1e-12);
    rows.push_back({static_cast<double>(k), lhs, static_cast<double>(mc.w[k - 1]),
                    mc.roots[k - 1]});
  }
  io::write_csv(dir / "moser.csv", {"k", "log_a", "w", "root"}, rows);
  man.artifacts.push_back((dir / "moser.csv").string());
  json report;
  report["C"] = mc.C;
  report["k_max"] = cfg.moser.k_max;
  report["root_limit"] = mc.roots.back();
  io::atomic_write_text(dir / "report.json", report.dump(2) + "\n");
  man.artifacts.push_back((dir / "report.json").string());
  man.checks.push_back({"closed_form_identity", identity_ok});
  man.checks.push_back({"w_negative", w_neg});
  man.checks.push_back({"roots_bounded_by_C", roots_bounded});
}

}  // namespace

io::RunManifest run(const config::SimConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);

  io::RunManifest man;
  man.config_hash = cfg.hash_hex();
  man.version = io::kVersion;

  if (cfg.kind == "profile")
    run_profile(cfg, dir, man);
  else if (cfg.kind == "radial")
    run_radial(cfg, dir, man);
  else if (cfg.kind == "field2d")
    run_field2d(cfg, dir, man);
  else if (cfg.kind == "diagnose")
    run_diagnose(cfg, dir, man);
  else if (cfg.kind == "moser")
    run_moser(cfg, dir, man);
  else
    throw std::invalid_argument("run: unsupported kind " + cfg.kind);

  io::atomic_write_text(dir / "config.canonical.toml", cfg.canonical());
  man.artifacts.push_back((dir / "config.canonical.toml").string());
  man.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::atomic_write_text(dir / "manifest.json", man.to_json());
  return man;
}

}  // namespace dnp2d::runner
