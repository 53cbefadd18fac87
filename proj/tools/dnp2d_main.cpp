// dnp2d — numerical laboratory for the 2D repulsive drift-diffusion system:
// self-similar profiles, the integrated-density radial solver, the spectral
// mild-solution integrator, and the quantitative diagnostics tying them
// together.  Every subcommand writes its artifacts plus a manifest under the
// output directory; exit code 0 means all declared checks passed.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnp2d/accept.hpp"
#include "dnp2d/config.hpp"
#include "dnp2d/runner.hpp"

namespace {

int finish(const dnp2d::io::RunManifest& man) {
  for (const auto& c : man.checks)
    std::printf("[%s] %s\n", c.pass ? "ok" : "FAIL", c.name.c_str());
  std::printf("artifacts: %zu files, config %s, %.2fs\n", man.artifacts.size(),
              man.config_hash.c_str(), man.wall_time_s);
  return man.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dnp2d: drift-diffusion / self-similar profile laboratory"};
  app.require_subcommand(1);

  // profile --mass|--shoot --tol --ymax [--eps] [--out]
  auto* prof = app.add_subcommand("profile", "construct a self-similar profile");
  double mass = 0.0, shoot = 0.0, tol = 1e-10, ymax = 200.0, eps = 0.0;
  std::string out_dir = "out";
  prof->add_option("--mass", mass, "physical charge M (builds a mass-matched profile)");
  prof->add_option("--shoot", shoot, "initial slope a = xi'(0)");
  prof->add_option("--tol", tol, "solver tolerance");
  prof->add_option("--ymax", ymax, "integration range in y = r^2/t");
  prof->add_option("--eps", eps, "regularization parameter");
  prof->add_option("--out", out_dir, "output directory");

  auto* radial = app.add_subcommand("radial", "integrated-density radial run");
  std::string radial_cfg;
  radial->add_option("--config", radial_cfg, "TOML config file")->required();

  auto* f2d = app.add_subcommand("field2d", "2D spectral mild-solution run");
  std::string f2d_cfg;
  f2d->add_option("--config", f2d_cfg, "TOML config file")->required();

  auto* diag = app.add_subcommand("diagnose", "decay | converge | besov | nash");
  std::string diag_mode;
  std::string diag_cfg;
  diag->add_option("mode", diag_mode, "diagnostic kind")->required();
  diag->add_option("--config", diag_cfg, "TOML config file")->required();

  auto* moser = app.add_subcommand("moser", "energy-estimate constant recurrences");
  double moser_c = 2.0;
  int moser_k = 30;
  std::string moser_out = "out";
  moser->add_option("--C", moser_c, "base constant");
  moser->add_option("--kmax", moser_k, "number of recurrence levels");
  moser->add_option("--out", moser_out, "output directory");

  auto* acc = app.add_subcommand("accept", "run acceptance criteria");
  std::string acc_id = "all";
  acc->add_option("id", acc_id, "criterion number or 'all'");

  CLI11_PARSE(app, argc, argv);

  try {
    if (prof->parsed()) {
      dnp2d::config::SimConfig cfg;
      cfg.kind = "profile";
      cfg.out_dir = out_dir;
      cfg.profile.mass = mass;
      cfg.profile.shoot = shoot;
      cfg.profile.tol = tol;
      cfg.profile.y_max = ymax;
      cfg.profile.eps = eps;
      cfg.validate();
      return finish(dnp2d::runner::run(cfg));
    }
    if (radial->parsed()) {
      auto cfg = dnp2d::config::SimConfig::load(radial_cfg);
      cfg.kind = "radial";
      return finish(dnp2d::runner::run(cfg));
    }
    if (f2d->parsed()) {
      auto cfg = dnp2d::config::SimConfig::load(f2d_cfg);
      cfg.kind = "field2d";
      return finish(dnp2d::runner::run(cfg));
    }
    if (diag->parsed()) {
      auto cfg = dnp2d::config::SimConfig::load(diag_cfg);
      cfg.kind = "diagnose";
      cfg.diagnose.mode = diag_mode;
      cfg.validate();
      return finish(dnp2d::runner::run(cfg));
    }
    if (moser->parsed()) {
      dnp2d::config::SimConfig cfg;
      cfg.kind = "moser";
      cfg.out_dir = moser_out;
      cfg.moser.C = moser_c;
      cfg.moser.k_max = moser_k;
      cfg.validate();
      return finish(dnp2d::runner::run(cfg));
    }
    if (acc->parsed()) {
      std::vector<dnp2d::accept::CriterionResult> results;
      if (acc_id == "all") {
        results = dnp2d::accept::run_all();
      } else {
        results.push_back(dnp2d::accept::run_criterion(std::stoi(acc_id)));
      }
      int fails = 0;
      for (const auto& r : results) {
        dnp2d::accept::print_result(r);
        if (!r.pass) ++fails;
      }
      return fails == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
