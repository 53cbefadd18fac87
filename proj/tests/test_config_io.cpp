#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dnp2d/config.hpp"
#include "dnp2d/io.hpp"
#include "dnp2d/runner.hpp"

using namespace dnp2d;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("dnp2d_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST_CASE("minimal profile config normalizes with defaults") {
  const auto cfg = config::SimConfig::from_text(
      "kind = \"profile\"\n[profile]\nshoot = 0.1\n");
  CHECK(cfg.kind == "profile");
  CHECK(cfg.profile.shoot == 0.1);
  CHECK(cfg.profile.tol == 1e-10);   // default filled
  CHECK(cfg.profile.y_max == 200.0);
  CHECK(cfg.radial.ratio == 1.05);
}

TEST_CASE("config errors name the violated precondition") {
  try {
    config::SimConfig::from_text("kind = \"profile\"\n[profile]\nmass = -2.0\n");
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("mass_to_shoot") != std::string::npos);
  }
  CHECK_THROWS_AS(config::SimConfig::from_text("kind = \"radial\"\n[radial]\nratio = 1.5\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config::SimConfig::from_text("kind = \"moser\"\n[moser]\nk_max = 99\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config::SimConfig::from_text("nonsense_key = 3\nkind = \"moser\"\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config::SimConfig::from_text("kind = \"moser\"\nkind = \"moser\"\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config::SimConfig::from_text("kind = \"profile\"\n[profile]\nshoot = abc\n"),
                  std::invalid_argument);
}

TEST_CASE("canonical form round-trips and hashes stably") {
  const auto cfg = config::SimConfig::from_text(
      "kind = \"radial\"\nseed = 7\n[radial]\nn = 64\nsnapshots = [0.5, 1.0]\n"
      "[init]\ntype = \"gaussian\"\nmass = 0.25\n");
  const std::string canon = cfg.canonical();
  const auto cfg2 = config::SimConfig::from_text(canon);
  CHECK(cfg2.canonical() == canon);  // idempotent
  CHECK(cfg2.hash_hex() == cfg.hash_hex());

  auto cfg3 = cfg;
  cfg3.seed = 8;
  CHECK(cfg3.hash_hex() != cfg.hash_hex());
}

TEST_CASE("comments, sections and arrays parse") {
  const auto kv = config::parse_kv(
      "# a comment\n[radial]\nn = 32  # trailing\nsnapshots = [1, 2, 3]\nscheme = \"cn\"\n");
  CHECK(std::get<double>(kv.at("radial.n")) == 32.0);
  CHECK(std::get<std::vector<double>>(kv.at("radial.snapshots")).size() == 3);
  CHECK(std::get<std::string>(kv.at("radial.scheme")) == "cn");
}

TEST_CASE("series CSV: deterministic bytes and header-only for empty input") {
  const auto dir = temp_dir("csv");
  const std::vector<std::pair<double, double>> series{{1.0, 0.5}, {2.0, 0.25}};
  io::write_series_csv(dir / "s.csv", "t", "value", series);
  const std::string first = slurp(dir / "s.csv");
  io::write_series_csv(dir / "s.csv", "t", "value", series);
  CHECK(slurp(dir / "s.csv") == first);
  CHECK(first.substr(0, 8) == "t,value\n");

  io::write_series_csv(dir / "empty.csv", "t", "value", {});
  CHECK(slurp(dir / "empty.csv") == "t,value\n");
}

TEST_CASE("field binary round trip is exact") {
  const auto dir = temp_dir("field");
  auto f = field2d::gaussian_field(32, 8.0, 0.3, 0.9);
  f.t = 1.25;
  io::write_field(dir / "f.f64", dir / "f.json", f);
  const auto back = io::read_field(dir / "f.f64", dir / "f.json");
  CHECK(back.n == f.n);
  CHECK(back.L == f.L);
  CHECK(back.t == f.t);
  CHECK(back.values == f.values);
}

TEST_CASE("profile runs are byte-identical across reruns") {
  const auto dir = temp_dir("rerun");
  config::SimConfig cfg;
  cfg.kind = "profile";
  cfg.profile.shoot = 0.2;
  cfg.profile.y_max = 50.0;
  cfg.out_dir = (dir / "a").string();
  const auto man1 = runner::run(cfg);
  CHECK(man1.all_pass());
  const std::string csv1 = slurp(dir / "a" / "profile.csv");
  cfg.out_dir = (dir / "b").string();
  const auto man2 = runner::run(cfg);
  CHECK(slurp(dir / "b" / "profile.csv") == csv1);
  CHECK(!csv1.empty());
}

TEST_CASE("radial run emits a trajectory directory with manifest") {
  const auto dir = temp_dir("radial");
  config::SimConfig cfg;
  cfg.kind = "radial";
  cfg.out_dir = (dir / "run").string();
  cfg.radial.n = 128;
  cfg.radial.r_max = 15.0;
  cfg.radial.ratio = 1.1;
  cfg.radial.t_end = 0.2;
  cfg.radial.dt_max = 5e-3;
  cfg.radial.snapshots = {0.1, 0.2};
  cfg.init.type = "gaussian";
  cfg.init.mass = 0.05;
  cfg.init.sigma = 1.0;
  const auto man = runner::run(cfg);
  CHECK(man.all_pass());
  CHECK(fs::exists(dir / "run" / "trajectory" / "snapshot_000.csv"));
  CHECK(fs::exists(dir / "run" / "trajectory" / "snapshot_001.csv"));
  CHECK(fs::exists(dir / "run" / "trajectory" / "trajectory.json"));
  CHECK(fs::exists(dir / "run" / "manifest.json"));
  const std::string man_text = slurp(dir / "run" / "manifest.json");
  CHECK(man_text.find("config_hash") != std::string::npos);
  CHECK(man_text.find("boundary_pinned") != std::string::npos);
}

TEST_CASE("moser run writes the sequence table and report") {
  const auto dir = temp_dir("moser");
  config::SimConfig cfg;
  cfg.kind = "moser";
  cfg.out_dir = (dir / "m").string();
  cfg.moser.C = 2.0;
  cfg.moser.k_max = 10;
  const auto man = runner::run(cfg);
  CHECK(man.all_pass());
  const std::string csv = slurp(dir / "m" / "moser.csv");
  CHECK(csv.substr(0, 15) == "k,log_a,w,root\n");
}

TEST_CASE("diagnose besov run produces a finite proxy") {
  const auto dir = temp_dir("besov");
  config::SimConfig cfg;
  cfg.kind = "diagnose";
  cfg.diagnose.mode = "besov";
  cfg.out_dir = (dir / "d").string();
  cfg.field2d.n = 64;
  cfg.field2d.box = 1.0;
  cfg.init.type = "dirac";
  cfg.init.mass = 0.02;
  cfg.diagnose.t_lo = 8.0 / (64.0 * 64.0);
  cfg.diagnose.t_hi = 800.0 / (64.0 * 64.0);
  cfg.diagnose.t_points = 7;
  const auto man = runner::run(cfg);
  CHECK(man.all_pass());
  const std::string rep = slurp(dir / "d" / "report.json");
  CHECK(rep.find("proxy") != std::string::npos);
}
