#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace dnp2d::config {

using Value = std::variant<double, bool, std::string, std::vector<double>>;

// TOML-style key/value text: [section] headers, dotted keys, numbers,
// "strings", booleans, flat numeric arrays, # comments.  Returns flattened
// dotted keys; unknown syntax throws with the offending line.
std::map<std::string, Value> parse_kv(const std::string& text);

struct ProfileCfg {
  double mass = 0.0;   // physical charge; one of mass/shoot must be set
  double shoot = 0.0;  // direct xi'(0)
  double tol = 1e-10;
  double y_max = 200.0;
  double eps = 0.0;
};

struct RadialCfg {
  int n = 128;
  double r_max = 20.0;
  double ratio = 1.05;
  std::string scheme = "imex1";  // imex1 | cn
  double t0 = 0.0;
  double t_end = 10.0;
  double dt0 = 1e-5;
  double dt_max = 0.5;
  double mono_tol = 1e-9;
  bool nonlinear = true;
  std::vector<double> snapshots;
};

struct Field2dCfg {
  int n = 128;
  double box = 40.0;
  double t_end = 1.0;
  double dt = 0.01;
  int order = 1;
  bool nonlinear = true;
  std::vector<double> snapshots;
};

struct InitCfg {
  std::string type = "gaussian";  // gaussian | self_similar | dirac | file
  double mass = 1.0;
  double sigma = 1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double t0 = 1.0;  // profile time for self_similar data
  std::string path;
};

struct DiagnoseCfg {
  std::string mode = "decay";  // decay | converge | besov | nash
  double t_lo = 1e-4;
  double t_hi = 1.0;
  int t_points = 13;
  double fit_lo = 10.0;
  double fit_hi = 100.0;
  double p = 2.0;
  int mc_fields = 0;
  int band = 8;
};

struct MoserCfg {
  double C = 2.0;
  int k_max = 30;
};

struct SimConfig {
  std::string kind = "profile";  // profile | radial | field2d | diagnose | moser
  std::uint64_t seed = 12345;
  std::string out_dir = "out";
  ProfileCfg profile;
  RadialCfg radial;
  Field2dCfg field2d;
  InitCfg init;
  DiagnoseCfg diagnose;
  MoserCfg moser;

  static SimConfig from_text(const std::string& text);
  static SimConfig load(const std::filesystem::path& path);

  // every field, normalized, one sorted dotted key per line; hashing and the
  // byte-identical rerun guarantee both rest on this form
  std::string canonical() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;

  // throws std::invalid_argument naming the violated precondition
  void validate() const;
};

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace dnp2d::config
