#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnp2d/field2d.hpp"
#include "dnp2d/profile.hpp"
#include "dnp2d/radial.hpp"

namespace dnp2d::io {

// every writer goes through a temp file + rename
void atomic_write_text(const std::filesystem::path& path, const std::string& text);

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_series_csv(const std::filesystem::path& path, const std::string& t_name,
                      const std::string& v_name,
                      std::span<const std::pair<double, double>> series);

// profile: CSV (y, xi, xi_prime) + JSON sidecar with solver metadata
void write_profile(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                   const profile::SelfSimilarProfile& p);

// trajectory: one CSV per snapshot (r, Q, u) + manifest JSON
std::vector<std::filesystem::path> write_trajectory(const std::filesystem::path& dir,
                                                    const radial::RadialTrajectory& traj,
                                                    const std::string& grid_descriptor,
                                                    const std::string& config_hash);

// flat binary field: little-endian f64 row-major + JSON header (n, L, t)
void write_field(const std::filesystem::path& bin_path, const std::filesystem::path& json_path,
                 const field2d::Field2D& f);
field2d::Field2D read_field(const std::filesystem::path& bin_path,
                            const std::filesystem::path& json_path);

struct Check {
  std::string name;
  bool pass = false;
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  double wall_time_s = 0.0;
  std::vector<std::string> artifacts;
  std::vector<Check> checks;

  bool all_pass() const;
  std::string to_json() const;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dnp2d::io
