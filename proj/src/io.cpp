#include "dnp2d/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "dnp2d/config.hpp"

static_assert(std::endian::native == std::endian::little,
              "flat-binary field format assumes a little-endian host");

namespace dnp2d::io {

using nlohmann::json;

void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += config::format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  atomic_write_text(path, csv_text(header, rows));
}

void write_series_csv(const std::filesystem::path& path, const std::string& t_name,
                      const std::string& v_name,
                      std::span<const std::pair<double, double>> series) {
  std::vector<std::vector<double>> rows;
  rows.reserve(series.size());
  for (const auto& [t, v] : series) rows.push_back({t, v});
  write_csv(path, {t_name, v_name}, rows);
}

void write_profile(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                   const profile::SelfSimilarProfile& p) {
  std::vector<std::vector<double>> rows;
  rows.reserve(p.y_grid().size());
  for (std::size_t i = 0; i < p.y_grid().size(); ++i)
    rows.push_back({p.y_grid()[i], p.xi()[i], p.xi_prime()[i]});
  write_csv(csv_path, {"y", "xi", "xi_prime"}, rows);

  json side;
  side["a"] = p.a();
  side["m_tail"] = p.m_tail();
  side["M_phys"] = p.mass_phys();
  side["eps_reg"] = p.eps_reg();
  side["tol"] = p.tol();
  side["bounded"] = p.bounded();
  side["y_max"] = p.y_max();
  side["nodes"] = p.y_grid().size();
  side["decay_rate"] = p.decay_rate();
  side["tail_mode"] = "exp";  // xi' continued as xi'(y_max) e^{-delta (y - y_max)}
  side["formula_mass_upper_bound"] =
      p.bounded() ? 4.0 * p.a() / (1.0 - 2.0 * p.a()) : std::numeric_limits<double>::infinity();
  side["solver"] = "rk45 series-start";
  atomic_write_text(json_path, side.dump(2) + "\n");
}

std::vector<std::filesystem::path> write_trajectory(const std::filesystem::path& dir,
                                                    const radial::RadialTrajectory& traj,
                                                    const std::string& grid_descriptor,
                                                    const std::string& config_hash) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  json man;
  man["grid"] = grid_descriptor;
  man["config_hash"] = config_hash;
  std::vector<double> times;
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const auto& snap = traj.snapshots[s];
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", s);
    const std::filesystem::path p = dir / name;
    const std::vector<double> u = radial::density_of(snap);
    std::vector<std::vector<double>> rows;
    rows.reserve(snap.Q.size());
    for (std::size_t i = 0; i < snap.Q.size(); ++i)
      rows.push_back({snap.grid.nodes[i], snap.Q[i], u[i]});
    write_csv(p, {"r", "Q", "u"}, rows);
    paths.push_back(p);
    times.push_back(snap.t);
  }
  man["times"] = times;
  man["M_phys"] = traj.snapshots.empty() ? 0.0 : traj.snapshots.front().M_phys;
  const std::filesystem::path mp = dir / "trajectory.json";
  atomic_write_text(mp, man.dump(2) + "\n");
  paths.push_back(mp);
  return paths;
}

void write_field(const std::filesystem::path& bin_path, const std::filesystem::path& json_path,
                 const field2d::Field2D& f) {
  std::string raw(f.values.size() * sizeof(double), '\0');
  std::memcpy(raw.data(), f.values.data(), raw.size());
  atomic_write_text(bin_path, raw);
  json head;
  head["n"] = f.n;
  head["L"] = f.L;
  head["t"] = f.t;
  head["mean"] = f.mean();
  head["format"] = "f64le-rowmajor";
  head["zero_mode_convention"] = "periodic potential drops the mean mode";
  atomic_write_text(json_path, head.dump(2) + "\n");
}

field2d::Field2D read_field(const std::filesystem::path& bin_path,
                            const std::filesystem::path& json_path) {
  std::ifstream jin(json_path);
  if (!jin) throw std::runtime_error("io: cannot open " + json_path.string());
  json head = json::parse(jin);
  if (head.value("format", "") != "f64le-rowmajor")
    throw std::runtime_error("io: unsupported field format in " + json_path.string());
  field2d::Field2D f = field2d::make_field(head.at("n").get<int>(), head.at("L").get<double>(),
                                           head.value("t", 0.0));
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("io: cannot open " + bin_path.string());
  bin.read(reinterpret_cast<char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (bin.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
    throw std::runtime_error("io: short read from " + bin_path.string());
  return f;
}

bool RunManifest::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string RunManifest::to_json() const {
  json j;
  j["config_hash"] = config_hash;
  j["version"] = version;
  j["wall_time_s"] = wall_time_s;
  j["artifacts"] = artifacts;
  j["checks"] = json::array();
  for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}});
  j["all_pass"] = all_pass();
  return j.dump(2) + "\n";
}

}  // namespace dnp2d::io
