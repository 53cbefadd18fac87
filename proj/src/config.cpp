#include "dnp2d/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace dnp2d::config {

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& tok, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad number '" +
                                tok + "'");
  }
}

Value parse_value(const std::string& raw, int line_no) {
  const std::string v = trim(raw);
  if (v.empty())
    throw std::invalid_argument("config line " + std::to_string(line_no) + ": missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']')
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unterminated array");
    std::vector<double> out;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      out.push_back(parse_number(tok, line_no));
    }
    return out;
  }
  return parse_number(v, line_no);
}

}  // namespace

std::map<std::string, Value> parse_kv(const std::string& text) {
  std::map<std::string, Value> kv;
  std::stringstream ss(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (kv.count(key))
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'");
    kv[key] = parse_value(line.substr(eq + 1), line_no);
  }
  return kv;
}

namespace {

class Reader {
 public:
  explicit Reader(std::map<std::string, Value> kv) : kv_(std::move(kv)) {}

  double num(const std::string& key, double dflt) {
    auto it = take(key);
    if (!it) return dflt;
    if (auto* p = std::get_if<double>(&*it)) return *p;
    throw std::invalid_argument("config: " + key + " must be a number");
  }
  bool boolean(const std::string& key, bool dflt) {
    auto it = take(key);
    if (!it) return dflt;
    if (auto* p = std::get_if<bool>(&*it)) return *p;
    throw std::invalid_argument("config: " + key + " must be true or false");
  }
  std::string str(const std::string& key, std::string dflt) {
    auto it = take(key);
    if (!it) return dflt;
    if (auto* p = std::get_if<std::string>(&*it)) return *p;
    throw std::invalid_argument("config: " + key + " must be a string");
  }
  std::vector<double> list(const std::string& key, std::vector<double> dflt) {
    auto it = take(key);
    if (!it) return dflt;
    if (auto* p = std::get_if<std::vector<double>>(&*it)) return *p;
    throw std::invalid_argument("config: " + key + " must be an array of numbers");
  }
  void finish() const {
    if (!kv_.empty())
      throw std::invalid_argument("config: unknown key '" + kv_.begin()->first + "'");
  }

 private:
  std::optional<Value> take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    Value v = std::move(it->second);
    kv_.erase(it);
    return v;
  }
  std::map<std::string, Value> kv_;
};

}  // namespace

SimConfig SimConfig::from_text(const std::string& text) {
  Reader r(parse_kv(text));
  SimConfig c;
  c.kind = r.str("kind", c.kind);
  c.seed = static_cast<std::uint64_t>(r.num("seed", static_cast<double>(c.seed)));
  c.out_dir = r.str("out_dir", c.out_dir);

  c.profile.mass = r.num("profile.mass", c.profile.mass);
  c.profile.shoot = r.num("profile.shoot", c.profile.shoot);
  c.profile.tol = r.num("profile.tol", c.profile.tol);
  c.profile.y_max = r.num("profile.y_max", c.profile.y_max);
  c.profile.eps = r.num("profile.eps", c.profile.eps);

  c.radial.n = static_cast<int>(r.num("radial.n", c.radial.n));
  c.radial.r_max = r.num("radial.r_max", c.radial.r_max);
  c.radial.ratio = r.num("radial.ratio", c.radial.ratio);
  c.radial.scheme = r.str("radial.scheme", c.radial.scheme);
  c.radial.t0 = r.num("radial.t0", c.radial.t0);
  c.radial.t_end = r.num("radial.t_end", c.radial.t_end);
  c.radial.dt0 = r.num("radial.dt0", c.radial.dt0);
  c.radial.dt_max = r.num("radial.dt_max", c.radial.dt_max);
  c.radial.mono_tol = r.num("radial.mono_tol", c.radial.mono_tol);
  c.radial.nonlinear = r.boolean("radial.nonlinear", c.radial.nonlinear);
  c.radial.snapshots = r.list("radial.snapshots", c.radial.snapshots);

  c.field2d.n = static_cast<int>(r.num("field2d.n", c.field2d.n));
  c.field2d.box = r.num("field2d.box", c.field2d.box);
  c.field2d.t_end = r.num("field2d.t_end", c.field2d.t_end);
  c.field2d.dt = r.num("field2d.dt", c.field2d.dt);
  c.field2d.order = static_cast<int>(r.num("field2d.order", c.field2d.order));
  c.field2d.nonlinear = r.boolean("field2d.nonlinear", c.field2d.nonlinear);
  c.field2d.snapshots = r.list("field2d.snapshots", c.field2d.snapshots);

  c.init.type = r.str("init.type", c.init.type);
  c.init.mass = r.num("init.mass", c.init.mass);
  c.init.sigma = r.num("init.sigma", c.init.sigma);
  c.init.center_x = r.num("init.center_x", c.init.center_x);
  c.init.center_y = r.num("init.center_y", c.init.center_y);
  c.init.t0 = r.num("init.t0", c.init.t0);
  c.init.path = r.str("init.path", c.init.path);

  c.diagnose.mode = r.str("diagnose.mode", c.diagnose.mode);
  c.diagnose.t_lo = r.num("diagnose.t_lo", c.diagnose.t_lo);
  c.diagnose.t_hi = r.num("diagnose.t_hi", c.diagnose.t_hi);
  c.diagnose.t_points = static_cast<int>(r.num("diagnose.t_points", c.diagnose.t_points));
  c.diagnose.fit_lo = r.num("diagnose.fit_lo", c.diagnose.fit_lo);
  c.diagnose.fit_hi = r.num("diagnose.fit_hi", c.diagnose.fit_hi);
  c.diagnose.p = r.num("diagnose.p", c.diagnose.p);
  c.diagnose.mc_fields = static_cast<int>(r.num("diagnose.mc_fields", c.diagnose.mc_fields));
  c.diagnose.band = static_cast<int>(r.num("diagnose.band", c.diagnose.band));

  c.moser.C = r.num("moser.C", c.moser.C);
  c.moser.k_max = static_cast<int>(r.num("moser.k_max", c.moser.k_max));

  r.finish();
  c.validate();
  return c;
}

SimConfig SimConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string SimConfig::canonical() const {
  std::map<std::string, std::string> kv;
  auto put_num = [&](const std::string& k, double v) { kv[k] = format_double(v); };
  auto put_int = [&](const std::string& k, long long v) { kv[k] = std::to_string(v); };
  auto put_str = [&](const std::string& k, const std::string& v) { kv[k] = '"' + v + '"'; };
  auto put_bool = [&](const std::string& k, bool v) { kv[k] = v ? "true" : "false"; };
  auto put_list = [&](const std::string& k, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += format_double(v[i]);
    }
    kv[k] = s + "]";
  };

  put_str("kind", kind);
  put_int("seed", static_cast<long long>(seed));
  put_str("out_dir", out_dir);
  put_num("profile.mass", profile.mass);
  put_num("profile.shoot", profile.shoot);
  put_num("profile.tol", profile.tol);
  put_num("profile.y_max", profile.y_max);
  put_num("profile.eps", profile.eps);
  put_int("radial.n", radial.n);
  put_num("radial.r_max", radial.r_max);
  put_num("radial.ratio", radial.ratio);
  put_str("radial.scheme", radial.scheme);
  put_num("radial.t0", radial.t0);
  put_num("radial.t_end", radial.t_end);
  put_num("radial.dt0", radial.dt0);
  put_num("radial.dt_max", radial.dt_max);
  put_num("radial.mono_tol", radial.mono_tol);
  put_bool("radial.nonlinear", radial.nonlinear);
  put_list("radial.snapshots", radial.snapshots);
  put_int("field2d.n", field2d.n);
  put_num("field2d.box", field2d.box);
  put_num("field2d.t_end", field2d.t_end);
  put_num("field2d.dt", field2d.dt);
  put_int("field2d.order", field2d.order);
  put_bool("field2d.nonlinear", field2d.nonlinear);
  put_list("field2d.snapshots", field2d.snapshots);
  put_str("init.type", init.type);
  put_num("init.mass", init.mass);
  put_num("init.sigma", init.sigma);
  put_num("init.center_x", init.center_x);
  put_num("init.center_y", init.center_y);
  put_num("init.t0", init.t0);
  put_str("init.path", init.path);
  put_str("diagnose.mode", diagnose.mode);
  put_num("diagnose.t_lo", diagnose.t_lo);
  put_num("diagnose.t_hi", diagnose.t_hi);
  put_int("diagnose.t_points", diagnose.t_points);
  put_num("diagnose.fit_lo", diagnose.fit_lo);
  put_num("diagnose.fit_hi", diagnose.fit_hi);
  put_num("diagnose.p", diagnose.p);
  put_int("diagnose.mc_fields", diagnose.mc_fields);
  put_int("diagnose.band", diagnose.band);
  put_num("moser.C", moser.C);
  put_int("moser.k_max", moser.k_max);

  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t SimConfig::hash() const {
  // FNV-1a over the canonical text
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string SimConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };

  if (kind != "profile" && kind != "radial" && kind != "field2d" && kind != "diagnose" &&
      kind != "moser")
    fail("kind must be one of profile|radial|field2d|diagnose|moser");

  if (kind == "profile") {
    const bool has_mass = profile.mass != 0.0, has_shoot = profile.shoot != 0.0;
    if (has_mass == has_shoot)
      fail("profile: exactly one of profile.mass and profile.shoot must be set");
    if (has_mass && !(profile.mass > 0.0))
      fail("profile.mass must be > 0 (mass_to_shoot requires M_phys > 0)");
    if (has_shoot && !(profile.shoot > 0.0))
      fail("profile.shoot must be > 0 (integrate_profile requires a > 0)");
  }
  if (!(profile.tol > 0.0)) fail("profile.tol must be > 0");
  if (!(profile.y_max > 0.0)) fail("profile.y_max must be > 0");
  if (!(profile.eps >= 0.0)) fail("profile.eps must be >= 0 (regularization parameter)");

  if (radial.n < 16) fail("radial.n must be >= 16 (RadialGrid invariant)");
  if (!(radial.r_max > 0.0)) fail("radial.r_max must be > 0");
  if (!(radial.ratio >= 1.0) || !(radial.ratio <= 1.2))
    fail("radial.ratio must lie in [1, 1.2] (RadialGrid invariant)");
  if (radial.scheme != "imex1" && radial.scheme != "cn")
    fail("radial.scheme must be imex1 or cn");
  if (!(radial.t_end > radial.t0)) fail("radial.t_end must exceed radial.t0");
  if (!(radial.dt0 > 0.0)) fail("radial.dt0 must be > 0");
  if (!(radial.dt_max >= radial.dt0)) fail("radial.dt_max must be >= radial.dt0");
  if (!(radial.mono_tol >= 0.0)) fail("radial.mono_tol must be >= 0");
  for (std::size_t i = 0; i < radial.snapshots.size(); ++i) {
    if (radial.snapshots[i] <= radial.t0 || radial.snapshots[i] > radial.t_end)
      fail("radial.snapshots must lie in (t0, t_end] (solve precondition)");
    if (i > 0 && radial.snapshots[i] <= radial.snapshots[i - 1])
      fail("radial.snapshots must be strictly increasing");
  }

  if (field2d.n < 32 || (field2d.n & (field2d.n - 1)) != 0)
    fail("field2d.n must be a power of two >= 32 (solver invariant)");
  if (!(field2d.box > 0.0)) fail("field2d.box must be > 0");
  if (!(field2d.t_end > 0.0)) fail("field2d.t_end must be > 0");
  if (!(field2d.dt > 0.0)) fail("field2d.dt must be > 0");
  if (field2d.order != 1 && field2d.order != 2) fail("field2d.order must be 1 or 2");

  if (init.type != "gaussian" && init.type != "self_similar" && init.type != "dirac" &&
      init.type != "file")
    fail("init.type must be one of gaussian|self_similar|dirac|file");
  if (init.type != "file" && !(init.mass > 0.0))
    fail("init.mass must be > 0 (mass_to_shoot requires M_phys > 0)");
  if (init.type == "gaussian" && !(init.sigma > 0.0)) fail("init.sigma must be > 0");
  if (init.type == "self_similar" && !(init.t0 > 0.0))
    fail("init.t0 must be > 0 (self_similar_density requires t > 0)");
  if (init.type == "file" && init.path.empty()) fail("init.path required for init.type = file");

  if (kind == "diagnose") {
    if (diagnose.mode != "decay" && diagnose.mode != "converge" && diagnose.mode != "besov" &&
        diagnose.mode != "nash")
      fail("diagnose.mode must be one of decay|converge|besov|nash");
    if (!(diagnose.t_lo > 0.0) || !(diagnose.t_hi > diagnose.t_lo))
      fail("diagnose.t_lo/t_hi must satisfy 0 < t_lo < t_hi");
    if (diagnose.t_points < 2) fail("diagnose.t_points must be >= 2");
    if (!(diagnose.fit_hi > diagnose.fit_lo)) fail("diagnose.fit window must be nonempty");
    if (!(diagnose.p >= 1.0)) fail("diagnose.p must be >= 1 (lp_norm precondition)");
    if (diagnose.mc_fields < 0) fail("diagnose.mc_fields must be >= 0");
    if (diagnose.band < 1) fail("diagnose.band must be >= 1");
  }

  if (!(moser.C > 0.0)) fail("moser.C must be > 0 (moser_constants precondition)");
  if (moser.k_max < 1 || moser.k_max > 40)
    fail("moser.k_max must lie in [1, 40] (moser_constants precondition)");
}

}  // namespace dnp2d::config
