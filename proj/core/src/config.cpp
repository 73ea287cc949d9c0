#include "pksfv/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pksfv/poisson.hpp"

namespace pksfv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& what) {
  throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::string& origin, std::size_t line,
                 const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    fail(origin, line, "value of '" + key + "' is not a number: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& origin, std::size_t line,
                     const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    fail(origin, line, "value of '" + key + "' is not a nonnegative integer: '" + v + "'");
  }
}

const char* to_string(IcKind k) {
  switch (k) {
    case IcKind::constant: return "constant";
    case IcKind::gaussian_bump: return "gaussian_bump";
    case IcKind::table: return "table";
  }
  return "constant";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  ModelParams mp = model_params();
  mp.validate_and_finalize();
  stepper_config().validate();
  if (!(radius > 0.0)) throw std::invalid_argument("config: R must be > 0");
  if (cells < 1) throw std::invalid_argument("config: n must be >= 1");
  if (!(t_end >= 0.0)) throw std::invalid_argument("config: t_end must be >= 0");
  if (!(sample_dt >= 0.0)) throw std::invalid_argument("config: sample_dt must be >= 0");
  if (!(snapshot_dt >= 0.0)) throw std::invalid_argument("config: snapshot_dt must be >= 0");
  if (!(ic_amplitude >= 0.0))
    throw std::invalid_argument("config: ic_amplitude must be >= 0");
  if (!(ic_width > 0.0)) throw std::invalid_argument("config: ic_width must be > 0");
  if (!(ic_center_radius >= 0.0 && ic_center_radius <= radius))
    throw std::invalid_argument("config: ic_center_radius must lie in [0, R]");
  if (ic_kind == IcKind::table && ic_table_file.empty())
    throw std::invalid_argument("config: ic_kind=table requires ic_table_file");
  if (!(cs >= 0.0)) throw std::invalid_argument("config: cs must be >= 0");
  if (sobolev_trials < 1)
    throw std::invalid_argument("config: sobolev_trials must be >= 1");
  if (!(blowup_growth_factor > 1.0))
    throw std::invalid_argument("config: blowup_growth_factor must be > 1");
}

ModelParams RunConfig::model_params() const {
  ModelParams p;
  p.dim = dim;
  p.m = 0.0;  // always the critical exponent of dim
  p.delta = delta;
  p.mass = mass;
  p.validate_and_finalize();
  return p;
}

StepperConfig RunConfig::stepper_config() const {
  StepperConfig c;
  c.cfl_safety = cfl_safety;
  c.dt_init = dt_init;
  c.dt_min = dt_min;
  c.dt_max = dt_max;
  return c;
}

double RunConfig::effective_sample_dt() const {
  return sample_dt > 0.0 ? sample_dt : t_end / 100.0;
}

std::filesystem::path RunConfig::effective_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv(kOutputRootEnv); env != nullptr && *env != '\0')
    return env;
  return "pksfv_out";
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("config: cannot open '" + file.string() + "'");
  return load_config(in, file.string());
}

RunConfig load_config(std::istream& in, const std::string& origin) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "empty key");
    if (value.empty()) fail(origin, line_no, "empty value for '" + key + "'");
    if (!seen.insert(key).second) fail(origin, line_no, "duplicate key '" + key + "'");

    if (key == "dim") cfg.dim = static_cast<int>(to_u64(origin, line_no, key, value));
    else if (key == "radius") cfg.radius = to_double(origin, line_no, key, value);
    else if (key == "cells") cfg.cells = to_u64(origin, line_no, key, value);
    else if (key == "delta") cfg.delta = to_double(origin, line_no, key, value);
    else if (key == "mass") cfg.mass = to_double(origin, line_no, key, value);
    else if (key == "cfl_safety") cfg.cfl_safety = to_double(origin, line_no, key, value);
    else if (key == "dt_init") cfg.dt_init = to_double(origin, line_no, key, value);
    else if (key == "dt_min") cfg.dt_min = to_double(origin, line_no, key, value);
    else if (key == "dt_max") cfg.dt_max = to_double(origin, line_no, key, value);
    else if (key == "ic_kind") {
      if (value == "constant") cfg.ic_kind = IcKind::constant;
      else if (value == "gaussian_bump") cfg.ic_kind = IcKind::gaussian_bump;
      else if (value == "table") cfg.ic_kind = IcKind::table;
      else fail(origin, line_no, "unknown ic_kind '" + value + "'");
    }
    else if (key == "ic_amplitude") cfg.ic_amplitude = to_double(origin, line_no, key, value);
    else if (key == "ic_width") cfg.ic_width = to_double(origin, line_no, key, value);
    else if (key == "ic_center_radius")
      cfg.ic_center_radius = to_double(origin, line_no, key, value);
    else if (key == "ic_table_file") cfg.ic_table_file = value;
    else if (key == "t_end") cfg.t_end = to_double(origin, line_no, key, value);
    else if (key == "sample_dt") cfg.sample_dt = to_double(origin, line_no, key, value);
    else if (key == "snapshot_dt") cfg.snapshot_dt = to_double(origin, line_no, key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "seed") cfg.seed = to_u64(origin, line_no, key, value);
    else if (key == "cs") cfg.cs = to_double(origin, line_no, key, value);
    else if (key == "sobolev_trials") cfg.sobolev_trials = to_u64(origin, line_no, key, value);
    else if (key == "sobolev_iterations")
      cfg.sobolev_iterations = to_u64(origin, line_no, key, value);
    else if (key == "blowup_dt_repeats")
      cfg.blowup_dt_repeats = to_u64(origin, line_no, key, value);
    else if (key == "blowup_growth_factor")
      cfg.blowup_growth_factor = to_double(origin, line_no, key, value);
    else if (key == "blowup_window") cfg.blowup_window = to_u64(origin, line_no, key, value);
    else fail(origin, line_no, "unknown key '" + key + "'");
  }

  cfg.validate();
  return cfg;
}

void save_config(const RunConfig& cfg, std::ostream& out) {
  // Sorted key order; every key explicit so a reload reproduces the config
  // without relying on defaults.
  std::map<std::string, std::string> kv;
  kv["dim"] = std::to_string(cfg.dim);
  kv["radius"] = format_double(cfg.radius);
  kv["cells"] = std::to_string(cfg.cells);
  kv["delta"] = format_double(cfg.delta);
  kv["mass"] = format_double(cfg.mass);
  kv["cfl_safety"] = format_double(cfg.cfl_safety);
  kv["dt_init"] = format_double(cfg.dt_init);
  kv["dt_min"] = format_double(cfg.dt_min);
  kv["dt_max"] = format_double(cfg.dt_max);
  kv["ic_kind"] = to_string(cfg.ic_kind);
  kv["ic_amplitude"] = format_double(cfg.ic_amplitude);
  kv["ic_width"] = format_double(cfg.ic_width);
  kv["ic_center_radius"] = format_double(cfg.ic_center_radius);
  if (!cfg.ic_table_file.empty()) kv["ic_table_file"] = cfg.ic_table_file;
  kv["t_end"] = format_double(cfg.t_end);
  kv["sample_dt"] = format_double(cfg.sample_dt);
  kv["snapshot_dt"] = format_double(cfg.snapshot_dt);
  if (!cfg.output_dir.empty()) kv["output_dir"] = cfg.output_dir;
  kv["seed"] = std::to_string(cfg.seed);
  kv["cs"] = format_double(cfg.cs);
  kv["sobolev_trials"] = std::to_string(cfg.sobolev_trials);
  kv["sobolev_iterations"] = std::to_string(cfg.sobolev_iterations);
  kv["blowup_dt_repeats"] = std::to_string(cfg.blowup_dt_repeats);
  kv["blowup_growth_factor"] = format_double(cfg.blowup_growth_factor);
  kv["blowup_window"] = std::to_string(cfg.blowup_window);

  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

namespace {

// Reads a two-column CSV profile (r,value; optional header) and evaluates it
// at the cell centers by linear interpolation.
std::vector<double> interpolate_table(const std::string& file,
                                      const RadialGrid& g) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("ic_table_file: cannot open '" + file + "'");

  std::vector<std::pair<double, double>> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream row(t);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b))
      throw std::invalid_argument(file + ":" + std::to_string(line_no) +
                                  ": expected 'r,value'");
    try {
      pts.emplace_back(std::stod(trim(a)), std::stod(trim(b)));
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header row
      throw std::invalid_argument(file + ":" + std::to_string(line_no) +
                                  ": expected numeric 'r,value'");
    }
  }
  if (pts.size() < 2)
    throw std::invalid_argument("ic_table_file: need at least two points");
  std::sort(pts.begin(), pts.end());
  if (pts.front().first > 0.0 || pts.back().first < g.radius)
    throw std::invalid_argument("ic_table_file: profile must cover [0, R]");

  std::vector<double> u(g.cells());
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double r = g.center[i];
    const auto hi = std::lower_bound(
        pts.begin(), pts.end(), r,
        [](const std::pair<double, double>& p, double x) { return p.first < x; });
    if (hi == pts.begin()) {
      u[i] = hi->second;
      continue;
    }
    const auto lo = hi - 1;
    const double span = hi->first - lo->first;
    const double w = span > 0.0 ? (r - lo->first) / span : 0.0;
    u[i] = std::lerp(lo->second, hi->second, w);
  }
  return u;
}

}  // namespace

CellField build_initial_condition(const RunConfig& cfg, const RadialGrid& g) {
  CellField u(g.cells(), 0.0);

  switch (cfg.ic_kind) {
    case IcKind::constant:
      std::fill(u.begin(), u.end(), cfg.mass);
      return u;  // already at the target mean, no rescale round-off
    case IcKind::gaussian_bump:
      // Bump on a unit background: amplitude sets the contrast, the rescale
      // below sets the mass.
      for (std::size_t i = 0; i < g.cells(); ++i) {
        const double z = (g.center[i] - cfg.ic_center_radius) / cfg.ic_width;
        u[i] = 1.0 + cfg.ic_amplitude * std::exp(-z * z);
      }
      break;
    case IcKind::table:
      u = interpolate_table(cfg.ic_table_file, g);
      for (double v : u)
        if (!(v >= 0.0))
          throw std::invalid_argument("ic_table_file: profile must be nonnegative");
      break;
  }

  const double mean = mean_value(u, g);
  if (!(mean > 0.0))
    throw std::invalid_argument("initial condition: shape has zero mean, cannot normalize");
  const double scale = cfg.mass / mean;
  for (double& v : u) v *= scale;
  return u;
}

}  // namespace pksfv
