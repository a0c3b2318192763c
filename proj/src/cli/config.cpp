#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hdgshape/cli.hpp"
#include "hdgshape/errors.hpp"

namespace hdgshape {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(key + ": value out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v, std::size_t n) {
  const auto parts = split(v, ',');
  if (parts.size() != n) throw ConfigError(key + ": expected " + std::to_string(n) + " comma-separated numbers");
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(to_double(key, p));
  return out;
}

std::pair<std::string, std::string> split_setting(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + s + "'");
  std::string key = trim(s.substr(0, eq));
  if (key.empty()) throw ConfigError("empty key in '" + s + "'");
  return {key, trim(s.substr(eq + 1))};
}

}  // namespace

std::string to_string(Preset p) {
  switch (p) {
    case Preset::Experiment1: return "experiment1";
    case Preset::Experiment2: return "experiment2";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

Preset parse_preset(const std::string& name) {
  if (name == "experiment1") return Preset::Experiment1;
  if (name == "experiment2") return Preset::Experiment2;
  if (name == "custom") return Preset::Custom;
  throw ConfigError("unknown preset '" + name + "' (experiment1, experiment2, custom)");
}

RunConfig preset_config(Preset p) {
  RunConfig c;
  c.preset = p;
  c.opt.m0 = std::numeric_limits<double>::quiet_NaN();  // derived from the geometry unless set
  switch (p) {
    case Preset::Experiment1:
      c.levels = {18, 36, 72, 144};  // finest mesh about 1.9e4 elements
      c.grid = 64;
      break;
    case Preset::Experiment2:
      c.hdg.k = 2;
      c.box = {{-1.0, -1.0}, {1.0, 1.0}};
      c.grid = 92;
      c.levels = {92};
      c.opt.epsilon = 1e-4;
      c.opt.max_iters = 90;
      c.opt.tol = 1e-10;
      c.opt.exit_rule = OptConfig::ExitRule::Both;
      c.opt.step0 = 0.25;
      c.opt.damping = 0.5;
      c.opt.smoothing = 4.0;
      break;
    case Preset::Custom:
      c.box = {{-0.4, -0.4}, {0.4, 0.4}};
      c.outer_radius = 0.3;
      c.inner_radius = 0.1;
      c.levels = {16, 32, 64};
      c.grid = 64;
      c.initial_ax = 0.3;
      c.initial_ay = 0.25;
      break;
  }
  return c;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "preset",   "k",         "tau",          "volume_degree", "edge_points", "path_points",
      "solver_tolerance",      "threads",      "levels",        "grid",        "box",
      "outer_radius",          "inner_radius", "tol",           "epsilon",     "m0",
      "max_iters", "step0",    "step_growth",  "damping",       "smoothing",   "beta",
      "c1",       "max_backtracks",            "exit_rule",     "update_multiplier",
      "boundary_points",       "initial_axes", "vtk_every",     "seed"};
  return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "preset") {
    parse_preset(v);  // validated; applied by parse_config
  } else if (key == "k") {
    c.hdg.k = to_int(key, v);
  } else if (key == "tau") {
    c.hdg.tau = to_double(key, v);
  } else if (key == "volume_degree") {
    c.hdg.volume_degree = to_int(key, v);
  } else if (key == "edge_points") {
    c.hdg.edge_points = to_int(key, v);
  } else if (key == "path_points") {
    c.hdg.path_points = to_int(key, v);
  } else if (key == "solver_tolerance") {
    c.hdg.solver_tolerance = to_double(key, v);
  } else if (key == "threads") {
    c.hdg.threads = to_int(key, v);
  } else if (key == "levels") {
    c.levels.clear();
    for (const auto& p : split(v, ',')) c.levels.push_back(to_int(key, p));
    if (c.levels.empty()) throw ConfigError("levels: at least one refinement level is required");
    for (int n : c.levels)
      if (n < 1) throw ConfigError("levels: cell counts must be >= 1");
  } else if (key == "grid") {
    c.grid = to_int(key, v);
    if (c.grid < 1) throw ConfigError("grid must be >= 1");
  } else if (key == "box") {
    const auto b = to_doubles(key, v, 4);
    if (!(b[2] > b[0] && b[3] > b[1])) throw ConfigError("box: expected x0,y0,x1,y1 with x1 > x0, y1 > y0");
    c.box = {{b[0], b[1]}, {b[2], b[3]}};
  } else if (key == "outer_radius") {
    c.outer_radius = to_double(key, v);
  } else if (key == "inner_radius") {
    c.inner_radius = to_double(key, v);
  } else if (key == "tol") {
    c.opt.tol = to_double(key, v);
  } else if (key == "epsilon") {
    c.opt.epsilon = to_double(key, v);
  } else if (key == "m0") {
    c.opt.m0 = to_double(key, v);
  } else if (key == "max_iters") {
    c.opt.max_iters = to_int(key, v);
  } else if (key == "step0") {
    c.opt.step0 = to_double(key, v);
  } else if (key == "step_growth") {
    c.opt.step_growth = to_double(key, v);
  } else if (key == "damping") {
    c.opt.damping = to_double(key, v);
  } else if (key == "smoothing") {
    c.opt.smoothing = to_double(key, v);
  } else if (key == "beta") {
    c.opt.beta = to_double(key, v);
  } else if (key == "c1") {
    c.opt.c1 = to_double(key, v);
  } else if (key == "max_backtracks") {
    c.opt.max_backtracks = to_int(key, v);
  } else if (key == "exit_rule") {
    if (v == "either")
      c.opt.exit_rule = OptConfig::ExitRule::Either;
    else if (v == "both")
      c.opt.exit_rule = OptConfig::ExitRule::Both;
    else
      throw ConfigError("exit_rule: expected either or both, got '" + v + "'");
  } else if (key == "update_multiplier") {
    c.opt.update_multiplier = to_bool(key, v);
  } else if (key == "boundary_points") {
    c.boundary_points = to_int(key, v);
  } else if (key == "initial_axes") {
    const auto a = to_doubles(key, v, 2);
    c.initial_ax = a[0];
    c.initial_ay = a[1];
  } else if (key == "vtk_every") {
    c.vtk_every = to_int(key, v);
    if (c.vtk_every < 0) throw ConfigError("vtk_every must be >= 0");
  } else if (key == "seed") {
    const long long s = to_integer(key, v);
    if (s < 0) throw ConfigError("seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  struct Setting {
    std::string key, value, origin;
  };
  std::vector<Setting> settings;
  auto add = [&](const std::string& text_, const std::string& origin) {
    try {
      auto [k, v] = split_setting(text_);
      settings.push_back({std::move(k), std::move(v), origin});
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ": " + e.what());
    }
  };
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) add(line, "line " + std::to_string(lineno));
  }
  for (const auto& o : overrides) add(o, "--set " + o);

  auto apply = [](const Setting& s, auto&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      throw ConfigError(s.origin + ": " + e.what());
    }
  };
  Preset preset = Preset::Experiment1;
  for (const auto& s : settings)
    if (s.key == "preset") apply(s, [&] { preset = parse_preset(s.value); });
  RunConfig cfg = preset_config(preset);
  for (const auto& s : settings) apply(s, [&] { apply_setting(cfg, s.key, s.value); });
  cfg.hdg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

}  // namespace hdgshape
