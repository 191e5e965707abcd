#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gravgas/errors.hpp"
#include "gravgas/profile.hpp"

namespace gravgas {

enum class GeometryKind { Spherical, Slab };
enum class RunMode { Analytic, Oracle, Compare, Perturbation, CollapseTime };

struct ProfileSpec {
  enum class Kind { Zero, Constant, UniformSlab, Table };
  Kind kind = Kind::Zero;
  double value = 0.0;  // constant
  double b = 0.0, a = 0.0;  // uniform-slab
  std::vector<double> knots, values;
  InterpKind interp = InterpKind::PiecewiseLinear;
  Extrapolation extrap = Extrapolation::ClampToEdge;

  // Materialize over a default domain when the spec itself carries none.
  ProfileFunction build(double domain_lo, double domain_hi) const {
    switch (kind) {
      case Kind::Zero:
        return ProfileFunction({domain_lo, domain_hi}, {0.0, 0.0},
                               InterpKind::PiecewiseConstant, Extrapolation::ZeroOutside);
      case Kind::Constant:
        return ProfileFunction::constant(value, domain_lo, domain_hi);
      case Kind::UniformSlab:
        return ProfileFunction::uniform_slab(b, a);
      case Kind::Table:
        return ProfileFunction(knots, values, interp, extrap);
    }
    throw ConfigError("unreachable profile kind");
  }
};

struct ScenarioConfig {
  GeometryKind geometry = GeometryKind::Spherical;
  RunMode mode = RunMode::Analytic;
  double gamma = 1.0;
  ProfileSpec density;
  ProfileSpec velocity;  // Kind::Zero by default
  std::vector<double> times;
  int grid_n = 256;
  double grid_min = std::nan("");  // default chosen per geometry
  double grid_max = 1.0;
  double solver_tol = 1e-12;
  double kepler_guard = 1e-8;
  double collapse_guard = 1e-8;
  int series_order = 20;
  int oracle_n = 64;
  double oracle_rtol = 1e-12;
  double compare_density_tol = 2e-2;
  double compare_velocity_tol = 1e-6;
  double compare_mass_tol = 1e-6;
  std::string perturbation_mode = "gravitating";
  double perturbation_t_end = 0.0;  // 0 = auto from the growth rate
  double perturbation_sound_speed = 1.0;
  double perturbation_wavenumber = 1.0;
  std::string output_dir = "out";
};

namespace detail {

struct KeyValue {
  std::string value;
  int line;
  mutable bool used = false;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const KeyValue& kv) {
  std::istringstream ss(kv.value);
  double v;
  if (!(ss >> v) || !(ss >> std::ws).eof())
    throw ConfigError("line " + std::to_string(kv.line) + ": field '" + key +
                      "' is not a number: '" + kv.value + "'");
  return v;
}

inline int parse_int(const std::string& key, const KeyValue& kv) {
  const double v = parse_double(key, kv);
  if (v != std::floor(v))
    throw ConfigError("line " + std::to_string(kv.line) + ": field '" + key +
                      "' must be an integer");
  return static_cast<int>(v);
}

inline std::vector<double> parse_list(const std::string& key, const KeyValue& kv) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(kv.value);
  while (std::getline(ss, item, ',')) {
    std::istringstream vs(trim(item));
    double v;
    if (!(vs >> v) || !(vs >> std::ws).eof())
      throw ConfigError("line " + std::to_string(kv.line) + ": field '" + key +
                        "' has a bad list entry: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty())
    throw ConfigError("line " + std::to_string(kv.line) + ": field '" + key + "' is empty");
  return out;
}

inline ProfileSpec parse_profile(const std::string& prefix,
                                 std::map<std::string, KeyValue>& kvs, bool is_density) {
  ProfileSpec p;
  auto find = [&](const std::string& suffix) -> const KeyValue* {
    auto it = kvs.find(prefix + "." + suffix);
    if (it == kvs.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  };
  const KeyValue* kind = find("kind");
  if (!kind) {
    if (is_density) throw ConfigError("missing field '" + prefix + ".kind'");
    p.kind = ProfileSpec::Kind::Zero;
    return p;
  }
  const std::string k = kind->value;
  if (k == "zero") {
    p.kind = ProfileSpec::Kind::Zero;
  } else if (k == "constant") {
    p.kind = ProfileSpec::Kind::Constant;
    const KeyValue* v = find("value");
    if (!v) throw ConfigError("missing field '" + prefix + ".value'");
    p.value = parse_double(prefix + ".value", *v);
  } else if (k == "uniform-slab") {
    p.kind = ProfileSpec::Kind::UniformSlab;
    const KeyValue* b = find("b");
    const KeyValue* a = find("a");
    if (!b || !a) throw ConfigError("uniform-slab profile needs '" + prefix + ".b' and '.a'");
    p.b = parse_double(prefix + ".b", *b);
    p.a = parse_double(prefix + ".a", *a);
  } else if (k == "table") {
    p.kind = ProfileSpec::Kind::Table;
    const KeyValue* knots = find("knots");
    const KeyValue* values = find("values");
    if (!knots || !values)
      throw ConfigError("table profile needs '" + prefix + ".knots' and '.values'");
    p.knots = parse_list(prefix + ".knots", *knots);
    p.values = parse_list(prefix + ".values", *values);
    if (const KeyValue* interp = find("interp")) {
      if (interp->value == "linear")
        p.interp = InterpKind::PiecewiseLinear;
      else if (interp->value == "constant")
        p.interp = InterpKind::PiecewiseConstant;
      else
        throw ConfigError("line " + std::to_string(interp->line) +
                          ": interp must be 'linear' or 'constant'");
    }
    if (const KeyValue* ex = find("extrapolation")) {
      if (ex->value == "clamp")
        p.extrap = Extrapolation::ClampToEdge;
      else if (ex->value == "zero")
        p.extrap = Extrapolation::ZeroOutside;
      else
        throw ConfigError("line " + std::to_string(ex->line) +
                          ": extrapolation must be 'clamp' or 'zero'");
    }
  } else {
    throw ConfigError("line " + std::to_string(kind->line) + ": unknown profile kind '" + k +
                      "'");
  }
  return p;
}

}  // namespace detail

// Flat key-value config: `section.key = value`, one per line, `#` comments.
inline ScenarioConfig parse_config(const std::string& text) {
  std::map<std::string, detail::KeyValue> kvs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (kvs.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kvs[key] = {value, lineno, false};
  }

  ScenarioConfig cfg;
  auto take = [&](const std::string& key) -> const detail::KeyValue* {
    auto it = kvs.find(key);
    if (it == kvs.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  };

  if (const auto* kv = take("geometry")) {
    if (kv->value == "spherical")
      cfg.geometry = GeometryKind::Spherical;
    else if (kv->value == "slab")
      cfg.geometry = GeometryKind::Slab;
    else
      throw ConfigError("line " + std::to_string(kv->line) +
                        ": geometry must be 'spherical' or 'slab'");
  } else {
    throw ConfigError("missing field 'geometry'");
  }
  if (const auto* kv = take("mode")) {
    if (kv->value == "analytic")
      cfg.mode = RunMode::Analytic;
    else if (kv->value == "oracle")
      cfg.mode = RunMode::Oracle;
    else if (kv->value == "compare")
      cfg.mode = RunMode::Compare;
    else if (kv->value == "perturbation")
      cfg.mode = RunMode::Perturbation;
    else if (kv->value == "collapse-time")
      cfg.mode = RunMode::CollapseTime;
    else
      throw ConfigError("line " + std::to_string(kv->line) + ": unknown mode '" + kv->value +
                        "'");
  }
  if (const auto* kv = take("gamma")) cfg.gamma = detail::parse_double("gamma", *kv);
  if (!(cfg.gamma > 0.0)) throw ConfigError("gamma must be positive");

  cfg.density = detail::parse_profile("density", kvs, true);
  cfg.velocity = detail::parse_profile("velocity", kvs, false);

  if (const auto* kv = take("times")) cfg.times = detail::parse_list("times", *kv);
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    if (cfg.times[i] < 0.0) throw ConfigError("times must be nonnegative");
    if (i > 0 && !(cfg.times[i] > cfg.times[i - 1]))
      throw ConfigError("times must be strictly increasing");
  }

  if (const auto* kv = take("grid.n")) cfg.grid_n = detail::parse_int("grid.n", *kv);
  if (cfg.grid_n < 2) throw ConfigError("grid.n must be >= 2");
  if (const auto* kv = take("grid.min")) cfg.grid_min = detail::parse_double("grid.min", *kv);
  if (const auto* kv = take("grid.max")) cfg.grid_max = detail::parse_double("grid.max", *kv);

  if (const auto* kv = take("solver.tol")) cfg.solver_tol = detail::parse_double("solver.tol", *kv);
  if (const auto* kv = take("solver.kepler_guard"))
    cfg.kepler_guard = detail::parse_double("solver.kepler_guard", *kv);
  if (const auto* kv = take("solver.collapse_guard"))
    cfg.collapse_guard = detail::parse_double("solver.collapse_guard", *kv);
  if (const auto* kv = take("solver.series_order"))
    cfg.series_order = detail::parse_int("solver.series_order", *kv);
  if (!(cfg.solver_tol > 0.0) || !(cfg.kepler_guard > 0.0) || !(cfg.collapse_guard > 0.0))
    throw ConfigError("solver tolerances must be positive");

  if (const auto* kv = take("oracle.n")) cfg.oracle_n = detail::parse_int("oracle.n", *kv);
  if (const auto* kv = take("oracle.rtol"))
    cfg.oracle_rtol = detail::parse_double("oracle.rtol", *kv);
  if (const auto* kv = take("compare.density_tol"))
    cfg.compare_density_tol = detail::parse_double("compare.density_tol", *kv);
  if (const auto* kv = take("compare.velocity_tol"))
    cfg.compare_velocity_tol = detail::parse_double("compare.velocity_tol", *kv);
  if (const auto* kv = take("compare.mass_tol"))
    cfg.compare_mass_tol = detail::parse_double("compare.mass_tol", *kv);

  if (const auto* kv = take("perturbation.mode")) {
    if (kv->value != "gravitating" && kv->value != "sound")
      throw ConfigError("line " + std::to_string(kv->line) +
                        ": perturbation.mode must be 'gravitating' or 'sound'");
    cfg.perturbation_mode = kv->value;
  }
  if (const auto* kv = take("perturbation.t_end"))
    cfg.perturbation_t_end = detail::parse_double("perturbation.t_end", *kv);
  if (const auto* kv = take("perturbation.sound_speed"))
    cfg.perturbation_sound_speed = detail::parse_double("perturbation.sound_speed", *kv);
  if (const auto* kv = take("perturbation.wavenumber"))
    cfg.perturbation_wavenumber = detail::parse_double("perturbation.wavenumber", *kv);

  if (const auto* kv = take("output.dir")) cfg.output_dir = kv->value;

  for (const auto& [key, kv] : kvs)
    if (!kv.used)
      throw ConfigError("line " + std::to_string(kv.line) + ": unknown field '" + key + "'");
  return cfg;
}

}  // namespace gravgas
