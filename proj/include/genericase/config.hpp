#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "genericase/common.hpp"
#include "genericase/domain.hpp"
#include "genericase/estimator.hpp"
#include "genericase/registry.hpp"
#include "genericase/toml.hpp"

namespace genericase {

enum class ExperimentKind {
  SuccessCurve,
  PropertyCurve,
  Density,
  Audit,
  Trajectory,
  Calibrate
};

inline const char* experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SuccessCurve: return "success-curve";
    case ExperimentKind::PropertyCurve: return "property-curve";
    case ExperimentKind::Density: return "density";
    case ExperimentKind::Audit: return "audit";
    case ExperimentKind::Trajectory: return "trajectory";
    case ExperimentKind::Calibrate: return "calibrate";
  }
  return "?";
}

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "success-curve") return ExperimentKind::SuccessCurve;
  if (s == "property-curve") return ExperimentKind::PropertyCurve;
  if (s == "density") return ExperimentKind::Density;
  if (s == "audit") return ExperimentKind::Audit;
  if (s == "trajectory") return ExperimentKind::Trajectory;
  if (s == "calibrate") return ExperimentKind::Calibrate;
  throw ConfigError("unknown experiment kind '" + s +
                    "'; one of: audit, calibrate, density, property-curve, "
                    "success-curve, trajectory");
}

inline SamplingMode parse_sampling_mode(const std::string& s) {
  if (s == "unconditional") return SamplingMode::Unconditional;
  if (s == "conditional-on-valid") return SamplingMode::ConditionalOnValid;
  if (s == "at-valid-times") return SamplingMode::AtValidTimes;
  throw ConfigError("unknown mode '" + s +
                    "'; one of: at-valid-times, conditional-on-valid, unconditional");
}

inline BoundSpec::Template parse_bound_template(const std::string& s) {
  if (s == "constant") return BoundSpec::Template::Constant;
  if (s == "linear") return BoundSpec::Template::Linear;
  if (s == "polynomial") return BoundSpec::Template::Polynomial;
  if (s == "exponential") return BoundSpec::Template::Exponential;
  throw ConfigError("unknown bound template '" + s +
                    "'; one of: constant, exponential, linear, polynomial");
}

/// A fully validated experiment description. Identifier resolution happens
/// at validation time so a bad name fails before any sampling starts.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SuccessCurve;

  std::string domain_name;  // optional except for density
  ParamMap domain_params;
  std::string process_name;
  ParamMap process_params;
  std::string machine_name;
  ParamMap machine_params;
  std::string subset_name;
  std::string oracle_name;

  BoundSpec bound;
  bool bound_set = false;
  std::vector<std::uint64_t> grid;
  std::uint64_t samples_per_n = 0;
  SamplingMode mode = SamplingMode::Unconditional;
  std::uint64_t master_seed = 0;
  Thresholds thresholds;

  std::uint64_t n_max = 0;                       // density
  std::uint64_t cap = kDefaultEnumerationCap;    // sphere enumeration cap

  std::uint64_t step_bound = 1;   // trajectory
  std::uint64_t trajectory_n = 0;
  std::uint64_t trials = 0;

  std::string calibration;     // calibrate: "element-cells" or "sphere-index"
  std::uint64_t calib_at = 0;  // time n, or valid index i on scheduled processes
  double significance = 1e-3;

  std::string out_dir;
  std::string config_path;
  std::string config_text;  // raw bytes, digested into the manifest
};

namespace config_detail {

inline std::uint64_t to_u64(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::Integer || v.integer < 0)
    throw ConfigError("'" + key + "' must be a nonnegative integer");
  return static_cast<std::uint64_t>(v.integer);
}

class TomlReader {
 public:
  explicit TomlReader(const TomlTable& t) : t_(t) {}

  bool has(const std::string& key) const { return t_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback = "") const {
    auto it = t_.find(key);
    if (it == t_.end()) return fallback;
    if (it->second.kind != TomlValue::Kind::String)
      throw ConfigError("'" + key + "' must be a string");
    return it->second.str;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = t_.find(key);
    return it == t_.end() ? fallback : to_u64(it->second, key);
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = t_.find(key);
    if (it == t_.end()) return fallback;
    try {
      return it->second.as_double();
    } catch (const ConfigError&) {
      throw ConfigError("'" + key + "' must be a number");
    }
  }

  std::vector<std::uint64_t> get_u64_array(const std::string& key) const {
    auto it = t_.find(key);
    if (it == t_.end()) return {};
    if (it->second.kind != TomlValue::Kind::Array)
      throw ConfigError("'" + key + "' must be an array");
    std::vector<std::uint64_t> out;
    for (const auto& v : it->second.array) out.push_back(to_u64(v, key));
    return out;
  }

  /// Copies every scalar under `section.` into a parameter bag, minus the
  /// "name" key.
  ParamMap section_params(const std::string& section) const {
    ParamMap p;
    const std::string prefix = section + ".";
    for (const auto& [k, v] : t_) {
      if (k.rfind(prefix, 0) != 0) continue;
      std::string short_key = k.substr(prefix.size());
      if (short_key == "name") continue;
      switch (v.kind) {
        case TomlValue::Kind::Integer: p.set_int(short_key, v.integer); break;
        case TomlValue::Kind::Float: p.set_double(short_key, v.real); break;
        case TomlValue::Kind::String: p.set_string(short_key, v.str); break;
        case TomlValue::Kind::Boolean: p.set_int(short_key, v.boolean ? 1 : 0); break;
        case TomlValue::Kind::Array:
          throw ConfigError("'" + k + "': arrays are not valid parameters");
      }
    }
    return p;
  }

 private:
  const TomlTable& t_;
};

/// Flattens a JSON config into the same keyspace the TOML parser emits, so
/// both formats share one validation path.
inline TomlTable flatten_json(const nlohmann::json& j, const std::string& origin) {
  TomlTable t;
  auto put_scalar = [&origin](TomlTable& out, const std::string& key,
                              const nlohmann::json& v) {
    TomlValue tv;
    if (v.is_string()) {
      tv.kind = TomlValue::Kind::String;
      tv.str = v.get<std::string>();
    } else if (v.is_boolean()) {
      tv.kind = TomlValue::Kind::Boolean;
      tv.boolean = v.get<bool>();
    } else if (v.is_number_integer() || v.is_number_unsigned()) {
      tv.kind = TomlValue::Kind::Integer;
      tv.integer = v.get<std::int64_t>();
    } else if (v.is_number_float()) {
      tv.kind = TomlValue::Kind::Float;
      tv.real = v.get<double>();
    } else {
      throw ConfigError(origin + ": '" + key + "' has an unsupported value type");
    }
    out.emplace(key, std::move(tv));
  };
  if (!j.is_object()) throw ConfigError(origin + ": top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      for (const auto& [k2, v2] : value.items()) {
        if (v2.is_object() || v2.is_array())
          throw ConfigError(origin + ": '" + key + "." + k2 + "' nests too deep");
        put_scalar(t, key + "." + k2, v2);
      }
    } else if (value.is_array()) {
      TomlValue arr;
      arr.kind = TomlValue::Kind::Array;
      for (const auto& item : value) {
        TomlTable tmp;
        put_scalar(tmp, key, item);
        arr.array.push_back(tmp.begin()->second);
      }
      t.emplace(key, std::move(arr));
    } else {
      put_scalar(t, key, value);
    }
  }
  return t;
}

}  // namespace config_detail

/// Builds and validates a config from the flattened key table. Everything
/// that can be rejected statically is rejected here: unknown identifiers,
/// non-increasing grids, missing seed, out-of-range thresholds.
inline ExperimentConfig build_config(const TomlTable& table, const std::string& origin) {
  config_detail::TomlReader r(table);
  ExperimentConfig c;
  c.kind = parse_experiment_kind(r.get_string("kind", ""));

  if (!r.has("seed"))
    throw ConfigError(origin + ": 'seed' is mandatory (no wall-clock default)");
  c.master_seed = r.get_u64("seed", 0);

  c.domain_name = r.get_string("domain.name", "");
  c.domain_params = r.section_params("domain");
  c.process_name = r.get_string("process.name", "");
  c.process_params = r.section_params("process");
  c.machine_name = r.get_string("machine.name", "");
  c.machine_params = r.section_params("machine");
  c.subset_name = r.get_string("subset.name", r.get_string("subset", ""));
  c.oracle_name = r.get_string("oracle.name", r.get_string("oracle", ""));

  if (r.has("bound.template")) {
    c.bound.kind = parse_bound_template(r.get_string("bound.template", "linear"));
    c.bound.c = r.get_double("bound.c", 1.0);
    c.bound.b = r.get_double("bound.b", 0.0);
    c.bound.degree = r.get_u64("bound.degree", 2);
    c.bound.base = r.get_double("bound.base", 2.0);
    if (c.bound.c < 0.0 || c.bound.b < 0.0)
      throw ConfigError(origin + ": bound coefficients must be >= 0");
    if (c.bound.kind == BoundSpec::Template::Exponential && c.bound.base <= 1.0)
      throw ConfigError(origin + ": exponential bound base must be > 1");
    c.bound_set = true;
  }

  c.grid = r.get_u64_array("grid");
  for (std::size_t i = 1; i < c.grid.size(); ++i)
    if (c.grid[i] <= c.grid[i - 1])
      throw ConfigError(origin + ": grid must be strictly increasing");
  c.samples_per_n = r.get_u64("samples", 0);
  c.mode = parse_sampling_mode(r.get_string("mode", "unconditional"));

  c.thresholds.tau = r.get_double("thresholds.tau", 1.0);
  c.thresholds.epsilon = r.get_double("thresholds.epsilon", 0.02);
  c.thresholds.tail_window =
      static_cast<std::size_t>(r.get_u64("thresholds.tail-window", 0));
  c.thresholds.r2_min = r.get_double("thresholds.r2-min", 0.98);
  c.thresholds.z = r.get_double("thresholds.z", 1.96);
  if (!(c.thresholds.tau > 0.0) || c.thresholds.tau > 1.0)
    throw ConfigError(origin + ": thresholds.tau must be in (0, 1]");
  if (!(c.thresholds.epsilon > 0.0))
    throw ConfigError(origin + ": thresholds.epsilon must be > 0");
  if (!(c.thresholds.z > 0.0))
    throw ConfigError(origin + ": thresholds.z must be > 0");

  c.n_max = r.get_u64("n-max", 0);
  c.cap = r.get_u64("cap", kDefaultEnumerationCap);
  c.step_bound = r.get_u64("step-bound", 1);
  c.trajectory_n = r.get_u64("n", 0);
  c.trials = r.get_u64("trials", 0);
  c.calibration = r.get_string("calibration", "");
  c.calib_at = r.get_u64("at", 0);
  c.significance = r.get_double("significance", 1e-3);
  if (!(c.significance > 0.0) || c.significance >= 1.0)
    throw ConfigError(origin + ": significance must be in (0, 1)");
  c.out_dir = r.get_string("out", "");

  // Resolve identifiers now so misspellings fail with the registered list.
  std::shared_ptr<const Domain> domain;
  if (!c.domain_name.empty()) domain = make_domain(c.domain_name, c.domain_params);
  ProcessSpec process;
  if (!c.process_name.empty())
    process = make_process(c.process_name, c.process_params, domain);
  if (!c.machine_name.empty()) make_machine(c.machine_name, c.machine_params);
  if (!c.subset_name.empty()) make_subset(c.subset_name);
  if (!c.oracle_name.empty()) make_oracle(c.oracle_name);

  auto need = [&origin](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(origin + ": " + what);
  };
  switch (c.kind) {
    case ExperimentKind::SuccessCurve:
      need(!c.process_name.empty(), "success-curve needs a [process]");
      need(!c.machine_name.empty(), "success-curve needs a [machine]");
      need(c.bound_set, "success-curve needs a [bound]");
      need(!c.grid.empty(), "success-curve needs a nonempty grid");
      need(c.samples_per_n >= 1, "success-curve needs samples >= 1");
      break;
    case ExperimentKind::PropertyCurve:
      need(!c.process_name.empty(), "property-curve needs a [process]");
      need(!c.subset_name.empty(), "property-curve needs a subset");
      need(!c.grid.empty(), "property-curve needs a nonempty grid");
      need(c.samples_per_n >= 1, "property-curve needs samples >= 1");
      break;
    case ExperimentKind::Density:
      need(!c.domain_name.empty(), "density needs a [domain]");
      need(!c.subset_name.empty(), "density needs a subset");
      need(c.n_max >= 1, "density needs n-max >= 1");
      break;
    case ExperimentKind::Audit:
      need(!c.process_name.empty(), "audit needs a [process]");
      need(!c.machine_name.empty(), "audit needs a [machine]");
      need(!c.oracle_name.empty(), "audit needs an oracle");
      need(!c.grid.empty(), "audit needs a nonempty grid");
      need(c.samples_per_n >= 1, "audit needs samples >= 1");
      break;
    case ExperimentKind::Trajectory:
      need(!c.process_name.empty(), "trajectory needs a [process]");
      need(!c.machine_name.empty(), "trajectory needs a [machine]");
      need(c.trajectory_n >= 1, "trajectory needs n >= 1");
      need(c.trials >= 1, "trajectory needs trials >= 1");
      need(c.step_bound >= 1, "trajectory needs step-bound >= 1");
      break;
    case ExperimentKind::Calibrate:
      need(!c.process_name.empty(), "calibrate needs a [process]");
      need(c.calibration == "element-cells" || c.calibration == "sphere-index",
           "calibrate needs calibration = \"element-cells\" or \"sphere-index\"");
      need(c.calib_at >= 1, "calibrate needs at >= 1");
      need(c.samples_per_n >= 1, "calibrate needs samples >= 1");
      break;
  }
  if (c.mode == SamplingMode::AtValidTimes && !c.process_name.empty()) {
    if (process.schedule == ScheduleKind::Stochastic)
      throw ConfigError(origin + ": at-valid-times needs a deterministic schedule");
  }
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text,
                                          const std::string& origin, bool is_json) {
  TomlTable table;
  if (is_json) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError(origin + ": invalid JSON");
    table = config_detail::flatten_json(j, origin);
  } else {
    table = parse_toml(text, origin);
  }
  ExperimentConfig c = build_config(table, origin);
  c.config_text = text;
  c.config_path = origin;
  return c;
}

/// Loads a .toml or .json experiment config from disk.
inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return parse_config_text(buf.str(), path, is_json);
}

}  // namespace genericase
