#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "genericase/common.hpp"
#include "genericase/config.hpp"
#include "genericase/density.hpp"
#include "genericase/estimator.hpp"
#include "genericase/io.hpp"
#include "genericase/registry.hpp"
#include "genericase/stats.hpp"

namespace genericase {

struct ExperimentOutcome {
  std::string out_dir;
  std::vector<std::string> files;  // emitted file paths
  std::vector<std::string> warnings;
  std::string summary;  // one-screen report for stdout
};

namespace detail {

inline std::string config_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

inline nlohmann::json params_json(const std::string& name, const ParamMap& params) {
  nlohmann::json j;
  j["name"] = name;
  for (const auto& [k, v] : params.ints()) j[k] = v;
  for (const auto& [k, v] : params.doubles()) j[k] = v;
  for (const auto& [k, v] : params.strings()) j[k] = v;
  return j;
}

inline nlohmann::json thresholds_json(const Thresholds& th) {
  nlohmann::json j;
  j["tau"] = th.tau;
  j["epsilon"] = th.epsilon;
  j["tailWindow"] = th.tail_window;  // 0 = last third of the points
  j["r2Min"] = th.r2_min;
  j["z"] = th.z;
  return j;
}

inline nlohmann::json resolved_json(const ExperimentConfig& cfg, const BoundSpec& bound,
                                    bool bound_used) {
  nlohmann::json j;
  j["kind"] = experiment_kind_name(cfg.kind);
  j["seed"] = cfg.master_seed;
  j["mode"] = sampling_mode_name(cfg.mode);
  if (!cfg.grid.empty()) j["grid"] = cfg.grid;
  if (cfg.samples_per_n) j["samples"] = cfg.samples_per_n;
  j["cap"] = cfg.cap;
  if (!cfg.domain_name.empty())
    j["domain"] = params_json(cfg.domain_name, cfg.domain_params);
  if (!cfg.process_name.empty())
    j["process"] = params_json(cfg.process_name, cfg.process_params);
  if (!cfg.machine_name.empty())
    j["machine"] = params_json(cfg.machine_name, cfg.machine_params);
  if (!cfg.subset_name.empty()) j["subset"] = cfg.subset_name;
  if (!cfg.oracle_name.empty()) j["oracle"] = cfg.oracle_name;
  if (bound_used) j["bound"] = bound.describe();
  j["thresholds"] = thresholds_json(cfg.thresholds);
  if (cfg.n_max) j["nMax"] = cfg.n_max;
  if (cfg.kind == ExperimentKind::Trajectory) {
    j["stepBound"] = cfg.step_bound;
    j["n"] = cfg.trajectory_n;
    j["trials"] = cfg.trials;
  }
  if (cfg.kind == ExperimentKind::Calibrate) {
    j["calibration"] = cfg.calibration;
    j["at"] = cfg.calib_at;
    j["significance"] = cfg.significance;
  }
  return j;
}

inline nlohmann::json verdict_json(const Verdict& v, const ExperimentConfig& cfg,
                                   const std::string& digest,
                                   const std::vector<std::string>& warnings) {
  nlohmann::json j;
  j["classification"] = classification_name(v.classification);
  j["thresholds"] = thresholds_json(cfg.thresholds);
  nlohmann::json d;
  d["tailWindowUsed"] = v.tail_window;
  d["tailMean"] = v.tail_mean;
  d["tailMin"] = v.tail_min;
  d["tailMax"] = v.tail_max;
  d["expSlope"] = v.exp_slope;  // NaN serializes as null when not computed
  d["expR2"] = v.exp_r2;
  j["diagnostics"] = d;
  j["note"] = v.note;
  j["seed"] = cfg.master_seed;
  j["mode"] = sampling_mode_name(cfg.mode);
  j["configDigest"] = digest;
  j["warnings"] = warnings;
  return j;
}

inline std::string curve_csv(const Curve& curve, const ExperimentConfig& cfg) {
  std::string csv = "n,N,k,pHat,ciLow,ciHigh,mode\n";
  for (const auto& p : curve.points) {
    csv += std::to_string(p.n) + "," + std::to_string(p.samples) + "," +
           std::to_string(p.successes) + "," + format_double(p.p_hat) + "," +
           format_double(p.ci.low) + "," + format_double(p.ci.high) + "," +
           sampling_mode_name(cfg.mode) + "\n";
  }
  return csv;
}

inline Verdict classify_or_skip(const std::vector<ClassifyPoint>& pts,
                                const Thresholds& th,
                                std::vector<std::string>& warnings) {
  if (pts.size() >= 4) return classify_limit(pts, th);
  Verdict v;
  v.classification = Classification::Inconclusive;
  v.note = "fewer than 4 points; classification skipped";
  warnings.push_back(v.note);
  return v;
}

struct Emitter {
  std::string out_dir;
  ExperimentOutcome* outcome;
  nlohmann::json manifest_files = nlohmann::json::array();

  void emit(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    atomic_write_file(path, content);
    outcome->files.push_back(path);
    manifest_files.push_back(name);
  }
};

inline void finish_manifest(Emitter& em, nlohmann::json manifest) {
  manifest["files"] = em.manifest_files;
  manifest["files"].push_back("manifest.json");
  em.emit("manifest.json", manifest.dump(2) + "\n");
}

}  // namespace detail

/// Output directory precedence: config `out`, then $GENERICASE_OUT/<config
/// stem>, then ./out/<config stem>.
inline std::string resolve_out_dir(const ExperimentConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  const char* env = std::getenv("GENERICASE_OUT");
  const std::string base = (env && *env) ? env : "out";
  return (std::filesystem::path(base) / detail::config_stem(cfg.config_path)).string();
}

/// Executes a validated config and persists its outputs. Thread count may
/// only change wall time, never bytes: all aggregation is order-independent
/// integer summation over counter-derived replica streams.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                        unsigned threads = 1) {
  ExperimentOutcome outcome;
  outcome.out_dir = resolve_out_dir(cfg);
  const std::string digest = hex64(fnv1a64(cfg.config_text));
  const BoundSpec audit_default{BoundSpec::Template::Linear, 1.0, 1.0};
  const bool wants_bound =
      cfg.kind == ExperimentKind::SuccessCurve || cfg.kind == ExperimentKind::Audit;
  const BoundSpec bound = cfg.bound_set ? cfg.bound : audit_default;

  nlohmann::json manifest;
  manifest["artifactVersion"] = kArtifactVersion;
  manifest["configDigest"] = digest;
  manifest["configPath"] = cfg.config_path;
  manifest["resolved"] = detail::resolved_json(cfg, bound, wants_bound);

  detail::Emitter em{outcome.out_dir, &outcome};
  char line[256];
  std::string& text = outcome.summary;
  text = std::string(experiment_kind_name(cfg.kind)) + " (" + cfg.config_path + ")\n";

  switch (cfg.kind) {
    case ExperimentKind::SuccessCurve:
    case ExperimentKind::PropertyCurve: {
      std::shared_ptr<const Domain> domain;
      if (!cfg.domain_name.empty()) domain = make_domain(cfg.domain_name, cfg.domain_params);
      ProcessSpec spec = make_process(cfg.process_name, cfg.process_params, domain);
      Curve curve;
      if (cfg.kind == ExperimentKind::SuccessCurve) {
        auto machine = make_machine(cfg.machine_name, cfg.machine_params);
        curve = estimate_success_curve(spec, *machine, bound, cfg.grid,
                                       cfg.samples_per_n, cfg.master_seed, cfg.mode,
                                       threads, cfg.thresholds.z);
        text += "  process " + spec.name + " on " + spec.domain->name() + ", machine " +
                machine->name() + ", bound " + bound.describe() + "\n";
      } else {
        SubsetSpec subset = make_subset(cfg.subset_name);
        curve = estimate_property_curve(spec, subset, cfg.grid, cfg.samples_per_n,
                                        cfg.master_seed, cfg.mode, threads,
                                        cfg.thresholds.z);
        text += "  process " + spec.name + " on " + spec.domain->name() + ", subset " +
                subset.name + "\n";
      }
      outcome.warnings = curve.warnings;
      Verdict v = detail::classify_or_skip(to_classify_points(curve), cfg.thresholds,
                                           outcome.warnings);

      em.emit("curve.csv", detail::curve_csv(curve, cfg));
      em.emit("verdict.json",
              detail::verdict_json(v, cfg, digest, outcome.warnings).dump(2) + "\n");
      manifest["verdict"] = classification_name(v.classification);

      text += "  mode " + std::string(sampling_mode_name(cfg.mode)) + ", samples/n " +
              std::to_string(cfg.samples_per_n) + ", seed " +
              std::to_string(cfg.master_seed) + "\n";
      std::snprintf(line, sizeof(line), "  %8s %8s %8s %8s  %s\n", "n", "N", "k",
                    "pHat", "ci95");
      text += line;
      for (const auto& p : curve.points) {
        std::snprintf(line, sizeof(line), "  %8llu %8llu %8llu %8.4f  [%.4f, %.4f]\n",
                      static_cast<unsigned long long>(p.n),
                      static_cast<unsigned long long>(p.samples),
                      static_cast<unsigned long long>(p.successes), p.p_hat, p.ci.low,
                      p.ci.high);
        text += line;
      }
      std::snprintf(line, sizeof(line),
                    "  verdict %s (tail mean %.4f, min %.4f; exp fit R2 %.4f)\n",
                    classification_name(v.classification), v.tail_mean, v.tail_min,
                    v.exp_r2);
      text += line;
      break;
    }

    case ExperimentKind::Density: {
      auto domain = make_domain(cfg.domain_name, cfg.domain_params);
      SubsetSpec subset = make_subset(cfg.subset_name);
      DensitySequence seq = density_sequence(*domain, subset, cfg.n_max, cfg.cap);

      std::string csv =
          "n,sphereCount,sphereHits,sphereDensity,sphereDensityDecimal,ballDensity,"
          "ballDensityDecimal\n";
      for (const auto& p : seq.points) {
        csv += std::to_string(p.n) + "," + std::to_string(p.sphere_count) + "," +
               std::to_string(p.sphere_hits) + "," + rational_text(p.sphere_density) +
               "," + format_double(rational_to_double(p.sphere_density)) + "," +
               rational_text(p.ball_density) + "," +
               format_double(rational_to_double(p.ball_density)) + "\n";
      }
      em.emit("density.csv", csv);

      std::vector<ClassifyPoint> pts;
      for (const auto& p : seq.points)
        pts.push_back({p.n, rational_to_double(p.ball_density), 0});
      Verdict v = detail::classify_or_skip(pts, cfg.thresholds, outcome.warnings);
      nlohmann::json vj = detail::verdict_json(v, cfg, digest, outcome.warnings);
      vj["window"] = seq.window;
      vj["ballMin"] = rational_text(seq.ball_min);
      vj["ballMax"] = rational_text(seq.ball_max);
      vj["sphereMin"] = rational_text(seq.sphere_min);
      vj["sphereMax"] = rational_text(seq.sphere_max);
      em.emit("verdict.json", vj.dump(2) + "\n");
      manifest["verdict"] = classification_name(v.classification);

      text += "  domain " + seq.domain_name + ", subset " + seq.subset_name +
              ", n up to " + std::to_string(cfg.n_max) + "\n";
      for (const auto& p : seq.points) {
        std::snprintf(line, sizeof(line), "  n=%-3llu sphere %s  ball %s\n",
                      static_cast<unsigned long long>(p.n),
                      rational_text(p.sphere_density).c_str(),
                      rational_text(p.ball_density).c_str());
        text += line;
      }
      text += "  windowed ball extrema over last " + std::to_string(seq.window) +
              " points: [" + rational_text(seq.ball_min) + ", " +
              rational_text(seq.ball_max) + "]\n";
      text += "  verdict " + std::string(classification_name(v.classification)) + "\n";
      break;
    }

    case ExperimentKind::Audit: {
      std::shared_ptr<const Domain> domain;
      if (!cfg.domain_name.empty()) domain = make_domain(cfg.domain_name, cfg.domain_params);
      ProcessSpec spec = make_process(cfg.process_name, cfg.process_params, domain);
      auto machine = make_machine(cfg.machine_name, cfg.machine_params);
      auto oracle = make_oracle(cfg.oracle_name);
      AuditResult audit =
          correctness_audit(spec, *machine, oracle, bound, cfg.grid, cfg.samples_per_n,
                            cfg.master_seed, threads, cfg.thresholds.z);
      outcome.warnings = audit.warnings;

      std::string csv =
          "n,N,produced,coverage,coverageLow,coverageHigh,matches,correctness,"
          "correctnessLow,correctnessHigh\n";
      for (const auto& p : audit.points) {
        csv += std::to_string(p.n) + "," + std::to_string(p.samples) + "," +
               std::to_string(p.produced) + "," + format_double(p.coverage) + "," +
               format_double(p.coverage_ci.low) + "," +
               format_double(p.coverage_ci.high) + "," + std::to_string(p.matches) + ",";
        if (p.correctness_defined) {
          csv += format_double(p.correctness) + "," +
                 format_double(p.correctness_ci.low) + "," +
                 format_double(p.correctness_ci.high);
        } else {
          csv += ",,";
        }
        csv += "\n";
      }
      em.emit("audit.csv", csv);

      text += "  machine " + machine->name() + " vs oracle " + cfg.oracle_name +
              " under " + spec.name + ", fuel " + bound.describe() + "\n";
      for (const auto& p : audit.points) {
        if (p.correctness_defined) {
          std::snprintf(line, sizeof(line),
                        "  n=%-6llu coverage %.4f [%.4f, %.4f]  correctness %.4f "
                        "[%.4f, %.4f]\n",
                        static_cast<unsigned long long>(p.n), p.coverage,
                        p.coverage_ci.low, p.coverage_ci.high, p.correctness,
                        p.correctness_ci.low, p.correctness_ci.high);
        } else {
          std::snprintf(line, sizeof(line),
                        "  n=%-6llu coverage %.4f [%.4f, %.4f]  correctness missing\n",
                        static_cast<unsigned long long>(p.n), p.coverage,
                        p.coverage_ci.low, p.coverage_ci.high);
        }
        text += line;
      }
      break;
    }

    case ExperimentKind::Trajectory: {
      std::shared_ptr<const Domain> domain;
      if (!cfg.domain_name.empty()) domain = make_domain(cfg.domain_name, cfg.domain_params);
      ProcessSpec spec = make_process(cfg.process_name, cfg.process_params, domain);
      auto machine = make_machine(cfg.machine_name, cfg.machine_params);
      TrajectoryResult t =
          trajectory_halt_fraction(spec, *machine, cfg.step_bound, cfg.trajectory_n,
                                   cfg.trials, cfg.master_seed, threads);

      std::string csv =
          "trials,n,stepBound,meetingThird,prAtLeastThird,totalHalts,meanFraction\n";
      csv += std::to_string(t.trials) + "," + std::to_string(t.n) + "," +
             std::to_string(t.step_bound) + "," +
             std::to_string(t.trajectories_meeting_third) + "," +
             format_double(t.pr_at_least_third) + "," + std::to_string(t.total_halts) +
             "," + format_double(t.mean_fraction) + "\n";
      em.emit("trajectory.csv", csv);

      std::snprintf(line, sizeof(line),
                    "  machine %s, %llu trials of W_1..W_%llu, step bound %llu\n",
                    machine->name().c_str(), static_cast<unsigned long long>(t.trials),
                    static_cast<unsigned long long>(t.n),
                    static_cast<unsigned long long>(t.step_bound));
      text += line;
      std::snprintf(line, sizeof(line),
                    "  Pr(halting fraction >= 1/3) = %.4f, mean fraction %.4f\n",
                    t.pr_at_least_third, t.mean_fraction);
      text += line;
      break;
    }

    case ExperimentKind::Calibrate: {
      std::shared_ptr<const Domain> domain;
      if (!cfg.domain_name.empty()) domain = make_domain(cfg.domain_name, cfg.domain_params);
      ProcessSpec spec = make_process(cfg.process_name, cfg.process_params, domain);
      const std::uint64_t sample_time =
          spec.valid_time ? spec.valid_time(cfg.calib_at) : cfg.calib_at;

      std::vector<std::string> cell_names;
      std::vector<std::uint64_t> observed;
      std::vector<double> expected;

      if (cfg.calibration == "element-cells") {
        const std::uint64_t cell_count = spec.domain->sphere_cardinality(cfg.calib_at);
        if (cell_count > 65536)
          throw ResourceLimitError("calibration sphere has " +
                                   std::to_string(cell_count) +
                                   " cells, exceeding the 65536-cell limit");
        std::map<std::string, std::size_t> index;
        for (const Element& e : spec.domain->enumerate_sphere(cfg.calib_at, cfg.cap)) {
          index.emplace(canonical_text(e), cell_names.size());
          cell_names.push_back(canonical_text(e));
        }
        observed.assign(cell_names.size(), 0);
        expected.assign(cell_names.size(),
                        static_cast<double>(cfg.samples_per_n) /
                            static_cast<double>(cell_names.size()));
        for (std::uint64_t r = 0; r < cfg.samples_per_n; ++r) {
          StepOutput out = sample_at(spec, sample_time, cfg.master_seed, r);
          if (!out.valid) throw Error("auxiliary output at a valid time");
          auto it = index.find(canonical_text(out.element));
          if (it == index.end())
            throw Error("sample outside the expected sphere: " +
                        canonical_text(out.element));
          ++observed[it->second];
        }
      } else {  // sphere-index
        auto wd = std::dynamic_pointer_cast<const WordDomain>(spec.domain);
        if (!wd) throw ConfigError("sphere-index calibration needs a word domain");
        const std::uint64_t m = wd->alphabet().size();
        const std::uint64_t ball = ball_cardinality(m, sample_time);
        observed.assign(static_cast<std::size_t>(sample_time) + 1, 0);
        for (std::uint64_t j = 0; j <= sample_time; ++j) {
          cell_names.push_back("sphere-" + std::to_string(j));
          expected.push_back(static_cast<double>(cfg.samples_per_n) *
                             static_cast<double>(detail::checked_pow(m, j)) /
                             static_cast<double>(ball));
        }
        for (std::uint64_t r = 0; r < cfg.samples_per_n; ++r) {
          StepOutput out = sample_at(spec, sample_time, cfg.master_seed, r);
          const std::uint64_t len = out.element.get<Word>().letters.size();
          ++observed[static_cast<std::size_t>(len)];
        }
      }

      ChiSquareResult chi = chi_square_test(observed, expected);
      const bool pass = chi.p_value >= cfg.significance;

      std::string csv = "cell,observed,expected\n";
      for (std::size_t i = 0; i < cell_names.size(); ++i)
        csv += cell_names[i] + "," + std::to_string(observed[i]) + "," +
               format_double(expected[i]) + "\n";
      em.emit("calibration.csv", csv);

      nlohmann::json cj;
      cj["calibration"] = cfg.calibration;
      cj["at"] = cfg.calib_at;
      cj["sampleTime"] = sample_time;
      cj["cells"] = cell_names.size();
      cj["samples"] = cfg.samples_per_n;
      cj["statistic"] = chi.statistic;
      cj["df"] = chi.df;
      cj["pValue"] = chi.p_value;
      cj["significance"] = cfg.significance;
      cj["pass"] = pass;
      cj["seed"] = cfg.master_seed;
      cj["configDigest"] = digest;
      em.emit("calibration.json", cj.dump(2) + "\n");
      manifest["verdict"] = pass ? "calibration-pass" : "calibration-fail";

      std::snprintf(line, sizeof(line),
                    "  %s over %zu cells at time %llu, N=%llu\n",
                    cfg.calibration.c_str(), cell_names.size(),
                    static_cast<unsigned long long>(sample_time),
                    static_cast<unsigned long long>(cfg.samples_per_n));
      text += line;
      std::snprintf(line, sizeof(line),
                    "  chi-square %.2f (df %llu), p = %.6g -> %s at %.0e\n",
                    chi.statistic, static_cast<unsigned long long>(chi.df),
                    chi.p_value, pass ? "pass" : "FAIL", cfg.significance);
      text += line;
      break;
    }
  }

  manifest["warnings"] = outcome.warnings;
  detail::finish_manifest(em, std::move(manifest));
  for (const auto& w : outcome.warnings) text += "  warning: " + w + "\n";
  text += "  wrote " + outcome.out_dir + "/{";
  for (std::size_t i = 0; i < em.manifest_files.size(); ++i) {
    if (i) text += ", ";
    text += em.manifest_files[i].get<std::string>();
  }
  text += "}\n";
  return outcome;
}

}  // namespace genericase
