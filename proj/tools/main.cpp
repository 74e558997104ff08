#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "genericase/experiment.hpp"
#include "genericase/registry.hpp"

namespace {

struct SharedFlags {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir;
  unsigned threads = 1;
  std::uint64_t cap = 0;
  bool cap_given = false;
  std::string config_path;
};

void add_run_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("config", f.config_path, "experiment config (.toml or .json)")
      ->required();
  cmd->add_option("--seed", f.seed, "override the config's master seed")
      ->each([&f](const std::string&) { f.seed_given = true; });
  cmd->add_option("--out", f.out_dir, "output directory (overrides config and env)");
  cmd->add_option("--threads", f.threads,
                  "worker threads for replica sampling (never affects results)");
  cmd->add_option("--cap", f.cap, "sphere-enumeration cap")
      ->each([&f](const std::string&) { f.cap_given = true; });
}

int execute(const SharedFlags& f, bool require_calibrate) {
  genericase::ExperimentConfig cfg = genericase::load_config(f.config_path);
  if (require_calibrate && cfg.kind != genericase::ExperimentKind::Calibrate)
    throw genericase::ConfigError("calibrate expects a config with kind = "
                                  "\"calibrate\", got \"" +
                                  std::string(experiment_kind_name(cfg.kind)) + "\"");
  genericase::ExperimentConfig resolved = cfg;
  if (f.seed_given) resolved.master_seed = f.seed;
  if (!f.out_dir.empty()) resolved.out_dir = f.out_dir;
  if (f.cap_given) resolved.cap = f.cap;
  genericase::ExperimentOutcome outcome =
      genericase::run_experiment(resolved, f.threads == 0 ? 1 : f.threads);
  std::cout << outcome.summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measurement laboratory for generic-case time complexity"};
  app.require_subcommand(1);

  SharedFlags run_flags;
  SharedFlags calib_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "execute an experiment config");
  add_run_flags(run_cmd, run_flags);
  CLI::App* list_cmd = app.add_subcommand(
      "list", "list registered domains, processes, machines, subsets, oracles");
  CLI::App* calib_cmd =
      app.add_subcommand("calibrate", "run a calibration config (chi-square checks)");
  add_run_flags(calib_cmd, calib_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) {
      std::cout << genericase::registry_listing();
      return 0;
    }
    if (run_cmd->parsed()) return execute(run_flags, false);
    return execute(calib_flags, true);
  } catch (const genericase::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const genericase::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
