// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and time budgets are pinned here, not configurable.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "genericase/config.hpp"
#include "genericase/density.hpp"
#include "genericase/estimator.hpp"
#include "genericase/experiment.hpp"
#include "genericase/registry.hpp"
#include "oracles.hpp"

using namespace genericase;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

void expect(bool ok, const std::string& what) {
  if (!ok) note("FAILED: " + what);
}

void expect_near(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "FAILED: %s (got %.6f, want %.6f +/- %.6f)",
                  what.c_str(), got, want, tol);
    note(buf);
  }
}

void criterion(int id, const std::string& label, double budget_seconds,
               const std::function<void()>& body) {
  g_notes.clear();
  const auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    note(std::string("FAILED: unexpected exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0 && secs > budget_seconds) {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "FAILED: took %.1fs, budget %.0fs", secs,
                  budget_seconds);
    note(buf);
  }
  const bool pass = g_notes.empty();
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %2d: %s  (%.1fs)\n", pass ? "PASS" : "FAIL", id,
              label.c_str(), secs);
  for (const auto& n : g_notes) std::printf("         %s\n", n.c_str());
  std::fflush(stdout);
}

fs::path config_dir() { return fs::path(GENERICASE_CONFIG_DIR); }

ExperimentConfig load(const std::string& name) {
  return load_config((config_dir() / name).string());
}

Curve run_curve(const ExperimentConfig& cfg) {
  std::shared_ptr<const Domain> domain;
  if (!cfg.domain_name.empty()) domain = make_domain(cfg.domain_name, cfg.domain_params);
  ProcessSpec spec = make_process(cfg.process_name, cfg.process_params, domain);
  if (cfg.kind == ExperimentKind::PropertyCurve) {
    return estimate_property_curve(spec, make_subset(cfg.subset_name), cfg.grid,
                                   cfg.samples_per_n, cfg.master_seed, cfg.mode, 1,
                                   cfg.thresholds.z);
  }
  auto machine = make_machine(cfg.machine_name, cfg.machine_params);
  return estimate_success_curve(spec, *machine, cfg.bound, cfg.grid, cfg.samples_per_n,
                                cfg.master_seed, cfg.mode, 1, cfg.thresholds.z);
}

double p_hat_at(const Curve& curve, std::uint64_t n) {
  for (const auto& p : curve.points)
    if (p.n == n) return p.p_hat;
  note("FAILED: curve has no point at n=" + std::to_string(n));
  return -1.0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_root() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("genericase-acceptance-" + std::to_string(static_cast<long>(getpid())));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

}  // namespace

int main() {
  std::printf("acceptance checks, library version %s\n", kArtifactVersion);

  criterion(1, "ball cardinality equals exhaustive enumeration (m=2,3; n<=12)", 10, [] {
    for (int m : {2, 3}) {
      auto dom = make_word_domain(m);
      std::uint64_t total = 0;
      for (std::uint64_t n = 0; n <= 12; ++n) {
        std::uint64_t count = 0;
        dom->for_each_in_sphere(n, [&](const Element&) { ++count; });
        total += count;
        expect(total == ball_cardinality(static_cast<std::uint64_t>(m), n),
               "ball(" + std::to_string(m) + "," + std::to_string(n) + ")");
      }
    }
  });

  criterion(2, "two-element table: flat curve at 1/2, Negative / AtLeastTau", 5, [] {
    auto cfg = load("two-element.toml");
    expect(cfg.samples_per_n == 10000, "config pins 10^4 samples per point");
    Curve curve = run_curve(cfg);
    for (std::uint64_t n : {10ULL, 100ULL, 1000ULL})
      expect_near(p_hat_at(curve, n), 0.5, 0.02,
                  "pHat at n=" + std::to_string(n));
    auto pts = to_classify_points(curve);
    Thresholds at_one = cfg.thresholds;
    at_one.tau = 1.0;
    expect(classify_limit(pts, at_one).classification == Classification::Negative,
           "verdict Negative at tau=1");
    Thresholds at_04 = cfg.thresholds;
    at_04.tau = 0.4;
    expect(classify_limit(pts, at_04).classification ==
               Classification::EvidenceAtLeastTau,
           "verdict EvidenceAtLeastTau at tau=0.4");
  });

  criterion(3, "exponent-sum divergence: CIs on the trinomial oracle, generic verdict",
            60, [] {
    auto cfg = load("hnn-uniform.toml");
    expect(cfg.samples_per_n == 10000, "config pins 10^4 samples per point");
    expect(cfg.grid == std::vector<std::uint64_t>({50, 100, 200, 500, 1000}),
           "config pins the grid");
    Curve curve = run_curve(cfg);
    expect(curve.points.size() == 5, "five curve points");
    for (const auto& p : curve.points) {
      const double oracle =
          1.0 - oracles::sigma_zero_probability(4, static_cast<int>(p.n));
      expect(p.ci.low <= oracle && oracle <= p.ci.high,
             "CI at n=" + std::to_string(p.n) + " contains the oracle");
    }
    expect(p_hat_at(curve, 1000) >= 0.95, "pHat(1000) >= 0.95");
    auto verdict = classify_limit(to_classify_points(curve), cfg.thresholds);
    expect(verdict.classification == Classification::EvidenceGeneric,
           std::string("verdict EvidenceGeneric, got ") +
               classification_name(verdict.classification));

    auto sub_cfg = load("hnn-subalphabet.toml");
    Curve flat = run_curve(sub_cfg);
    for (const auto& p : flat.points)
      expect(p.successes == 0, "restricted curve is identically zero");
    expect(classify_limit(to_classify_points(flat), sub_cfg.thresholds)
                   .classification == Classification::Negative,
           "restricted verdict Negative");
  });

  criterion(4, "LLN trajectories: fraction >= 1/3 almost surely", 10, [] {
    auto cfg = load("trajectory-two-element.toml");
    ProcessSpec spec = make_process(cfg.process_name, cfg.process_params, nullptr);
    auto machine = make_machine(cfg.machine_name, cfg.machine_params);
    auto big = trajectory_halt_fraction(spec, *machine, 1, 300, 1000, cfg.master_seed);
    expect(big.pr_at_least_third >= 0.99,
           "Pr(fraction >= 1/3) at n=300 is " + std::to_string(big.pr_at_least_third));
    auto small = trajectory_halt_fraction(spec, *machine, 1, 3, 10000, cfg.master_seed);
    expect_near(small.pr_at_least_third, 0.875, 0.03, "n=3 case vs 7/8");
  });

  criterion(5, "graph growth: exact valid times, uniform on the 8 graphs", 20, [] {
    GraphGrowthProcess walk(1, 0);
    std::set<std::uint64_t> expected;
    for (std::uint64_t i = 1; i <= 50; ++i) expected.insert(i * (i + 1) / 2);
    std::set<std::uint64_t> got;
    for (std::uint64_t t = 1; t <= 1275; ++t) {
      if (walk.step().valid) got.insert(t);
    }
    expect(got == expected, "valid times for steps <= 1275 are {i(i+1)/2 : i <= 50}");

    auto cfg = load("graph-edge-property.toml");
    auto spec = make_graph_growth_spec();
    GraphDomain dom;
    std::map<std::string, std::uint64_t> counts;
    for (const auto& e : dom.enumerate_sphere(3)) counts[canonical_text(e)] = 0;
    const std::uint64_t N = 80000;
    for (std::uint64_t r = 0; r < N; ++r) {
      auto out = sample_at(spec, spec.valid_time(3), cfg.master_seed, r);
      expect(out.valid, "output at a valid time is valid");
      ++counts.at(canonical_text(out.element));
    }
    std::vector<std::uint64_t> observed;
    for (const auto& [k, v] : counts) observed.push_back(v);
    auto chi = chi_square_uniformity(observed);
    expect(chi.p_value >= 1e-3,
           "chi-square p=" + std::to_string(chi.p_value) + " over 8 graph cells");
  });

  criterion(6, "permutation growth: bijections, uniform over S4", 20, [] {
    auto cfg = load("permutation-uniformity.toml");
    expect(cfg.samples_per_n == 240000, "config pins N = 2.4*10^5");
    auto spec = make_permutation_from_scratch_spec();
    PermutationDomain dom;
    std::map<std::string, std::uint64_t> counts;
    for (const auto& e : dom.enumerate_sphere(4)) counts[canonical_text(e)] = 0;
    for (std::uint64_t r = 0; r < cfg.samples_per_n; ++r) {
      auto out = sample_at(spec, spec.valid_time(cfg.calib_at), cfg.master_seed, r);
      if (!out.valid || !well_formed(out.element) || !dom.contains(out.element)) {
        note("FAILED: sample " + std::to_string(r) + " is not a bijection");
        return;
      }
      ++counts.at(canonical_text(out.element));
    }
    std::vector<std::uint64_t> observed;
    for (const auto& [k, v] : counts) observed.push_back(v);
    expect(observed.size() == 24, "24 cells");
    auto chi = chi_square_uniformity(observed);
    expect(chi.p_value >= 1e-3, "chi-square p=" + std::to_string(chi.p_value));
  });

  criterion(7, "free-group walk: reduced words, uniform on the 3-sphere", 10, [] {
    auto cfg = load("free-group-walk.toml");
    expect(cfg.samples_per_n == 100000, "config pins N = 10^5");
    auto spec = make_nonbacktracking_walk_spec(2);
    ReducedWordDomain dom(2);
    std::map<std::string, std::uint64_t> counts;
    for (const auto& e : dom.enumerate_sphere(3)) counts[canonical_text(e)] = 0;
    for (std::uint64_t r = 0; r < cfg.samples_per_n; ++r) {
      auto out = sample_at(spec, 3, cfg.master_seed, r);
      if (!dom.contains(out.element)) {
        note("FAILED: sample is not freely reduced");
        return;
      }
      ++counts.at(canonical_text(out.element));
    }
    std::vector<std::uint64_t> observed;
    for (const auto& [k, v] : counts) observed.push_back(v);
    expect(observed.size() == 36, "36 cells");
    auto chi = chi_square_uniformity(observed);
    expect(chi.p_value >= 1e-3, "chi-square p=" + std::to_string(chi.p_value));
  });

  criterion(8, "ball sampler: sphere weights 1/7, 2/7, 4/7 within 0.01", 0, [] {
    auto cfg = load("ball-uniform.toml");
    expect(cfg.samples_per_n == 70000, "config pins N = 7*10^4");
    auto spec = make_ball_uniform_spec(2);
    std::uint64_t by_len[3] = {0, 0, 0};
    for (std::uint64_t r = 0; r < cfg.samples_per_n; ++r) {
      auto out = sample_at(spec, 2, cfg.master_seed, r);
      ++by_len[out.element.get<Word>().letters.size()];
    }
    const double N = static_cast<double>(cfg.samples_per_n);
    expect_near(by_len[0] / N, 1.0 / 7, 0.01, "sphere 0 weight");
    expect_near(by_len[1] / N, 2.0 / 7, 0.01, "sphere 1 weight");
    expect_near(by_len[2] / N, 4.0 / 7, 0.01, "sphere 2 weight");
  });

  criterion(9, "density engine: exact weighted-average identity and Stolz rate", 0, [] {
    struct Case {
      const char* domain;
      int m;
      const char* subset;
    };
    const Case cases[] = {{"word", 2, "all"},
                          {"word", 2, "empty"},
                          {"word", 2, "starts-with-a"},
                          {"word", 2, "even-length"},
                          {"hnn-word", 1, "sigma-t-nonzero"}};
    for (const auto& c : cases) {
      ParamMap params;
      params.set_int("m", c.m);
      auto dom = make_domain(c.domain, params);
      auto seq = density_sequence(*dom, make_subset(c.subset), 10);
      std::uint64_t cum_count = 0, cum_hits = 0;
      for (const auto& p : seq.points) {
        cum_count += p.sphere_count;
        cum_hits += p.sphere_hits;
        expect(p.ball_density == Rational(static_cast<std::int64_t>(cum_hits),
                                          static_cast<std::int64_t>(cum_count)),
               std::string(c.subset) + ": identity at n=" + std::to_string(p.n));
      }
    }
    auto dom = make_word_domain(2);
    auto sub = make_subset("starts-with-a");
    for (int n = 1; n <= 12; ++n) {
      Rational gap = ball_density(*dom, sub, static_cast<std::uint64_t>(n)) -
                     Rational(1, 2);
      if (gap < Rational(0)) gap = -gap;
      expect(gap <= Rational(1, static_cast<std::int64_t>(oracles::pow_u64(2, n))),
             "Stolz gap at n=" + std::to_string(n));
    }
  });

  criterion(10, "classifier calibration: strong / generic / negative", 5, [] {
    const Thresholds defaults;

    auto strong = classify_limit(to_classify_points(run_curve(load("calib-strong.toml"))),
                                 defaults);
    expect(strong.classification == Classification::EvidenceStrongGeneric,
           std::string("1 - 2^-n gives EvidenceStrongGeneric, got ") +
               classification_name(strong.classification));

    auto generic = classify_limit(
        to_classify_points(run_curve(load("calib-generic.toml"))), defaults);
    expect(generic.classification == Classification::EvidenceGeneric,
           std::string("1 - 1/n gives EvidenceGeneric, got ") +
               classification_name(generic.classification));

    auto negative = classify_limit(
        to_classify_points(run_curve(load("calib-negative.toml"))), defaults);
    expect(negative.classification == Classification::Negative,
           std::string("flat 1/2 gives Negative, got ") +
               classification_name(negative.classification));
  });

  criterion(11, "determinism: bundled configs byte-identical across threads", 0, [] {
    std::vector<fs::path> configs;
    for (const auto& entry : fs::directory_iterator(config_dir()))
      if (entry.path().extension() == ".toml") configs.push_back(entry.path());
    std::sort(configs.begin(), configs.end());
    expect(!configs.empty(), "bundled configs exist");
    for (const auto& cfg : configs) {
      const std::string stem = cfg.stem().string();
      fs::path d1 = scratch_root() / (stem + "-t1");
      fs::path d8 = scratch_root() / (stem + "-t8");
      for (const auto& [dir, threads] : {std::pair<fs::path, const char*>{d1, "1"},
                                         std::pair<fs::path, const char*>{d8, "8"}}) {
        std::string cmd = std::string(GENERICASE_CLI_PATH) + " run " + cfg.string() +
                          " --threads " + threads + " --out " + dir.string() +
                          " > /dev/null 2>&1";
        int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
          note("FAILED: cli run of " + stem + " exited nonzero");
          return;
        }
      }
      std::size_t compared = 0;
      for (const auto& f : fs::directory_iterator(d1)) {
        const std::string name = f.path().filename().string();
        ++compared;
        if (slurp(d1 / name) != slurp(d8 / name)) {
          note("FAILED: " + stem + "/" + name + " differs between thread counts");
          return;
        }
      }
      expect(compared >= 2, stem + ": outputs were emitted");
    }
  });

  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILURES",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
