#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "genericase/common.hpp"
#include "genericase/domain.hpp"
#include "genericase/machine.hpp"
#include "genericase/process.hpp"
#include "genericase/stats.hpp"

namespace genericase {

/// Monotone non-decreasing step bound f(n) = ceil(c * template(n) + b).
struct BoundSpec {
  enum class Template { Constant, Linear, Polynomial, Exponential };
  Template kind = Template::Linear;
  double c = 1.0;
  double b = 0.0;
  std::uint64_t degree = 2;  // Polynomial only
  double base = 2.0;         // Exponential only

  std::uint64_t evaluate(std::uint64_t n) const {
    if (c < 0.0 || b < 0.0)
      throw std::invalid_argument("bound: coefficients must be >= 0");
    long double t = 1.0L;
    switch (kind) {
      case Template::Constant: t = 1.0L; break;
      case Template::Linear: t = static_cast<long double>(n); break;
      case Template::Polynomial:
        t = std::pow(static_cast<long double>(n), static_cast<long double>(degree));
        break;
      case Template::Exponential:
        t = std::pow(static_cast<long double>(base), static_cast<long double>(n));
        break;
    }
    long double v = std::ceil(static_cast<long double>(c) * t + static_cast<long double>(b));
    if (!(v < 9.2e18L)) throw OverflowError("bound value exceeds 64-bit step budget");
    return static_cast<std::uint64_t>(v);
  }

  std::string describe() const {
    switch (kind) {
      case Template::Constant: return "ceil(" + std::to_string(c) + " + " + std::to_string(b) + ")";
      case Template::Linear: return "ceil(" + std::to_string(c) + "*n + " + std::to_string(b) + ")";
      case Template::Polynomial:
        return "ceil(" + std::to_string(c) + "*n^" + std::to_string(degree) + " + " +
               std::to_string(b) + ")";
      case Template::Exponential:
        return "ceil(" + std::to_string(c) + "*" + std::to_string(base) + "^n + " +
               std::to_string(b) + ")";
    }
    return "?";
  }
};

enum class SamplingMode { Unconditional, ConditionalOnValid, AtValidTimes };

inline const char* sampling_mode_name(SamplingMode m) {
  switch (m) {
    case SamplingMode::Unconditional: return "unconditional";
    case SamplingMode::ConditionalOnValid: return "conditional-on-valid";
    case SamplingMode::AtValidTimes: return "at-valid-times";
  }
  return "?";
}

/// One Monte Carlo point: k successes among N usable replicas at size n.
/// N is the valid-sample count, which is below the requested replica count
/// only in conditional mode.
struct EstimatePoint {
  std::uint64_t n = 0;
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  Interval ci;
};

struct Curve {
  SamplingMode mode = SamplingMode::Unconditional;
  std::vector<EstimatePoint> points;
  std::vector<std::string> warnings;
};

namespace detail {

/// Splits replica indices into contiguous blocks, one worker per block, and
/// sums the K per-replica indicator flags. Sums keyed only by replica index
/// are order-independent, so the result cannot depend on the worker count.
template <std::size_t K, typename Fn>
std::array<std::uint64_t, K> tally_replicas(std::uint64_t samples, unsigned threads,
                                            Fn&& replica) {
  auto accumulate = [&replica](std::uint64_t lo, std::uint64_t hi) {
    std::array<std::uint64_t, K> t{};
    for (std::uint64_t r = lo; r < hi; ++r) {
      std::array<bool, K> flags = replica(r);
      for (std::size_t i = 0; i < K; ++i) t[i] += flags[i] ? 1 : 0;
    }
    return t;
  };
  if (threads <= 1 || samples < 2) return accumulate(0, samples);

  const std::uint64_t workers = std::min<std::uint64_t>(threads, samples);
  std::vector<std::array<std::uint64_t, K>> partial(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = samples * w / workers;
    const std::uint64_t hi = samples * (w + 1) / workers;
    pool.emplace_back([&partial, &accumulate, w, lo, hi] {
      partial[static_cast<std::size_t>(w)] = accumulate(lo, hi);
    });
  }
  for (auto& th : pool) th.join();
  std::array<std::uint64_t, K> t{};
  for (const auto& p : partial)
    for (std::size_t i = 0; i < K; ++i) t[i] += p[i];
  return t;
}

/// Shared driver for success and property curves. `success` is evaluated on
/// valid elements only.
inline Curve estimate_curve(
    const ProcessSpec& spec, const std::vector<std::uint64_t>& grid,
    std::uint64_t samples_per_n, std::uint64_t seed, SamplingMode mode,
    const std::function<bool(std::uint64_t n, const Element&)>& success,
    unsigned threads, double z) {
  if (samples_per_n == 0)
    throw std::invalid_argument("estimate_curve: samples_per_n must be >= 1");
  SamplingMode effective = mode;
  if (mode == SamplingMode::AtValidTimes) {
    if (spec.schedule == ScheduleKind::AllValid) {
      effective = SamplingMode::Unconditional;  // degenerate case, allowed
    } else if (!spec.valid_time) {
      throw std::invalid_argument(
          "at-valid-times mode needs a deterministic schedule");
    }
  }
  Curve curve;
  curve.mode = mode;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    std::uint64_t n = grid[gi];
    if (effective == SamplingMode::AtValidTimes) {
      if (n == 0) throw std::invalid_argument("valid-time index must be >= 1");
      n = spec.valid_time(n);
    }
    if (n == 0) throw std::invalid_argument("grid entries must be >= 1");
    const std::uint64_t stream_base = static_cast<std::uint64_t>(gi) * samples_per_n;
    auto one = [&](std::uint64_t r) -> std::array<bool, 2> {
      StepOutput out = sample_at(spec, n, seed, stream_base + r);
      if (!out.valid) return {false, false};
      return {true, success(n, out.element)};
    };
    auto t = tally_replicas<2>(samples_per_n, threads, one);
    const std::uint64_t valid = t[0];
    const std::uint64_t successes = t[1];

    EstimatePoint p;
    p.n = n;
    if (effective == SamplingMode::ConditionalOnValid) {
      if (valid == 0) {
        curve.warnings.push_back("no valid samples at n=" + std::to_string(n) +
                                 "; point omitted");
        continue;
      }
      p.samples = valid;
    } else {
      p.samples = samples_per_n;
    }
    p.successes = successes;
    p.p_hat = static_cast<double>(p.successes) / static_cast<double>(p.samples);
    p.ci = wilson_interval(p.successes, p.samples, z);
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace detail

/// Empirical curve of Pr(t(W_n) <= f(n)). Unconditional counts an auxiliary
/// W_n as failure; conditional mode discards it; at-valid-times evaluates
/// grid entry i at time n_i. A bound of 0 makes success impossible (every
/// tick costs one unit), decided without running.
inline Curve estimate_success_curve(const ProcessSpec& spec, const Machine& machine,
                                    const BoundSpec& bound,
                                    const std::vector<std::uint64_t>& grid,
                                    std::uint64_t samples_per_n, std::uint64_t seed,
                                    SamplingMode mode, unsigned threads = 1,
                                    double z = 1.96) {
  auto success = [&machine, &bound](std::uint64_t n, const Element& e) {
    const std::uint64_t fuel = bound.evaluate(n);
    if (fuel == 0) return false;
    return run(machine, e, fuel).produced();
  };
  return detail::estimate_curve(spec, grid, samples_per_n, seed, mode, success,
                                threads, z);
}

/// Empirical curve of Pr(W_n has the property), same modes as the success
/// curve.
inline Curve estimate_property_curve(const ProcessSpec& spec, const SubsetSpec& subset,
                                     const std::vector<std::uint64_t>& grid,
                                     std::uint64_t samples_per_n, std::uint64_t seed,
                                     SamplingMode mode, unsigned threads = 1,
                                     double z = 1.96) {
  auto success = [&subset](std::uint64_t, const Element& e) {
    return subset.predicate(e);
  };
  return detail::estimate_curve(spec, grid, samples_per_n, seed, mode, success,
                                threads, z);
}

enum class Classification {
  EvidenceGeneric,
  EvidenceStrongGeneric,
  EvidenceAtLeastTau,
  Negative,
  Inconclusive
};

inline const char* classification_name(Classification c) {
  switch (c) {
    case Classification::EvidenceGeneric: return "EvidenceGeneric";
    case Classification::EvidenceStrongGeneric: return "EvidenceStrongGeneric";
    case Classification::EvidenceAtLeastTau: return "EvidenceAtLeastTau";
    case Classification::Negative: return "Negative";
    case Classification::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Input to classification: the sample count is used only to floor values
/// equal to 1 for the exponential fit (0 = unknown).
struct ClassifyPoint {
  std::uint64_t n = 0;
  double value = 0.0;
  std::uint64_t samples = 0;
};

/// Finite-sample verdict thresholds. tail_window = 0 selects the default of
/// the last third of the points (rounded up).
struct Thresholds {
  double tau = 1.0;
  double epsilon = 0.02;
  std::size_t tail_window = 0;
  double r2_min = 0.98;
  double z = 1.96;
};

struct Verdict {
  Classification classification = Classification::Inconclusive;
  std::size_t tail_window = 0;
  double tail_mean = 0.0;
  double tail_min = 0.0;
  double tail_max = 0.0;
  double exp_slope = std::numeric_limits<double>::quiet_NaN();
  double exp_r2 = std::numeric_limits<double>::quiet_NaN();
  std::string note =
      "finite-range evidence only; the strong flag is an R^2 heuristic, not a proof";
};

/// Classifies a curve or density sequence. Generic evidence needs every
/// tail value >= 1 - epsilon plus a trend check (the fitted tail slope must
/// not project a decline of more than epsilon/2 across the tail span).
/// Strong evidence additionally needs log(1 - value) vs n to fit a line
/// with negative slope and R^2 >= r2_min over all points.
inline Verdict classify_limit(const std::vector<ClassifyPoint>& points,
                              const Thresholds& th = {}) {
  if (points.size() < 4)
    throw EstimateError("classify_limit: need at least 4 points, have " +
                        std::to_string(points.size()));
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].n <= points[i - 1].n)
      throw std::invalid_argument("classify_limit: n must be strictly increasing");
  if (!(th.tau > 0.0) || th.tau > 1.0)
    throw std::invalid_argument("classify_limit: tau must be in (0, 1]");

  Verdict v;
  v.tail_window = th.tail_window == 0 ? (points.size() + 2) / 3
                                      : std::min(th.tail_window, points.size());
  const std::size_t start = points.size() - v.tail_window;
  double sum = 0.0;
  v.tail_min = v.tail_max = points[start].value;
  for (std::size_t i = start; i < points.size(); ++i) {
    const double val = points[i].value;
    sum += val;
    v.tail_min = std::min(v.tail_min, val);
    v.tail_max = std::max(v.tail_max, val);
  }
  v.tail_mean = sum / static_cast<double>(v.tail_window);

  bool generic = v.tail_min >= 1.0 - th.epsilon;
  if (generic && v.tail_window >= 2) {
    std::vector<double> xs, ys;
    for (std::size_t i = start; i < points.size(); ++i) {
      xs.push_back(static_cast<double>(points[i].n));
      ys.push_back(points[i].value);
    }
    LinearFit trend = linear_fit(xs, ys);
    const double span = xs.back() - xs.front();
    if (trend.slope * span < -th.epsilon / 2.0) generic = false;
  }

  if (generic) {
    std::vector<double> xs, ys;
    for (const auto& p : points) {
      double val = p.value;
      const double floor_at =
          p.samples > 0 ? 1.0 - 1.0 / (3.0 * static_cast<double>(p.samples))
                        : 1.0 - 1e-9;
      if (val >= 1.0) val = floor_at;
      xs.push_back(static_cast<double>(p.n));
      ys.push_back(std::log(1.0 - val));
    }
    LinearFit fit = linear_fit(xs, ys);
    v.exp_slope = fit.slope;
    v.exp_r2 = fit.r2;
    v.classification = (fit.slope < 0.0 && fit.r2 >= th.r2_min)
                           ? Classification::EvidenceStrongGeneric
                           : Classification::EvidenceGeneric;
  } else if (v.tail_min >= th.tau) {
    v.classification = Classification::EvidenceAtLeastTau;
  } else if (v.tail_max < th.tau) {
    v.classification = Classification::Negative;
  } else {
    v.classification = Classification::Inconclusive;
  }
  return v;
}

inline std::vector<ClassifyPoint> to_classify_points(const Curve& curve) {
  std::vector<ClassifyPoint> pts;
  pts.reserve(curve.points.size());
  for (const auto& p : curve.points) pts.push_back({p.n, p.p_hat, p.samples});
  return pts;
}

/// Per-n agreement of a machine's produced outputs with a reference
/// function: coverage = Pr(Produced), correctness = Pr(value = oracle(w) |
/// Produced). Correctness is undefined at a point with zero productions.
struct AuditPoint {
  std::uint64_t n = 0;
  std::uint64_t samples = 0;
  std::uint64_t produced = 0;
  std::uint64_t matches = 0;
  double coverage = 0.0;
  Interval coverage_ci;
  bool correctness_defined = false;
  double correctness = 0.0;
  Interval correctness_ci;
};

struct AuditResult {
  std::vector<AuditPoint> points;
  std::vector<std::string> warnings;
};

inline AuditResult correctness_audit(
    const ProcessSpec& spec, const Machine& machine,
    const std::function<std::string(const Element&)>& oracle, const BoundSpec& bound,
    const std::vector<std::uint64_t>& grid, std::uint64_t samples_per_n,
    std::uint64_t seed, unsigned threads = 1, double z = 1.96) {
  if (samples_per_n == 0)
    throw std::invalid_argument("correctness_audit: samples_per_n must be >= 1");
  AuditResult result;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const std::uint64_t n = grid[gi];
    if (n == 0) throw std::invalid_argument("grid entries must be >= 1");
    const std::uint64_t fuel = bound.evaluate(n);
    const std::uint64_t stream_base = static_cast<std::uint64_t>(gi) * samples_per_n;
    // Auxiliary replicas are not machine inputs and drop out of the base
    // count entirely.
    auto one = [&](std::uint64_t r) -> std::array<bool, 3> {
      StepOutput out = sample_at(spec, n, seed, stream_base + r);
      if (!out.valid) return {false, false, false};
      if (fuel == 0) return {true, false, false};
      RunOutcome ro = run(machine, out.element, fuel);
      if (!ro.produced()) return {true, false, false};
      return {true, true, ro.value == oracle(out.element)};
    };
    auto t = detail::tally_replicas<3>(samples_per_n, threads, one);
    if (t[0] == 0) {
      result.warnings.push_back("no valid samples at n=" + std::to_string(n) +
                                "; point omitted");
      continue;
    }

    AuditPoint p;
    p.n = n;
    p.samples = t[0];
    p.produced = t[1];
    p.matches = t[2];
    p.coverage = static_cast<double>(p.produced) / static_cast<double>(p.samples);
    p.coverage_ci = wilson_interval(p.produced, p.samples, z);
    if (p.produced > 0) {
      p.correctness_defined = true;
      p.correctness = static_cast<double>(p.matches) / static_cast<double>(p.produced);
      p.correctness_ci = wilson_interval(p.matches, p.produced, z);
    } else {
      result.warnings.push_back("no productions at n=" + std::to_string(n) +
                                "; conditional correctness missing");
    }
    result.points.push_back(p);
  }
  return result;
}

/// Law-of-large-numbers trajectory statistic: the frequency of trajectories
/// W_1..W_n whose halting fraction (within step_bound ticks each) reaches
/// 1/3, plus the mean fraction. The threshold test 3*halts >= n is exact in
/// integers.
struct TrajectoryResult {
  std::uint64_t trials = 0;
  std::uint64_t n = 0;
  std::uint64_t step_bound = 0;
  std::uint64_t trajectories_meeting_third = 0;
  std::uint64_t total_halts = 0;
  double pr_at_least_third = 0.0;
  double mean_fraction = 0.0;
};

inline TrajectoryResult trajectory_halt_fraction(const ProcessSpec& spec,
                                                 const Machine& machine,
                                                 std::uint64_t step_bound,
                                                 std::uint64_t n, std::uint64_t trials,
                                                 std::uint64_t seed,
                                                 unsigned threads = 1) {
  if (spec.schedule != ScheduleKind::AllValid)
    throw std::invalid_argument("trajectory_halt_fraction: process must be AllValid");
  if (n == 0 || trials == 0 || step_bound == 0)
    throw std::invalid_argument("trajectory_halt_fraction: n, trials, step_bound >= 1");

  std::vector<std::uint64_t> halts_per_trial(static_cast<std::size_t>(trials), 0);
  auto one = [&](std::uint64_t trial) -> std::array<bool, 1> {
    auto proc = spec.instantiate(seed, trial);
    std::uint64_t halts = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      StepOutput out = proc->step();
      if (run(machine, out.element, step_bound).produced()) ++halts;
    }
    halts_per_trial[static_cast<std::size_t>(trial)] = halts;
    return {3 * halts >= n};
  };
  auto t = detail::tally_replicas<1>(trials, threads, one);

  TrajectoryResult r;
  r.trials = trials;
  r.n = n;
  r.step_bound = step_bound;
  r.trajectories_meeting_third = t[0];
  for (std::uint64_t h : halts_per_trial) r.total_halts += h;
  r.pr_at_least_third =
      static_cast<double>(r.trajectories_meeting_third) / static_cast<double>(trials);
  r.mean_fraction = static_cast<double>(r.total_halts) /
                    (static_cast<double>(trials) * static_cast<double>(n));
  return r;
}

}  // namespace genericase
