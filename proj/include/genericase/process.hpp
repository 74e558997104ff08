#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "genericase/common.hpp"
#include "genericase/domain.hpp"
#include "genericase/element.hpp"
#include "genericase/rng.hpp"

namespace genericase {

/// One step of a process: either a valid input in the domain or an auxiliary
/// configuration (flagged element) of a growth process mid-round.
struct StepOutput {
  bool valid = true;
  Element element;

  static StepOutput valid_out(Element e) { return {true, std::move(e)}; }
  static StepOutput aux_out(Element e) { return {false, e.as_aux()}; }
};

enum class ScheduleKind { AllValid, Deterministic, Stochastic };

inline const char* schedule_kind_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::AllValid: return "AllValid";
    case ScheduleKind::Deterministic: return "Deterministic";
    case ScheduleKind::Stochastic: return "Stochastic";
  }
  return "?";
}

/// A seeded discrete-time generator W_1, W_2, ... A single instance is
/// strictly sequential; parallelism comes only from independent replicas
/// with distinct stream ids. advance() is the cheap time increment;
/// current() materializes W_n for the current time on demand, so sampling
/// the n-th output costs O(n) work overall, not O(n^2).
class Process {
 public:
  Process(std::string name, std::shared_ptr<const Domain> domain, ScheduleKind schedule)
      : name_(std::move(name)), domain_(std::move(domain)), schedule_(schedule) {}
  virtual ~Process() = default;

  const std::string& name() const { return name_; }
  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
  ScheduleKind schedule_kind() const { return schedule_; }
  std::uint64_t time() const { return time_; }

  void advance() {
    ++time_;
    do_advance();
  }

  /// W_n for the current time n = time(); requires at least one advance.
  StepOutput current() const {
    if (time_ == 0) throw std::logic_error("process " + name_ + ": current() before any step");
    return do_current();
  }

  /// Advances one time unit and returns the new W_n.
  StepOutput step() {
    advance();
    return current();
  }

 protected:
  virtual void do_advance() = 0;
  virtual StepOutput do_current() const = 0;

 private:
  std::string name_;
  std::shared_ptr<const Domain> domain_;
  ScheduleKind schedule_;
  std::uint64_t time_ = 0;
};

/// Appends one uniform letter of the domain alphabet per step; W_n is the
/// length-n prefix, uniform on the n-sphere. AllValid.
class UniformWordProcess : public Process {
 public:
  UniformWordProcess(std::shared_ptr<const WordDomain> domain, std::uint64_t master_seed,
                     std::uint64_t stream_id)
      : Process("uniform-word", domain, ScheduleKind::AllValid),
        word_domain_(std::move(domain)),
        rng_(derive_seed(master_seed, stream_id, 0)) {}

 protected:
  void do_advance() override {
    const std::string& a = word_domain_->alphabet();
    buf_ += a[static_cast<std::size_t>(rng_.below(a.size()))];
  }

  StepOutput do_current() const override { return StepOutput::valid_out(Element::word(buf_)); }

 private:
  std::shared_ptr<const WordDomain> word_domain_;
  Rng rng_;
  std::string buf_;
};

/// Uniform letters drawn from a proper subalphabet B of the stable-letter
/// alphabet; W_n is a length-n word containing no t letters. AllValid.
class RestrictedSubalphabetProcess : public Process {
 public:
  RestrictedSubalphabetProcess(int m, std::uint64_t master_seed, std::uint64_t stream_id)
      : Process("restricted-subalphabet", make_hnn_word_domain(m),
                ScheduleKind::AllValid),
        sub_(stable_letter_alphabet(m).substr(2)),
        rng_(derive_seed(master_seed, stream_id, 0)) {}

 protected:
  void do_advance() override {
    buf_ += sub_[static_cast<std::size_t>(rng_.below(sub_.size()))];
  }

  StepOutput do_current() const override { return StepOutput::valid_out(Element::word(buf_)); }

 private:
  std::string sub_;
  Rng rng_;
  std::string buf_;
};

/// Simple non-backtracking random walk on the free group: the first letter
/// is uniform over 2m, each later letter uniform over the 2m-1 letters that
/// do not cancel the previous one, so W_n is uniform on the n-sphere of
/// freely reduced words. AllValid.
class NonBacktrackingWalkProcess : public Process {
 public:
  NonBacktrackingWalkProcess(int m, std::uint64_t master_seed, std::uint64_t stream_id)
      : Process("nonbacktracking-walk", std::make_shared<ReducedWordDomain>(m),
                ScheduleKind::AllValid),
        letters_(static_cast<const ReducedWordDomain&>(domain()).letters()),
        rng_(derive_seed(master_seed, stream_id, 0)) {}

 protected:
  void do_advance() override {
    if (buf_.empty()) {
      buf_ += letters_[static_cast<std::size_t>(rng_.below(letters_.size()))];
      return;
    }
    const char banned = inverse_letter(buf_.back());
    std::uint64_t r = rng_.below(letters_.size() - 1);
    for (char c : letters_) {
      if (c == banned) continue;
      if (r == 0) {
        buf_ += c;
        return;
      }
      --r;
    }
  }

  StepOutput do_current() const override {
    return StepOutput::valid_out(Element::reduced_word(buf_));
  }

 private:
  std::string letters_;
  Rng rng_;
  std::string buf_;
};

/// At step n emits an element uniform over the whole ball B(n): sphere index
/// j is drawn with weight m^j (m-1) / (m^(n+1) - 1), then a uniform word of
/// length j. Not incremental; each step samples afresh from a counter-derived
/// substream, so current() is a pure function of (seed, stream, time).
class BallUniformProcess : public Process {
 public:
  BallUniformProcess(int m, std::uint64_t master_seed, std::uint64_t stream_id)
      : Process("ball-uniform", make_word_domain(m), ScheduleKind::AllValid),
        m_(static_cast<std::uint64_t>(m)),
        master_seed_(master_seed),
        stream_id_(stream_id) {}

 protected:
  void do_advance() override {}

  StepOutput do_current() const override {
    Rng rng(derive_seed(master_seed_, stream_id_, time()));
    const std::uint64_t n = time();
    std::uint64_t sphere = 0;
    std::uint64_t word_index = 0;
    if (ball_fits_u64(n)) {
      // Exact path: one uniform draw over |B(n)| decodes to (sphere, index).
      std::uint64_t r = rng.below(ball_cardinality(m_, n));
      std::uint64_t sphere_size = 1;
      while (r >= sphere_size) {
        r -= sphere_size;
        sphere_size *= m_;
        ++sphere;
      }
      word_index = r;
      return StepOutput::valid_out(Element::word(decode_word(sphere, word_index)));
    }
    // Large-radius fallback: walk sphere indices top down, accepting index k
    // with the conditional probability (m-1) m^k / (m^(k+1) - 1). Long-double
    // rounding makes this approximate at the 1e-18 level.
    sphere = 0;
    for (std::uint64_t k = n;; --k) {
      long double accept =
          (static_cast<long double>(m_) - 1.0L) /
          (static_cast<long double>(m_) -
           std::pow(static_cast<long double>(m_), -static_cast<long double>(k)));
      if (static_cast<long double>(rng.unit()) < accept || k == 0) {
        sphere = k;
        break;
      }
    }
    std::string w;
    w.reserve(static_cast<std::size_t>(sphere));
    const std::string& a =
        static_cast<const WordDomain&>(domain()).alphabet();
    for (std::uint64_t i = 0; i < sphere; ++i)
      w += a[static_cast<std::size_t>(rng.below(m_))];
    return StepOutput::valid_out(Element::word(w));
  }

 private:
  bool ball_fits_u64(std::uint64_t n) const {
    std::uint64_t total = 0;
    for (std::uint64_t k = 0; k <= n; ++k) {
      if (__builtin_mul_overflow(total, m_, &total)) return false;
      if (__builtin_add_overflow(total, std::uint64_t{1}, &total)) return false;
    }
    return true;
  }

  std::string decode_word(std::uint64_t length, std::uint64_t index) const {
    const std::string& a = static_cast<const WordDomain&>(domain()).alphabet();
    std::string w(static_cast<std::size_t>(length), a[0]);
    for (std::size_t pos = static_cast<std::size_t>(length); pos-- > 0;) {
      w[pos] = a[static_cast<std::size_t>(index % m_)];
      index /= m_;
    }
    return w;
  }

  std::uint64_t m_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
};

/// Grows a graph one vertex round at a time: attaching vertex r costs r
/// steps (r-1 fair edge coins, then a commit emitting the graph), so valid
/// times are n_i = i(i+1)/2 and the graph at n_i is uniform over all simple
/// graphs on i labeled vertices. Every non-commit step is Auxiliary.
class GraphGrowthProcess : public Process {
 public:
  GraphGrowthProcess(std::uint64_t master_seed, std::uint64_t stream_id)
      : Process("graph-growth", std::make_shared<GraphDomain>(),
                ScheduleKind::Deterministic),
        rng_(derive_seed(master_seed, stream_id, 0)) {}

  static std::uint64_t valid_time(std::uint64_t i) { return i * (i + 1) / 2; }

 protected:
  void do_advance() override {
    if (flips_done_ < attaching_ - 1) {
      ++flips_done_;
      if (rng_.coin())
        pending_.emplace_back(static_cast<int>(flips_done_), static_cast<int>(attaching_));
      committed_ = false;
      return;
    }
    vertices_ = attaching_;
    edges_.insert(edges_.end(), pending_.begin(), pending_.end());
    pending_.clear();
    ++attaching_;
    flips_done_ = 0;
    committed_ = true;
  }

  StepOutput do_current() const override {
    if (committed_)
      return StepOutput::valid_out(Element::graph(static_cast<int>(vertices_), edges_));
    std::vector<std::pair<int, int>> partial = edges_;
    partial.insert(partial.end(), pending_.begin(), pending_.end());
    return StepOutput::aux_out(
        Element::graph(static_cast<int>(attaching_), std::move(partial)));
  }

 private:
  Rng rng_;
  std::uint64_t vertices_ = 0;   // committed graph size
  std::uint64_t attaching_ = 1;  // vertex of the round in progress
  std::uint64_t flips_done_ = 0;
  bool committed_ = false;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::pair<int, int>> pending_;
};

/// Builds a permutation of {1..i} by i uniform picks without replacement,
/// one pick per step; the i-th pick completes the round and is the valid
/// step, so n_i = i(i+1)/2. Each round starts from scratch, discarding the
/// previous permutation entirely.
class PermutationFromScratchProcess : public Process {
 public:
  PermutationFromScratchProcess(std::uint64_t master_seed, std::uint64_t stream_id)
      : Process("permutation-from-scratch", std::make_shared<PermutationDomain>(),
                ScheduleKind::Deterministic),
        rng_(derive_seed(master_seed, stream_id, 0)) {}

  static std::uint64_t valid_time(std::uint64_t i) { return i * (i + 1) / 2; }

 protected:
  void do_advance() override {
    if (picks_done_ == round_) {
      ++round_;
      picks_done_ = 0;
      images_.clear();
      pool_.resize(static_cast<std::size_t>(round_));
      std::iota(pool_.begin(), pool_.end(), 1);
    }
    std::size_t at = static_cast<std::size_t>(rng_.below(pool_.size()));
    images_.push_back(pool_[at]);
    pool_[at] = pool_.back();
    pool_.pop_back();
    ++picks_done_;
  }

  StepOutput do_current() const override {
    if (picks_done_ == round_)
      return StepOutput::valid_out(Element::permutation(images_));
    return StepOutput::aux_out(Element::permutation(images_));
  }

 private:
  Rng rng_;
  std::uint64_t round_ = 0;
  std::uint64_t picks_done_ = 0;
  std::vector<int> images_;
  std::vector<int> pool_;
};

/// Success-probability template for the synthetic Bernoulli process.
struct PTemplate {
  enum class Kind { Constant, OneMinusPow, OneMinusInverse };
  Kind kind = Kind::Constant;
  double value = 0.5;  // Constant level
  double base = 2.0;   // OneMinusPow: p(n) = 1 - base^-n

  double evaluate(std::uint64_t n) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::OneMinusPow:
        return 1.0 - std::pow(base, -static_cast<double>(n));
      case Kind::OneMinusInverse:
        return n == 0 ? 0.0 : 1.0 - 1.0 / static_cast<double>(n);
    }
    return value;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Constant: return "constant(" + std::to_string(value) + ")";
      case Kind::OneMinusPow: return "one-minus-pow(base=" + std::to_string(base) + ")";
      case Kind::OneMinusInverse: return "one-minus-inverse";
    }
    return "?";
  }
};

/// Emits the accepting token "a" with probability p(n) at step n, else "b".
/// With a constant p = 1/2 this is exactly the i.i.d. uniform two-element
/// source. Draws are counter-derived per step. AllValid.
class SyntheticBernoulliProcess : public Process {
 public:
  SyntheticBernoulliProcess(PTemplate p, std::uint64_t master_seed,
                            std::uint64_t stream_id)
      : Process("synthetic-bernoulli", make_word_domain(2), ScheduleKind::AllValid),
        p_(p),
        master_seed_(master_seed),
        stream_id_(stream_id) {}

 protected:
  void do_advance() override {}

  StepOutput do_current() const override {
    Rng rng(derive_seed(master_seed_, stream_id_, time()));
    bool accept = rng.unit() < p_.evaluate(time());
    return StepOutput::valid_out(Element::word(accept ? "a" : "b"));
  }

 private:
  PTemplate p_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
};

/// Instantiable description of a process: everything the estimator needs to
/// spawn independent replicas. streamId is internal; configs expose only the
/// master seed.
struct ProcessSpec {
  std::string name;
  std::shared_ptr<const Domain> domain;
  ScheduleKind schedule = ScheduleKind::AllValid;
  std::function<std::unique_ptr<Process>(std::uint64_t master_seed,
                                         std::uint64_t stream_id)>
      instantiate;
  std::function<std::uint64_t(std::uint64_t)> valid_time;  // Deterministic only
};

/// Fresh replica stepped to time n; independent stream ids give independent
/// replicas, identical (seed, stream, n) reproduces the same output.
inline StepOutput sample_at(const ProcessSpec& spec, std::uint64_t n,
                            std::uint64_t master_seed, std::uint64_t stream_id) {
  if (n == 0) throw std::invalid_argument("sample_at: n must be >= 1");
  auto p = spec.instantiate(master_seed, stream_id);
  for (std::uint64_t k = 0; k < n; ++k) p->advance();
  return p->current();
}

inline ProcessSpec make_uniform_word_spec(std::shared_ptr<const WordDomain> domain) {
  ProcessSpec s;
  s.name = "uniform-word";
  s.domain = domain;
  s.schedule = ScheduleKind::AllValid;
  s.instantiate = [domain](std::uint64_t seed, std::uint64_t stream) {
    return std::make_unique<UniformWordProcess>(domain, seed, stream);
  };
  return s;
}

inline ProcessSpec make_restricted_subalphabet_spec(int m) {
  ProcessSpec s;
  s.name = "restricted-subalphabet";
  s.domain = make_hnn_word_domain(m);
  s.schedule = ScheduleKind::AllValid;
  s.instantiate = [m](std::uint64_t seed, std::uint64_t stream) {
    return std::make_unique<RestrictedSubalphabetProcess>(m, seed, stream);
  };
  return s;
}

inline ProcessSpec make_nonbacktracking_walk_spec(int m) {
  ProcessSpec s;
  s.name = "nonbacktracking-walk";
  s.domain = std::make_shared<ReducedWordDomain>(m);
  s.schedule = ScheduleKind::AllValid;
  s.instantiate = [m](std::uint64_t seed, std::uint64_t stream) {
    return std::make_unique<NonBacktrackingWalkProcess>(m, seed, stream);
  };
  return s;
}

inline ProcessSpec make_ball_uniform_spec(int m) {
  ProcessSpec s;
  s.name = "ball-uniform";
  s.domain = make_word_domain(m);
  s.schedule = ScheduleKind::AllValid;
  s.instantiate = [m](std::uint64_t seed, std::uint64_t stream) {
    return std::make_unique<BallUniformProcess>(m, seed, stream);
  };
  return s;
}

inline ProcessSpec make_graph_growth_spec() {
  ProcessSpec s;
  s.name = "graph-growth";
  s.domain = std::make_shared<GraphDomain>();
  s.schedule = ScheduleKind::Deterministic;
  s.instantiate = [](std::uint64_t seed, std::uint64_t stream) {
    return std::make_unique<GraphGrowthProcess>(seed, stream);
  };
  s.valid_time = GraphGrowthProcess::valid_time;
  return s;
}

inline ProcessSpec make_permutation_from_scratch_spec() {
  ProcessSpec s;
  s.name = "permutation-from-scratch";
  s.domain = std::make_shared<PermutationDomain>();
  s.schedule = ScheduleKind::Deterministic;
  s.instantiate = [](std::uint64_t seed, std::uint64_t stream) {
    return std::make_unique<PermutationFromScratchProcess>(seed, stream);
  };
  s.valid_time = PermutationFromScratchProcess::valid_time;
  return s;
}

inline ProcessSpec make_synthetic_bernoulli_spec(PTemplate p) {
  ProcessSpec s;
  s.name = "synthetic-bernoulli";
  s.domain = make_word_domain(2);
  s.schedule = ScheduleKind::AllValid;
  s.instantiate = [p](std::uint64_t seed, std::uint64_t stream) {
    return std::make_unique<SyntheticBernoulliProcess>(p, seed, stream);
  };
  return s;
}

}  // namespace genericase
