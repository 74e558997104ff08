#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "genericase/common.hpp"
#include "genericase/domain.hpp"
#include "genericase/element.hpp"

namespace genericase {

/// Result of one tick. After Output or HaltNoOutput the state is halted and
/// must not be ticked again.
struct StepResult {
  enum class Kind { Continue, Output, HaltNoOutput };
  Kind kind = Kind::Continue;
  std::string value;  // meaningful only for Output

  static StepResult cont() { return {Kind::Continue, {}}; }
  static StepResult output(std::string v) { return {Kind::Output, std::move(v)}; }
  static StepResult halt_no_output() { return {Kind::HaltNoOutput, {}}; }
};

/// Per-run mutable state. Machines are immutable and shareable; all run
/// progress lives here, so concurrent runs on distinct states are safe.
class MachineState {
 public:
  virtual ~MachineState() = default;
  bool halted = false;
};

/// A step-counted partial deterministic algorithm. Each tick costs exactly
/// one time unit; t(w) is the tick index of the Output, or infinite when the
/// machine halts without output or never halts.
class Machine {
 public:
  Machine(std::string name, std::shared_ptr<const Domain> domain)
      : name_(std::move(name)), domain_(std::move(domain)) {}
  virtual ~Machine() = default;

  const std::string& name() const { return name_; }

  /// Accepted domain; null means any non-auxiliary element.
  const std::shared_ptr<const Domain>& domain() const { return domain_; }

  bool accepts(const Element& e) const {
    if (e.is_aux()) return false;
    return !domain_ || domain_->contains(e);
  }

  virtual std::unique_ptr<MachineState> load(const Element& input) const = 0;

  /// Advances the state by one time unit. Ticking a halted state is a
  /// contract violation (a bug in the caller), not a recoverable error.
  StepResult tick(MachineState& state) const {
    if (state.halted)
      throw std::logic_error("machine " + name_ + ": tick on a halted state");
    StepResult r = do_tick(state);
    if (r.kind != StepResult::Kind::Continue) state.halted = true;
    return r;
  }

 protected:
  virtual StepResult do_tick(MachineState& state) const = 0;

 private:
  std::string name_;
  std::shared_ptr<const Domain> domain_;
};

/// Outcome of a fuel-bounded run. RejectedHalt and FuelExhausted both mean
/// t(w) > fuel; RejectedHalt additionally certifies t(w) is infinite.
struct RunOutcome {
  enum class Kind { Produced, RejectedHalt, FuelExhausted };
  Kind kind = Kind::FuelExhausted;
  std::string value;        // Produced only
  std::uint64_t steps = 0;  // ticks executed (== fuel for FuelExhausted)

  bool produced() const { return kind == Kind::Produced; }
};

/// Runs `machine` on `element` for at most `fuel` ticks. The event
/// t(w) <= f is decided exactly by running with fuel = f: Produced if and
/// only if the output tick happened within the budget.
inline RunOutcome run(const Machine& machine, const Element& element,
                      std::uint64_t fuel) {
  if (fuel == 0) throw std::invalid_argument("run: fuel must be >= 1");
  if (!machine.accepts(element))
    throw DomainMismatchError("machine " + machine.name() +
                              " does not accept element '" + canonical_text(element) +
                              "'");
  auto state = machine.load(element);
  for (std::uint64_t s = 1; s <= fuel; ++s) {
    StepResult r = machine.tick(*state);
    switch (r.kind) {
      case StepResult::Kind::Output:
        return {RunOutcome::Kind::Produced, std::move(r.value), s};
      case StepResult::Kind::HaltNoOutput:
        return {RunOutcome::Kind::RejectedHalt, {}, s};
      case StepResult::Kind::Continue:
        break;
    }
  }
  return {RunOutcome::Kind::FuelExhausted, {}, fuel};
}

namespace detail {

struct WordScanState : MachineState {
  std::string letters;
  std::size_t pos = 0;
};

}  // namespace detail

/// Reads its input word left to right, one letter per tick, tracking the
/// exponent sum of the stable letter t. The decision tick after the last
/// letter outputs "not-in-D" when the sum is nonzero; a zero sum loops
/// forever, so t(w) = n + 1 when sigma != 0 and infinity otherwise.
class ExponentSumMachine : public Machine {
 public:
  explicit ExponentSumMachine(int m)
      : Machine("exponent-sum(m=" + std::to_string(m) + ")", make_hnn_word_domain(m)) {}

  std::unique_ptr<MachineState> load(const Element& input) const override {
    auto st = std::make_unique<State>();
    st->letters = input.get<Word>().letters;
    return st;
  }

 protected:
  StepResult do_tick(MachineState& state) const override {
    auto& st = static_cast<State&>(state);
    if (st.pos < st.letters.size()) {
      char c = st.letters[st.pos++];
      if (c == 't') ++st.sigma;
      if (c == 'T') --st.sigma;
      return StepResult::cont();
    }
    if (st.sigma != 0) return StepResult::output("not-in-D");
    return StepResult::cont();
  }

 private:
  struct State : detail::WordScanState {
    std::int64_t sigma = 0;
  };
};

/// Lookup machine on the two-element domain {a, b}: input "a" outputs in a
/// single tick, everything else loops forever.
class TableMachine : public Machine {
 public:
  TableMachine() : Machine("table-ab", make_word_domain(2)) {}

  std::unique_ptr<MachineState> load(const Element& input) const override {
    auto st = std::make_unique<detail::WordScanState>();
    st->letters = input.get<Word>().letters;
    return st;
  }

 protected:
  StepResult do_tick(MachineState& state) const override {
    auto& st = static_cast<detail::WordScanState&>(state);
    if (st.letters == "a") return StepResult::output("halt");
    return StepResult::cont();
  }
};

/// Total linear-time reference machine: runs a DFA over the input, one tick
/// per letter, then one decision tick outputting "1" (accept) or "0".
class DfaMachine : public Machine {
 public:
  DfaMachine(std::string name, std::shared_ptr<const Domain> domain,
             std::map<std::pair<int, char>, int> transitions, std::set<int> accepting)
      : Machine(std::move(name), std::move(domain)),
        transitions_(std::move(transitions)),
        accepting_(std::move(accepting)) {}

  std::unique_ptr<MachineState> load(const Element& input) const override {
    auto st = std::make_unique<State>();
    st->letters = input.get<Word>().letters;
    return st;
  }

 protected:
  StepResult do_tick(MachineState& state) const override {
    auto& st = static_cast<State&>(state);
    if (st.pos < st.letters.size()) {
      auto it = transitions_.find({st.dfa_state, st.letters[st.pos++]});
      st.dfa_state = it == transitions_.end() ? -1 : it->second;
      return StepResult::cont();
    }
    return StepResult::output(accepting_.count(st.dfa_state) ? "1" : "0");
  }

 private:
  struct State : detail::WordScanState {
    int dfa_state = 0;
  };

  std::map<std::pair<int, char>, int> transitions_;
  std::set<int> accepting_;
};

/// DFA instance deciding whether a word over {a, b} starts with 'a';
/// t(w) = |w| + 1 on every input.
inline std::shared_ptr<Machine> make_dfa_starts_with_a() {
  std::map<std::pair<int, char>, int> t{
      {{0, 'a'}, 1}, {{0, 'b'}, 2}, {{1, 'a'}, 1}, {{1, 'b'}, 1},
      {{2, 'a'}, 2}, {{2, 'b'}, 2}};
  return std::make_shared<DfaMachine>("dfa-starts-with-a", make_word_domain(2),
                                      std::move(t), std::set<int>{1});
}

/// Outputs a fixed label on the first tick for every input.
class ConstantOutputMachine : public Machine {
 public:
  explicit ConstantOutputMachine(std::string name, std::string label)
      : Machine(std::move(name), nullptr), label_(std::move(label)) {}

  std::unique_ptr<MachineState> load(const Element&) const override {
    return std::make_unique<MachineState>();
  }

 protected:
  StepResult do_tick(MachineState&) const override {
    return StepResult::output(label_);
  }

 private:
  std::string label_;
};

inline std::shared_ptr<Machine> make_instant_halt() {
  return std::make_shared<ConstantOutputMachine>("instant-halt", "done");
}

inline std::shared_ptr<Machine> make_constant_output(std::string label) {
  return std::make_shared<ConstantOutputMachine>("constant-output", std::move(label));
}

/// Never produces anything; every run ends in FuelExhausted.
class NeverHaltMachine : public Machine {
 public:
  NeverHaltMachine() : Machine("never-halt", nullptr) {}

  std::unique_ptr<MachineState> load(const Element&) const override {
    return std::make_unique<MachineState>();
  }

 protected:
  StepResult do_tick(MachineState&) const override { return StepResult::cont(); }
};

/// Pairs with the synthetic Bernoulli process: one tick, output "accept" on
/// the accepting token "a", halt without output otherwise.
class SyntheticAcceptorMachine : public Machine {
 public:
  SyntheticAcceptorMachine() : Machine("synthetic-acceptor", make_word_domain(2)) {}

  std::unique_ptr<MachineState> load(const Element& input) const override {
    auto st = std::make_unique<detail::WordScanState>();
    st->letters = input.get<Word>().letters;
    return st;
  }

 protected:
  StepResult do_tick(MachineState& state) const override {
    auto& st = static_cast<detail::WordScanState&>(state);
    if (st.letters == "a") return StepResult::output("accept");
    return StepResult::halt_no_output();
  }
};

}  // namespace genericase
