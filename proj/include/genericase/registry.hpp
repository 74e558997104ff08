#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "genericase/common.hpp"
#include "genericase/domain.hpp"
#include "genericase/machine.hpp"
#include "genericase/process.hpp"

namespace genericase {

/// Parameter bag for registry factories; values come from config tables.
class ParamMap {
 public:
  void set_int(const std::string& k, std::int64_t v) { ints_[k] = v; }
  void set_double(const std::string& k, double v) { doubles_[k] = v; }
  void set_string(const std::string& k, std::string v) { strings_[k] = std::move(v); }

  std::int64_t get_int(const std::string& k, std::int64_t fallback) const {
    auto it = ints_.find(k);
    return it == ints_.end() ? fallback : it->second;
  }
  double get_double(const std::string& k, double fallback) const {
    auto it = doubles_.find(k);
    if (it != doubles_.end()) return it->second;
    auto ii = ints_.find(k);
    return ii == ints_.end() ? fallback : static_cast<double>(ii->second);
  }
  std::string get_string(const std::string& k, std::string fallback) const {
    auto it = strings_.find(k);
    return it == strings_.end() ? std::move(fallback) : it->second;
  }

  const std::map<std::string, std::int64_t>& ints() const { return ints_; }
  const std::map<std::string, double>& doubles() const { return doubles_; }
  const std::map<std::string, std::string>& strings() const { return strings_; }

 private:
  std::map<std::string, std::int64_t> ints_;
  std::map<std::string, double> doubles_;
  std::map<std::string, std::string> strings_;
};

namespace detail {

inline std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

inline std::int64_t count_sigma_t(const std::string& letters) {
  std::int64_t sigma = 0;
  for (char c : letters) {
    if (c == 't') ++sigma;
    if (c == 'T') --sigma;
  }
  return sigma;
}

inline const std::string* letters_of(const Element& e) {
  if (e.holds<Word>()) return &e.get<Word>().letters;
  if (e.holds<ReducedWord>()) return &e.get<ReducedWord>().letters;
  return nullptr;
}

}  // namespace detail

inline std::vector<std::string> registered_domains() {
  return {"graph", "hnn-word", "permutation", "reduced-word", "word"};
}

inline std::vector<std::string> registered_processes() {
  return {"ball-uniform",    "graph-growth",          "nonbacktracking-walk",
          "permutation-from-scratch", "restricted-subalphabet", "synthetic-bernoulli",
          "uniform-word"};
}

inline std::vector<std::string> registered_machines() {
  return {"constant-output", "dfa-starts-with-a", "exponent-sum", "instant-halt",
          "never-halt",      "synthetic-acceptor", "table-ab"};
}

inline std::vector<std::string> registered_subsets() {
  return {"all", "empty", "even-length", "has-edge", "sigma-t-nonzero",
          "starts-with-a"};
}

inline std::vector<std::string> registered_oracles() {
  return {"exponent-sum-reference", "starts-with-a-indicator", "table-reference"};
}

inline std::shared_ptr<const Domain> make_domain(const std::string& name,
                                                 const ParamMap& params) {
  const int m = static_cast<int>(params.get_int("m", 2));
  if (name == "word") return make_word_domain(m);
  if (name == "hnn-word") return make_hnn_word_domain(m);
  if (name == "reduced-word") return std::make_shared<ReducedWordDomain>(m);
  if (name == "graph") return std::make_shared<GraphDomain>();
  if (name == "permutation") return std::make_shared<PermutationDomain>();
  throw ConfigError("unknown domain '" + name +
                    "'; registered: " + detail::joined(registered_domains()));
}

inline PTemplate parse_p_template(const ParamMap& params) {
  const std::string kind = params.get_string("p", "constant");
  PTemplate p;
  if (kind == "constant") {
    p.kind = PTemplate::Kind::Constant;
    p.value = params.get_double("value", 0.5);
    if (p.value < 0.0 || p.value > 1.0)
      throw ConfigError("synthetic-bernoulli: value must be in [0, 1]");
  } else if (kind == "one-minus-pow") {
    p.kind = PTemplate::Kind::OneMinusPow;
    p.base = params.get_double("base", 2.0);
    if (p.base <= 1.0) throw ConfigError("synthetic-bernoulli: base must be > 1");
  } else if (kind == "one-minus-inverse") {
    p.kind = PTemplate::Kind::OneMinusInverse;
  } else {
    throw ConfigError("unknown p template '" + kind +
                      "'; registered: constant, one-minus-inverse, one-minus-pow");
  }
  return p;
}

/// Builds a process spec by name. `domain` (from the config's domain table,
/// may be null) matters only for uniform-word, which draws letters from the
/// given word-like domain; other processes own their domain.
inline ProcessSpec make_process(const std::string& name, const ParamMap& params,
                                std::shared_ptr<const Domain> domain = nullptr) {
  const int m = static_cast<int>(params.get_int("m", 2));
  if (name == "uniform-word") {
    std::shared_ptr<const WordDomain> wd;
    if (domain) {
      wd = std::dynamic_pointer_cast<const WordDomain>(domain);
      if (!wd)
        throw ConfigError("uniform-word requires a word or hnn-word domain, got " +
                          domain->name());
    } else {
      wd = make_word_domain(m);
    }
    return make_uniform_word_spec(wd);
  }
  if (name == "nonbacktracking-walk") return make_nonbacktracking_walk_spec(m);
  if (name == "restricted-subalphabet") return make_restricted_subalphabet_spec(m);
  if (name == "ball-uniform") return make_ball_uniform_spec(m);
  if (name == "graph-growth") return make_graph_growth_spec();
  if (name == "permutation-from-scratch") return make_permutation_from_scratch_spec();
  if (name == "synthetic-bernoulli")
    return make_synthetic_bernoulli_spec(parse_p_template(params));
  throw ConfigError("unknown process '" + name +
                    "'; registered: " + detail::joined(registered_processes()));
}

inline std::shared_ptr<Machine> make_machine(const std::string& name,
                                             const ParamMap& params) {
  const int m = static_cast<int>(params.get_int("m", 2));
  if (name == "exponent-sum") return std::make_shared<ExponentSumMachine>(m);
  if (name == "table-ab") return std::make_shared<TableMachine>();
  if (name == "dfa-starts-with-a") return make_dfa_starts_with_a();
  if (name == "instant-halt") return make_instant_halt();
  if (name == "never-halt") return std::make_shared<NeverHaltMachine>();
  if (name == "constant-output")
    return make_constant_output(params.get_string("label", "0"));
  if (name == "synthetic-acceptor") return std::make_shared<SyntheticAcceptorMachine>();
  throw ConfigError("unknown machine '" + name +
                    "'; registered: " + detail::joined(registered_machines()));
}

inline SubsetSpec make_subset(const std::string& name) {
  if (name == "all") return {"all", [](const Element&) { return true; }};
  if (name == "empty") return {"empty", [](const Element&) { return false; }};
  if (name == "starts-with-a")
    return {"starts-with-a", [](const Element& e) {
              const std::string* w = detail::letters_of(e);
              return w && !w->empty() && w->front() == 'a';
            }};
  if (name == "even-length")
    return {"even-length", [](const Element& e) {
              const std::string* w = detail::letters_of(e);
              return w && w->size() % 2 == 0;
            }};
  if (name == "sigma-t-nonzero")
    return {"sigma-t-nonzero", [](const Element& e) {
              const std::string* w = detail::letters_of(e);
              return w && detail::count_sigma_t(*w) != 0;
            }};
  if (name == "has-edge")
    return {"has-edge", [](const Element& e) {
              return e.holds<Graph>() && !e.get<Graph>().edges.empty();
            }};
  throw ConfigError("unknown subset '" + name +
                    "'; registered: " + detail::joined(registered_subsets()));
}

/// Reference functions h for correctness audits; total on their domains.
inline std::function<std::string(const Element&)> make_oracle(const std::string& name) {
  if (name == "starts-with-a-indicator")
    return [](const Element& e) {
      const std::string* w = detail::letters_of(e);
      return (w && !w->empty() && w->front() == 'a') ? std::string("1")
                                                     : std::string("0");
    };
  if (name == "table-reference")
    return [](const Element& e) {
      const std::string* w = detail::letters_of(e);
      return (w && *w == "a") ? std::string("halt") : std::string("none");
    };
  if (name == "exponent-sum-reference")
    return [](const Element& e) {
      const std::string* w = detail::letters_of(e);
      return (w && detail::count_sigma_t(*w) != 0) ? std::string("not-in-D")
                                                   : std::string("in-D");
    };
  throw ConfigError("unknown oracle '" + name +
                    "'; registered: " + detail::joined(registered_oracles()));
}

/// Stable alphabetical listing of every registered identifier, with
/// parameter signatures and, for processes, the schedule kind.
inline std::string registry_listing() {
  std::string out;
  out += "domains:\n";
  out += "  graph\n";
  out += "  hnn-word (m: generator count, default 2)\n";
  out += "  permutation\n";
  out += "  reduced-word (m: generator count, default 2)\n";
  out += "  word (m: alphabet size, default 2)\n";
  out += "processes:\n";
  out += "  ball-uniform (m: alphabet size, default 2) [AllValid]\n";
  out += "  graph-growth [Deterministic: n_i = i(i+1)/2]\n";
  out += "  nonbacktracking-walk (m: generator count, default 2) [AllValid]\n";
  out += "  permutation-from-scratch [Deterministic: n_i = i(i+1)/2]\n";
  out += "  restricted-subalphabet (m: generator count, default 2) [AllValid]\n";
  out +=
      "  synthetic-bernoulli (p: constant|one-minus-inverse|one-minus-pow, value, "
      "base) [AllValid]\n";
  out += "  uniform-word (over the configured word/hnn-word domain) [AllValid]\n";
  out += "machines:\n";
  out += "  constant-output (label, default \"0\")\n";
  out += "  dfa-starts-with-a\n";
  out += "  exponent-sum (m: generator count, default 2)\n";
  out += "  instant-halt\n";
  out += "  never-halt\n";
  out += "  synthetic-acceptor\n";
  out += "  table-ab\n";
  out += "subsets:\n";
  out += "  all\n";
  out += "  empty\n";
  out += "  even-length\n";
  out += "  has-edge\n";
  out += "  sigma-t-nonzero\n";
  out += "  starts-with-a\n";
  out += "oracles:\n";
  out += "  exponent-sum-reference\n";
  out += "  starts-with-a-indicator\n";
  out += "  table-reference\n";
  return out;
}

}  // namespace genericase
