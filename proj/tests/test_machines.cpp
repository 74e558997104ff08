#include "catch_amalgamated.hpp"

#include <cstdint>
#include <string>

#include "genericase/machine.hpp"
#include "oracles.hpp"

using namespace genericase;

namespace {
int64_t sigma_of(const std::string& w) {
  int64_t s = 0;
  for (char c : w) {
    if (c == 't') ++s;
    if (c == 'T') --s;
  }
  return s;
}
}  // namespace

TEST_CASE("table machine decides the two-element table", "[machine]") {
  TableMachine table;
  auto a = run(table, Element::word("a"), 10);
  REQUIRE(a.kind == RunOutcome::Kind::Produced);
  CHECK(a.value == "halt");
  CHECK(a.steps == 1);

  auto b = run(table, Element::word("b"), 100);
  CHECK(b.kind == RunOutcome::Kind::FuelExhausted);
  CHECK(b.steps == 100);
}

TEST_CASE("exponent sum machine produces exactly off the diagonal", "[machine]") {
  ExponentSumMachine mach(2);

  auto out = run(mach, Element::word("tbc"), 10);
  REQUIRE(out.kind == RunOutcome::Kind::Produced);
  CHECK(out.value == "not-in-D");
  CHECK(out.steps == 4);  // three read ticks plus the decision tick

  CHECK(run(mach, Element::word("t"), 10).steps == 2);
  CHECK(run(mach, Element::word("tbT"), 100).kind == RunOutcome::Kind::FuelExhausted);
  CHECK(run(mach, Element::word(""), 50).kind == RunOutcome::Kind::FuelExhausted);
}

TEST_CASE("exponent sum split matches the sign of sigma", "[machine]") {
  ExponentSumMachine mach(2);
  auto dom = make_hnn_word_domain(2);
  for (int n = 0; n <= 3; ++n) {
    dom->for_each_in_sphere(n, [&](const Element& e) {
      auto r = run(mach, e, static_cast<std::uint64_t>(n) + 1);
      if (sigma_of(e.get<Word>().letters) != 0) {
        REQUIRE(r.kind == RunOutcome::Kind::Produced);
        CHECK(r.steps == static_cast<std::uint64_t>(n) + 1);
      } else {
        CHECK(r.kind == RunOutcome::Kind::FuelExhausted);
      }
    });
  }
}

TEST_CASE("sigma-zero inputs never produce, at any fuel", "[machine]") {
  ExponentSumMachine mach(2);
  WordDomain sub("b-words", "bBcC");
  sub.for_each_in_sphere(3, [&](const Element& e) {
    CHECK(run(mach, e, 50).kind == RunOutcome::Kind::FuelExhausted);
  });
}

TEST_CASE("producing within fuel f is monotone in f", "[machine]") {
  ExponentSumMachine mach(2);
  auto dom = make_hnn_word_domain(2);
  dom->for_each_in_sphere(2, [&](const Element& e) {
    bool prev = false;
    for (std::uint64_t f = 1; f <= 6; ++f) {
      bool now = run(mach, e, f).produced();
      if (prev) CHECK(now);  // once produced, stays produced under more fuel
      prev = now;
    }
  });
}

TEST_CASE("dfa machine answers membership in n+1 ticks", "[machine]") {
  auto dfa = make_dfa_starts_with_a();
  auto yes = run(*dfa, Element::word("ab"), 10);
  REQUIRE(yes.kind == RunOutcome::Kind::Produced);
  CHECK(yes.value == "1");
  CHECK(yes.steps == 3);

  auto no = run(*dfa, Element::word("ba"), 10);
  CHECK(no.value == "0");
  CHECK(no.steps == 3);

  CHECK(run(*dfa, Element::word(""), 10).value == "0");
  CHECK(run(*dfa, Element::word(""), 10).steps == 1);
  CHECK(run(*dfa, Element::word("abbb"), 4).kind == RunOutcome::Kind::FuelExhausted);
  CHECK(run(*dfa, Element::word("abbb"), 5).kind == RunOutcome::Kind::Produced);
  CHECK(run(*dfa, Element::word("abbb"), 5).steps == 5);  // fuel == t exactly
}

TEST_CASE("instant halt, never halt, constant output", "[machine]") {
  auto ih = make_instant_halt();
  auto r = run(*ih, Element::graph(3, {{1, 2}}), 5);
  REQUIRE(r.kind == RunOutcome::Kind::Produced);
  CHECK(r.value == "done");
  CHECK(r.steps == 1);

  NeverHaltMachine nh;
  CHECK(run(nh, Element::word("a"), 1000).kind == RunOutcome::Kind::FuelExhausted);

  auto co = make_constant_output("0");
  CHECK(run(*co, Element::permutation({2, 1}), 3).value == "0");
}

TEST_CASE("synthetic acceptor rejects by halting", "[machine]") {
  SyntheticAcceptorMachine mach;
  auto a = run(mach, Element::word("a"), 5);
  REQUIRE(a.kind == RunOutcome::Kind::Produced);
  CHECK(a.value == "accept");
  CHECK(a.steps == 1);

  auto b = run(mach, Element::word("b"), 5);
  CHECK(b.kind == RunOutcome::Kind::RejectedHalt);
  CHECK(b.steps == 1);
}

TEST_CASE("run preconditions", "[machine]") {
  TableMachine table;
  CHECK_THROWS_AS(run(table, Element::word("a"), 0), std::invalid_argument);
  CHECK_THROWS_AS(run(table, Element::word("xyz"), 5), DomainMismatchError);
  CHECK_THROWS_AS(run(table, Element::word("a").as_aux(), 5), DomainMismatchError);
  ExponentSumMachine es(2);
  CHECK_THROWS_AS(run(es, Element::reduced_word("ab"), 5), DomainMismatchError);
}

TEST_CASE("ticking a halted state is a logic error", "[machine]") {
  SyntheticAcceptorMachine mach;
  auto st = mach.load(Element::word("b"));
  CHECK(mach.tick(*st).kind == StepResult::Kind::HaltNoOutput);
  CHECK_THROWS_AS(mach.tick(*st), std::logic_error);
}

TEST_CASE("runs are deterministic", "[machine]") {
  ExponentSumMachine mach(2);
  Element w = Element::word("tTtbc");
  auto r1 = run(mach, w, 7);
  auto r2 = run(mach, w, 7);
  CHECK(r1.kind == r2.kind);
  CHECK(r1.value == r2.value);
  CHECK(r1.steps == r2.steps);
}
