#include "catch_amalgamated.hpp"

#include <cstdint>
#include <vector>

#include "genericase/density.hpp"
#include "genericase/registry.hpp"
#include "oracles.hpp"

using namespace genericase;

TEST_CASE("sphere density of starts-with-a is exactly one half", "[density]") {
  auto dom = make_word_domain(2);
  auto sub = make_subset("starts-with-a");
  for (int n = 1; n <= 8; ++n)
    CHECK(sphere_density(*dom, sub, static_cast<std::uint64_t>(n)) == Rational(1, 2));
  CHECK(sphere_density(*dom, sub, 0) == Rational(0));
}

TEST_CASE("ball density of starts-with-a has the closed form", "[density]") {
  // |B(n) ∩ D| = 2^n - 1 prefixed words out of |B(n)| = 2^(n+1) - 1.
  auto dom = make_word_domain(2);
  auto sub = make_subset("starts-with-a");
  CHECK(ball_density(*dom, sub, 3) == Rational(7, 15));
  for (int n = 1; n <= 12; ++n) {
    const auto p2n = static_cast<std::int64_t>(oracles::pow_u64(2, n));
    CHECK(ball_density(*dom, sub, static_cast<std::uint64_t>(n)) ==
          Rational(p2n - 1, 2 * p2n - 1));
  }
}

TEST_CASE("ball density converges at the Stolz rate", "[density]") {
  auto dom = make_word_domain(2);
  auto sub = make_subset("starts-with-a");
  for (int n = 1; n <= 12; ++n) {
    Rational gap = ball_density(*dom, sub, static_cast<std::uint64_t>(n)) - Rational(1, 2);
    if (gap < Rational(0)) gap = -gap;
    CHECK(gap <= Rational(1, static_cast<std::int64_t>(oracles::pow_u64(2, n))));
  }
}

TEST_CASE("trivial subsets have trivial densities", "[density]") {
  auto dom = make_word_domain(2);
  CHECK(sphere_density(*dom, make_subset("all"), 5) == Rational(1));
  CHECK(ball_density(*dom, make_subset("all"), 5) == Rational(1));
  CHECK(sphere_density(*dom, make_subset("empty"), 5) == Rational(0));
  CHECK(ball_density(*dom, make_subset("empty"), 5) == Rational(0));
}

TEST_CASE("sigma-t sphere densities match the exact trinomial count", "[density]") {
  // Over {t, T, b, B, c, C}, the words with sigma_t = 0 are counted exactly
  // by an independent integer DP; the density of the complement follows.
  auto dom = make_hnn_word_domain(2);
  auto sub = make_subset("sigma-t-nonzero");
  CHECK(sphere_density(*dom, sub, 2) == Rational(1, 2));  // 18 of 36
  Rational prev(0);
  for (int n = 1; n <= 8; ++n) {
    const auto total = static_cast<std::int64_t>(oracles::pow_u64(6, n));
    const auto zero = static_cast<std::int64_t>(oracles::sigma_zero_count(4, n));
    Rational expected(total - zero, total);
    Rational got = sphere_density(*dom, sub, static_cast<std::uint64_t>(n));
    CHECK(got == expected);
    if (n >= 2) CHECK(got > prev);  // strictly increasing from n = 2 on
    prev = got;
  }
  CHECK(prev > Rational(3, 5));
}

TEST_CASE("trinomial DP agrees with brute force on tiny spheres", "[density]") {
  for (int n = 1; n <= 6; ++n)
    CHECK(oracles::sigma_zero_count(4, n) == oracles::brute_force_sigma_zero(4, n));
  for (int n = 1; n <= 7; ++n)
    CHECK(oracles::sigma_zero_count(2, n) == oracles::brute_force_sigma_zero(2, n));
  // Frozen values: Pr(sigma_t = 0) at n = 8 and the n = 1000 tail.
  const double p8 = static_cast<double>(oracles::sigma_zero_count(4, 8)) /
                    static_cast<double>(oracles::pow_u64(6, 8));
  CHECK(p8 == Catch::Approx(0.245).margin(0.001));
  CHECK(oracles::sigma_zero_probability(4, 1000) == Catch::Approx(0.0219).margin(0.0005));
}

TEST_CASE("ball density is the sphere-weighted average, exactly", "[density]") {
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
    auto sub = make_subset(c.subset);
    auto seq = density_sequence(*dom, sub, 10);
    std::uint64_t cum_count = 0;
    std::uint64_t cum_hits = 0;
    for (const auto& p : seq.points) {
      cum_count += p.sphere_count;
      cum_hits += p.sphere_hits;
      // Zero tolerance: recombining the sphere tallies must reproduce the
      // recorded ball density as an identity of rationals.
      CHECK(p.ball_density == Rational(static_cast<std::int64_t>(cum_hits),
                                       static_cast<std::int64_t>(cum_count)));
      CHECK(p.sphere_density >= Rational(0));
      CHECK(p.sphere_density <= Rational(1));
      CHECK(p.ball_density >= Rational(0));
      CHECK(p.ball_density <= Rational(1));
    }
  }
}

TEST_CASE("density sequence window tracks the last third", "[density]") {
  auto dom = make_word_domain(2);
  auto seq = density_sequence(*dom, make_subset("even-length"), 10);
  REQUIRE(seq.points.size() == 11);  // n = 0..10
  CHECK(seq.window == 4);            // ceil(11/3)
  // Spheres 7..10 alternate 0 and 1, so the sphere extrema span [0, 1].
  CHECK(seq.sphere_min == Rational(0));
  CHECK(seq.sphere_max == Rational(1));
  CHECK(seq.ball_min > Rational(0));
  CHECK(seq.ball_max < Rational(1));
}

TEST_CASE("density over deferred-start domains skips empty spheres", "[density]") {
  GraphDomain dom;
  auto seq = density_sequence(dom, make_subset("has-edge"), 4);
  REQUIRE(seq.points.size() == 4);  // n = 1..4; the empty sphere 0 is skipped
  CHECK(seq.points[0].n == 1);
  CHECK(seq.points[0].sphere_hits == 0);
  CHECK(seq.points[2].sphere_density == Rational(7, 8));
  CHECK(seq.points[3].sphere_density == Rational(63, 64));
}

TEST_CASE("density respects the enumeration cap", "[density]") {
  auto dom = make_word_domain(2);
  CHECK_THROWS_AS(density_sequence(*dom, make_subset("all"), 21), ResourceLimitError);
  CHECK_THROWS_AS(sphere_density(*dom, make_subset("all"), 8, 100), ResourceLimitError);
}

TEST_CASE("rational helpers", "[density]") {
  CHECK(rational_text(Rational(7, 15)) == "7/15");
  CHECK(rational_text(Rational(0)) == "0/1");
  CHECK(rational_to_double(Rational(1, 2)) == 0.5);
}
