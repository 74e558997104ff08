#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "genericase/common.hpp"
#include "genericase/domain.hpp"

namespace genericase {

/// Densities are exact: spheres at desk scale are small enough that the
/// weighted-average identity can be checked with zero tolerance.
using Rational = boost::rational<std::int64_t>;

inline double rational_to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

struct DensityPoint {
  std::uint64_t n = 0;
  std::uint64_t sphere_count = 0;
  std::uint64_t sphere_hits = 0;
  Rational sphere_density{0};
  Rational ball_density{0};
};

/// Exact density profile of a subset. The windowed extrema over the last
/// ceil(len/3) points stand in for liminf/limsup; no limit claim is made.
struct DensitySequence {
  std::string domain_name;
  std::string subset_name;
  std::vector<DensityPoint> points;
  std::size_t window = 0;
  Rational ball_min{0};
  Rational ball_max{0};
  Rational sphere_min{0};
  Rational sphere_max{0};
};

namespace detail {

struct SphereTally {
  std::uint64_t count = 0;
  std::uint64_t hits = 0;
};

inline SphereTally tally_sphere(const Domain& domain, const SubsetSpec& subset,
                                std::uint64_t n, std::uint64_t cap) {
  SphereTally t;
  domain.for_each_in_sphere(
      n,
      [&t, &subset](const Element& e) {
        ++t.count;
        if (subset.predicate(e)) ++t.hits;
      },
      cap);
  return t;
}

}  // namespace detail

/// |S(n) ∩ subset| / |S(n)|, exact.
inline Rational sphere_density(const Domain& domain, const SubsetSpec& subset,
                               std::uint64_t n,
                               std::uint64_t cap = kDefaultEnumerationCap) {
  auto t = detail::tally_sphere(domain, subset, n, cap);
  if (t.count == 0)
    throw EstimateError("sphere S(" + std::to_string(n) + ") of domain " +
                        domain.name() + " is empty");
  return {static_cast<std::int64_t>(t.hits), static_cast<std::int64_t>(t.count)};
}

/// |B(n) ∩ subset| / |B(n)| over the ball = union of spheres 0..n, exact.
inline Rational ball_density(const Domain& domain, const SubsetSpec& subset,
                             std::uint64_t n,
                             std::uint64_t cap = kDefaultEnumerationCap) {
  std::uint64_t count = 0;
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    auto t = detail::tally_sphere(domain, subset, k, cap);
    count += t.count;
    hits += t.hits;
  }
  if (count == 0)
    throw EstimateError("ball B(" + std::to_string(n) + ") of domain " +
                        domain.name() + " is empty");
  return {static_cast<std::int64_t>(hits), static_cast<std::int64_t>(count)};
}

/// Full profile for n = 0..n_max. Leading empty spheres (domains whose
/// smallest object has positive size) are skipped rather than recorded.
inline DensitySequence density_sequence(const Domain& domain, const SubsetSpec& subset,
                                        std::uint64_t n_max,
                                        std::uint64_t cap = kDefaultEnumerationCap) {
  DensitySequence seq;
  seq.domain_name = domain.name();
  seq.subset_name = subset.name;
  std::uint64_t cum_count = 0;
  std::uint64_t cum_hits = 0;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    auto t = detail::tally_sphere(domain, subset, n, cap);
    if (t.count == 0 && cum_count == 0) continue;
    cum_count += t.count;
    cum_hits += t.hits;
    DensityPoint p;
    p.n = n;
    p.sphere_count = t.count;
    p.sphere_hits = t.hits;
    p.sphere_density = t.count == 0 ? Rational{0}
                                    : Rational{static_cast<std::int64_t>(t.hits),
                                               static_cast<std::int64_t>(t.count)};
    p.ball_density = Rational{static_cast<std::int64_t>(cum_hits),
                              static_cast<std::int64_t>(cum_count)};
    seq.points.push_back(p);
  }
  if (seq.points.empty())
    throw EstimateError("density_sequence: no nonempty spheres up to n_max");
  seq.window = (seq.points.size() + 2) / 3;
  const std::size_t start = seq.points.size() - seq.window;
  seq.ball_min = seq.ball_max = seq.points[start].ball_density;
  seq.sphere_min = seq.sphere_max = seq.points[start].sphere_density;
  for (std::size_t i = start + 1; i < seq.points.size(); ++i) {
    const auto& p = seq.points[i];
    if (p.ball_density < seq.ball_min) seq.ball_min = p.ball_density;
    if (p.ball_density > seq.ball_max) seq.ball_max = p.ball_density;
    if (p.sphere_density < seq.sphere_min) seq.sphere_min = p.sphere_density;
    if (p.sphere_density > seq.sphere_max) seq.sphere_max = p.sphere_density;
  }
  return seq;
}

}  // namespace genericase
