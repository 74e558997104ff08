#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "genericase/common.hpp"

namespace genericase {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for k successes out of N at critical value z.
/// Boundary cases pin the exact endpoints: k = 0 gives low = 0, k = N gives
/// high = 1, so trivial curves stay exactly trivial.
inline Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.96) {
  if (n == 0) throw EstimateError("wilson_interval: N must be >= 1");
  if (k > n) throw std::invalid_argument("wilson_interval: k must be <= N");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  Interval ci{center - half, center + half};
  if (ci.low < 0.0 || k == 0) ci.low = 0.0;
  if (ci.high > 1.0 || k == n) ci.high = 1.0;
  return ci;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;  // coefficient of determination; 1 for a degenerate fit
};

/// Least-squares line through (x, y) pairs. R^2 is defined as 1 when the
/// responses are constant (zero total variance).
inline LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear_fit: need >= 2 paired points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (vx <= 0.0) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy <= 0.0 ? 1.0 : (cxy * cxy) / (vx * vy);
  return f;
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::uint64_t df = 0;
  double p_value = 1.0;
};

/// Pearson goodness-of-fit against the given expected counts (df = cells-1).
inline ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed,
                                       const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square_test: need >= 2 matching cells");
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0)
      throw std::invalid_argument("chi_square_test: expected counts must be positive");
    const double d = static_cast<double>(observed[i]) - expected[i];
    r.statistic += d * d / expected[i];
  }
  r.df = observed.size() - 1;
  boost::math::chi_squared dist(static_cast<double>(r.df));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

/// Uniformity variant: N observations spread over observed.size() cells.
inline ChiSquareResult chi_square_uniformity(const std::vector<std::uint64_t>& observed) {
  std::uint64_t total = 0;
  for (std::uint64_t c : observed) total += c;
  std::vector<double> expected(observed.size(),
                               static_cast<double>(total) /
                                   static_cast<double>(observed.size()));
  return chi_square_test(observed, expected);
}

}  // namespace genericase
