#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace richlab {

inline constexpr double kZ95 = 1.959963984540054;

enum class EstimatorKind { MeanClt, ProportionWilson };

/// Point estimate with a 95% interval.
struct Estimate {
  double mean = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  std::int64_t n = 0;
  EstimatorKind kind = EstimatorKind::MeanClt;

  double half_width() const { return 0.5 * (ci_hi - ci_lo); }
  bool contains(double v) const { return ci_lo <= v && v <= ci_hi; }
  bool overlaps(const Estimate& o) const { return ci_lo <= o.ci_hi && o.ci_lo <= ci_hi; }
  /// Returns a copy with every field scaled by c > 0.
  Estimate scaled(double c) const { return {mean * c, ci_lo * c, ci_hi * c, n, kind}; }
};

/// Sample mean with a normal-approximation interval mean +- z s / sqrt(n).
/// Throws ContractViolation on an empty sample.
Estimate mean_estimate(std::span<const double> samples, double z = kZ95);

/// Sample proportion with the Wilson score interval.
Estimate wilson_estimate(std::int64_t successes, std::int64_t trials, double z = kZ95);

struct KsResult {
  double statistic = 0;  // D = sup |F_A - F_B|
  double p_value = 1;
};

/// Complementary CDF of the Kolmogorov distribution, Q(x) = 2 sum (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_q(double x);

/// Classical two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q((sqrt(m) + 0.12 + 0.11 / sqrt(m)) D), m = n_a n_b / (n_a + n_b).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Integer point in the plane.
struct Vec2 {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend auto operator<=>(const Vec2&, const Vec2&) = default;
};

/// Convex hull (counter-clockwise, no collinear vertices) via the monotone chain.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Number of integer points inside or on the boundary of a convex polygon given by its
/// counter-clockwise hull. Degenerate hulls (point, segment) count the lattice points on them.
std::int64_t lattice_points_in_hull(std::span<const Vec2> hull);

/// For each row y in [y_min, y_max] of the hull, the inclusive x-range of lattice points it covers.
struct RowSpan {
  std::int64_t y;
  std::int64_t x_lo;
  std::int64_t x_hi;
};
std::vector<RowSpan> hull_rows(std::span<const Vec2> hull);

}  // namespace richlab
