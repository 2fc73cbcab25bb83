#include "richlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "richlab/error.hpp"

namespace richlab {

Estimate mean_estimate(std::span<const double> samples, double z) {
  if (samples.empty()) throw ContractViolation("mean_estimate: empty sample");
  const auto n = static_cast<double>(samples.size());
  double sum = 0;
  for (const double v : samples) sum += v;
  const double mean = sum / n;
  Estimate e{mean, mean, mean, static_cast<std::int64_t>(samples.size()), EstimatorKind::MeanClt};
  if (samples.size() < 2) return e;
  double ss = 0;
  for (const double v : samples) ss += (v - mean) * (v - mean);
  const double half = z * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  e.ci_lo = mean - half;
  e.ci_hi = mean + half;
  return e;
}

Estimate wilson_estimate(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) throw ContractViolation("wilson_estimate: need at least one trial");
  if (successes < 0 || successes > trials) throw ContractViolation("wilson_estimate: successes out of range");
  const auto n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Estimate e{p, std::max(0.0, center - half), std::min(1.0, center + half), trials, EstimatorKind::ProportionWilson};
  // Guard the invariant lo <= p <= hi against rounding at p in {0, 1}.
  e.ci_lo = std::min(e.ci_lo, p);
  e.ci_hi = std::max(e.ci_hi, p);
  return e;
}

double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // Q = 1 - sqrt(2 pi) / x * sum_{j>=1} exp(-(2j-1)^2 pi^2 / (8 x^2))
    const double k = -std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double sum = 0;
    for (int j = 1; j <= 6; ++j) {
      const double m = 2.0 * j - 1.0;
      sum += std::exp(k * m * m);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * sum, 0.0, 1.0);
  }
  double sum = 0;
  double sign = 1;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += sign * term;
    if (term < 1e-300) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ContractViolation("ks_two_sample: both samples must be nonempty");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto na = static_cast<double>(sa.size());
  const auto nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double m = na * nb / (na + nb);
  const double root = std::sqrt(m);
  return {d, kolmogorov_q((root + 0.12 + 0.11 / root) * d)};
}

namespace {

std::int64_t cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  // b > 0
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<RowSpan> hull_rows(std::span<const Vec2> hull) {
  std::vector<RowSpan> rows;
  if (hull.empty()) return rows;
  std::int64_t y_min = hull[0].y, y_max = hull[0].y;
  for (const auto& v : hull) {
    y_min = std::min(y_min, v.y);
    y_max = std::max(y_max, v.y);
  }
  const auto n_rows = static_cast<std::size_t>(y_max - y_min + 1);
  std::vector<std::int64_t> lo(n_rows, std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> hi(n_rows, std::numeric_limits<std::int64_t>::min());
  auto include = [&](std::int64_t y, std::int64_t x_ceil, std::int64_t x_floor) {
    const auto r = static_cast<std::size_t>(y - y_min);
    lo[r] = std::min(lo[r], x_ceil);
    hi[r] = std::max(hi[r], x_floor);
  };
  for (const auto& v : hull) include(v.y, v.x, v.x);
  for (std::size_t i = 0; i < hull.size(); ++i) {
    Vec2 a = hull[i];
    Vec2 b = hull[(i + 1) % hull.size()];
    if (a.y == b.y) continue;
    if (a.y > b.y) std::swap(a, b);
    const std::int64_t dy = b.y - a.y;
    const std::int64_t dx = b.x - a.x;
    for (std::int64_t y = a.y; y <= b.y; ++y) {
      const std::int64_t num = a.x * dy + (y - a.y) * dx;  // x = num / dy
      include(y, ceil_div(num, dy), floor_div(num, dy));
    }
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (lo[r] <= hi[r]) rows.push_back({y_min + static_cast<std::int64_t>(r), lo[r], hi[r]});
  }
  return rows;
}

std::int64_t lattice_points_in_hull(std::span<const Vec2> hull) {
  std::int64_t n = 0;
  for (const auto& r : hull_rows(hull)) n += r.x_hi - r.x_lo + 1;
  return n;
}

}  // namespace richlab
