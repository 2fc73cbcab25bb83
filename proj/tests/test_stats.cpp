#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "richlab/error.hpp"
#include "richlab/stats.hpp"

using namespace richlab;

TEST_CASE("KS statistic on tiny samples") {
  const std::vector<double> a{1, 2, 3}, b{100, 101, 102}, c{1.5, 2.5, 3.5};
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  CHECK(ks_two_sample(a, a).p_value == doctest::Approx(1.0));
  CHECK(ks_two_sample(a, b).statistic == 1.0);
  // Empirical CDFs differ by exactly 1/3 on [1, 1.5), [2, 2.5) and [3, 3.5).
  CHECK(ks_two_sample(a, c).statistic == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(ks_two_sample(a, std::vector<double>{}), ContractViolation);
}

TEST_CASE("kolmogorov_q agrees with the raw alternating series") {
  for (double x = 0.2; x <= 3.0; x += 0.05) CHECK(kolmogorov_q(x) == doctest::Approx(oracle::kolmogorov_q_series(x)).epsilon(1e-9));
  CHECK(kolmogorov_q(0.0) == 1.0);
  CHECK(kolmogorov_q(1.358) == doctest::Approx(0.05).epsilon(0.01));
}

TEST_CASE("KS p-values are roughly uniform under the null") {
  std::mt19937_64 gen(3);
  std::exponential_distribution<double> dist(1.0);
  int rejected = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<double> a(300), b(300);
    for (auto& v : a) v = dist(gen);
    for (auto& v : b) v = dist(gen);
    rejected += ks_two_sample(a, b).p_value < 0.05;
  }
  CHECK(rejected < 40);
}

TEST_CASE("Wilson interval closed form and coverage") {
  // 0 of 10: the interval is [0, z^2 / (n + z^2)].
  const auto e = wilson_estimate(0, 10);
  const double z2 = kZ95 * kZ95;
  CHECK(e.mean == 0.0);
  CHECK(e.ci_lo == doctest::Approx(0.0));
  CHECK(e.ci_hi == doctest::Approx(z2 / (10 + z2)));
  CHECK(e.kind == EstimatorKind::ProportionWilson);
  const auto f = wilson_estimate(10, 10);
  CHECK(f.ci_hi == doctest::Approx(1.0));
  CHECK(f.ci_lo == doctest::Approx(10 / (10 + z2)));
  CHECK_THROWS_AS(wilson_estimate(3, 2), ContractViolation);

  std::mt19937_64 gen(11);
  std::bernoulli_distribution coin(0.3);
  int covered = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::int64_t s = 0;
    for (int i = 0; i < 100; ++i) s += coin(gen);
    covered += wilson_estimate(s, 100).contains(0.3);
  }
  CHECK(covered >= 900);
}

TEST_CASE("CLT interval on two samples and shrinkage with n") {
  const std::vector<double> two{1.0, 3.0};
  const auto e = mean_estimate(two);
  CHECK(e.mean == 2.0);
  // s = sqrt(2), half width = z * s / sqrt(2) = z.
  CHECK(e.half_width() == doctest::Approx(kZ95));
  CHECK(e.n == 2);
  CHECK_THROWS_AS(mean_estimate(std::vector<double>{}), ContractViolation);

  std::mt19937_64 gen(5);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(40000);
  for (auto& x : v) x = dist(gen);
  const auto small = mean_estimate(std::span<const double>(v.data(), 400));
  const auto large = mean_estimate(v);
  // 100x the sample: the width ratio is close to 10.
  CHECK(small.half_width() / large.half_width() == doctest::Approx(10.0).epsilon(0.15));
  CHECK(large.scaled(2.0).half_width() == doctest::Approx(2 * large.half_width()));
}

TEST_CASE("convex hull and lattice counting agree with Pick's theorem") {
  CHECK(convex_hull({{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 1}}) ==
        std::vector<Vec2>{{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  CHECK(lattice_points_in_hull(convex_hull({{0, 0}})) == 1);
  CHECK(lattice_points_in_hull(convex_hull({{0, 0}, {4, 2}})) == 3);

  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> coord(-12, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Vec2> pts(3 + trial % 20);
    for (auto& p : pts) p = {coord(gen), coord(gen)};
    const auto hull = convex_hull(pts);
    if (hull.size() < 3) continue;
    CHECK(lattice_points_in_hull(hull) == oracle::pick_count(hull));
    std::int64_t from_rows = 0;
    for (const auto& r : hull_rows(hull)) from_rows += r.x_hi - r.x_lo + 1;
    CHECK(from_rows == oracle::pick_count(hull));
    for (const auto& p : pts) {
      bool inside = false;
      for (const auto& r : hull_rows(hull)) inside |= r.y == p.y && r.x_lo <= p.x && p.x <= r.x_hi;
      CHECK(inside);
    }
  }
}
