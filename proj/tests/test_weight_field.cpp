#include <doctest.h>

#include <cmath>
#include <set>

#include "richlab/error.hpp"
#include "richlab/stats.hpp"
#include "richlab/weight_field.hpp"

using namespace richlab;

namespace {

// Deterministic pseudo-random probe tuples, independent of the field's own mixing.
struct Probe {
  std::uint64_t seed;
  std::int64_t rep;
  Edge edge;
  int clock;
};

Probe probe(std::uint64_t i) {
  std::uint64_t s = i * 6364136223846793005ULL + 1442695040888963407ULL;
  auto next = [&] {
    s ^= s >> 33;
    s *= 0xff51afd7ed558ccdULL;
    s ^= s >> 33;
    return s;
  };
  const auto seed = next() % 1000;
  const auto rep = static_cast<std::int64_t>(next() % 1000);
  const Point low{static_cast<std::int64_t>(next() % 2001) - 1000, static_cast<std::int64_t>(next() % 2001) - 1000};
  const int axis = static_cast<int>(next() % 2);
  return {seed, rep, Edge(low, low.shifted(axis, 1)), static_cast<int>(next() % 2) + 1};
}

}  // namespace

TEST_CASE("uniforms are deterministic and strictly inside (0,1)") {
  const WeightField f(7, 3, ClockMode::Two, 1.0, 1.0);
  const Edge e(Point{0, 0}, Point{1, 0});
  CHECK(f.uniform01(e, 1) == f.uniform01(e, 1));
  CHECK(f.uniform01(e, 1) == uniform01(7, 3, e, 1));
  CHECK(f.uniform01(e, 1) != f.uniform01(e, 2));
  CHECK_THROWS_AS(f.uniform01(e, 3), ContractViolation);
  CHECK_THROWS_AS(f.edge_weight(e, 0), ContractViolation);

  double sum = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const auto p = probe(static_cast<std::uint64_t>(i));
    const double u = uniform01(p.seed, p.rep, p.edge, p.clock);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.002);
}

TEST_CASE("the extreme 52-bit words still map inside (0,1)") {
  CHECK(mixing::to_open_unit(0) > 0.0);
  CHECK(mixing::to_open_unit(~0ULL) < 1.0);
}

TEST_CASE("changing the replication index changes the value") {
  int collisions = 0;
  for (int i = 0; i < 1000000; ++i) {
    const auto p = probe(static_cast<std::uint64_t>(i));
    collisions += uniform01(p.seed, p.rep, p.edge, p.clock) == uniform01(p.seed, p.rep + 1, p.edge, p.clock);
  }
  CHECK(collisions == 0);
}

TEST_CASE("edge weights are -ln(u)/lambda with Exp(lambda) mean") {
  const WeightField f = WeightField::one_type(11, 0, 1.0);
  const Edge e(Point{2, 3}, Point{2, 4});
  CHECK(f.edge_weight(e, 1) == -std::log(f.uniform01(e, 1)));
  CHECK(-std::log(0.5) == doctest::Approx(0.693147).epsilon(1e-6));

  double sum = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const auto p = probe(static_cast<std::uint64_t>(i));
    const double w = WeightField::one_type(p.seed, p.rep).edge_weight(p.edge, 1);
    REQUIRE(w > 0.0);
    REQUIRE(std::isfinite(w));
    sum += w;
  }
  CHECK(std::abs(sum / n - 1.0) < 0.01);
}

TEST_CASE("rate scaling is exact on shared uniforms") {
  for (int i = 0; i < 10000; ++i) {
    const auto p = probe(static_cast<std::uint64_t>(i));
    const double w1 = WeightField::one_type(p.seed, p.rep, 1.0).edge_weight(p.edge, 1);
    CHECK(WeightField::one_type(p.seed, p.rep, 2.0).edge_weight(p.edge, 1) == w1 / 2);
    for (const double lambda : {0.5, 2.0, 4.0, 1.5, 0.8}) {
      const double wl = WeightField::one_type(p.seed, p.rep, lambda).edge_weight(p.edge, 1);
      CHECK(wl == w1 / lambda);
    }
  }
}

TEST_CASE("clock modes route types to clocks") {
  const Edge e(Point{0, 0}, Point{0, 1});
  const WeightField single(5, 1, ClockMode::Single, 2.0, 2.0);
  CHECK(single.edge_weight(e, 1) == single.edge_weight(e, 2));
  CHECK(single.edge_weight(e, 2) == -std::log(single.uniform01(e, 1)) / 2.0);

  const WeightField two(5, 1, ClockMode::Two, 1.0, 3.0);
  CHECK(two.edge_weight(e, 1) == -std::log(two.uniform01(e, 1)));
  CHECK(two.edge_weight(e, 2) == -std::log(two.uniform01(e, 2)) / 3.0);
  CHECK(two.weight_at(e.low(), e.axis(), 2) == two.edge_weight(e, 2));
}

TEST_CASE("invalid rates are configuration errors") {
  CHECK_THROWS_AS(WeightField(1, 0, ClockMode::Two, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(WeightField(1, 0, ClockMode::Two, 1.0, -1.0), ConfigError);
  CHECK_THROWS_AS(WeightField(1, 0, ClockMode::Two, 1.0, INFINITY), ConfigError);
  CHECK_THROWS_AS(WeightField(1, 0, ClockMode::Single, 1.0, 2.0), ConfigError);
}

TEST_CASE("exchanging clocks at equal rates leaves summaries unchanged") {
  const WeightField f(99, 0, ClockMode::Two, 1.0, 1.0);
  std::vector<double> c1, c2;
  for (std::int64_t x = 0; x < 200; ++x) {
    for (std::int64_t y = 0; y < 100; ++y) {
      const Edge e(Point{x, y}, Point{x + 1, y});
      c1.push_back(f.edge_weight(e, 1));
      c2.push_back(f.edge_weight(e, 2));
    }
  }
  CHECK(mean_estimate(c1).overlaps(mean_estimate(c2)));
  CHECK(ks_two_sample(c1, c2).p_value > 0.01);
}

TEST_CASE("counter streams are reproducible and tag-separated") {
  CounterStream a(3, 4, 1), b(3, 4, 1), c(3, 4, 2);
  int same_tag_diff = 0, other_tag_same = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    same_tag_diff += x != b.next_u64();
    other_tag_same += x == c.next_u64();
  }
  CHECK(same_tag_diff == 0);
  CHECK(other_tag_same == 0);

  CounterStream s(1, 0, 9);
  double sum = 0;
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100000; ++i) {
    sum += s.exponential(2.0);
    const auto k = s.below(6);
    REQUIRE(k < 6);
    seen.insert(k);
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
  CHECK(seen.size() == 6);
}
