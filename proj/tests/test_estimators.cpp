#include <doctest.h>

#include <algorithm>

#include "richlab/error.hpp"
#include "richlab/estimators.hpp"

using namespace richlab;

TEST_CASE("estimate_mu: exact rate scaling per replication") {
  Experiment ex{3, 30, 2, 1};
  const auto base = estimate_mu(1.0, 16, ex);
  for (const double lambda : {0.5, 2.0, 4.0}) {
    const auto scaled = estimate_mu(lambda, 16, ex);
    for (std::size_t i = 0; i < base.samples.size(); ++i) CHECK(lambda * scaled.samples[i] == base.samples[i]);
    CHECK(lambda * scaled.estimate.mean == doctest::Approx(base.estimate.mean).epsilon(1e-14));
  }
  CHECK(base.domain.lower(0) <= -8);
  CHECK(base.domain.upper(0) >= 24);
  CHECK(base.domain.upper(1) >= 8);
}

TEST_CASE("estimate_mu: two replications give an interval containing both samples") {
  const auto r = estimate_mu(1.0, 8, Experiment{5, 2, 2, 1});
  REQUIRE(r.samples.size() == 2);
  for (const double s : r.samples) CHECK(r.estimate.contains(s));
  CHECK(r.estimate.ci_lo <= r.estimate.mean);
  CHECK(r.estimate.mean <= r.estimate.ci_hi);
  CHECK_THROWS_AS(estimate_mu(1.0, 0, Experiment{5, 2, 2, 1}), ConfigError);
  CHECK_THROWS_AS(estimate_mu(-1.0, 8, Experiment{5, 2, 2, 1}), ConfigError);
}

TEST_CASE("estimators do not depend on the thread count") {
  const auto a = estimate_mu(1.0, 12, Experiment{9, 24, 2, 1});
  const auto b = estimate_mu(1.0, 12, Experiment{9, 24, 2, 3});
  CHECK(a.samples == b.samples);
  const std::vector<std::int64_t> radii{0, 2, 4, 8};
  const auto s1 = survival_curve(SeedConfig::hyperplane(2, 16), radii, Experiment{9, 40, 2, 1});
  const auto s3 = survival_curve(SeedConfig::hyperplane(2, 16), radii, Experiment{9, 40, 2, 3});
  CHECK(s1.max_type2_distance == s3.max_type2_distance);
}

TEST_CASE("hyperplane start: width precondition and pathwise domination") {
  CHECK_THROWS_AS(estimate_mu_hyperplane(1.0, 8, 31, Experiment{1, 10, 2, 1}), ConfigError);
  const auto r = estimate_mu_hyperplane(1.0, 8, 32, Experiment{1, 50, 2, 1});
  CHECK(r.pathwise_violations == 0);
  for (std::size_t i = 0; i < r.origin_samples.size(); ++i) CHECK(r.hyperplane_samples[i] <= r.origin_samples[i]);
  const auto id = hyperplane_identity(8, 32, Experiment{1, 50, 2, 1});
  CHECK(id.from_plane.size() == 50);
  CHECK(id.to_plane.size() == 50);
  // The first side reuses the replications of estimate_mu_hyperplane.
  for (std::size_t i = 0; i < 50; ++i) CHECK(id.from_plane[i] == 8 * r.hyperplane_samples[i]);
}

TEST_CASE("hampered constants: nested tubes are pathwise ordered") {
  const auto r = estimate_mu_hampered(1.0, 32, {0, 1, 2, 4}, Experiment{2, 40, 2, 1});
  CHECK(r.pathwise_violations == 0);
  REQUIRE(r.rows.size() == 4);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].estimate.mean <= r.rows[i - 1].estimate.mean);
  CHECK(r.unhampered.mean <= r.rows.back().estimate.mean);
  CHECK(r.rows[0].estimate.contains(1.0));
  CHECK_THROWS_AS(estimate_mu_hampered(1.0, 32, {-1}, Experiment{2, 4, 2, 1}), ConfigError);
}

TEST_CASE("descent experiment at b = 0 counts only the origin") {
  const auto r = descent_experiment(0, 8, 2, Experiment{1, 20, 2, 1});
  CHECK(r.x_b.mean == 1.0);
  CHECK(r.x_b_star.mean == 1.0);
  CHECK(r.implication_violations == 0);
  const auto s = descent_experiment(4, 32, 4, Experiment{1, 200, 2, 1});
  CHECK(s.implication_violations == 0);
  for (const auto& c : s.samples) CHECK((c.x_b == 0 || c.x_b_star >= 1));
}

TEST_CASE("records: record counts never exceed axis counts") {
  const auto r = records_experiment(20.0, Experiment{4, 30, 2, 1});
  REQUIRE(r.probes.size() == 30);
  for (const auto& p : r.probes) {
    CHECK(p.exact);
    CHECK(p.y_record <= p.y);
  }
  CHECK(r.record_rate.mean <= r.axis_rate.mean);
  CHECK(r.lateral >= 8);
}

TEST_CASE("record probability: degenerate windows give probability one") {
  CHECK(record_probability(0, 16, Experiment{1, 30, 2, 1}).mean == 1.0);
  CHECK(record_probability(16, 0, Experiment{1, 30, 2, 1}).mean == 1.0);
  const auto e = record_probability(16, 16, Experiment{1, 200, 2, 1});
  CHECK(e.mean > 0.0);
  CHECK(e.mean < 1.0);
  CHECK(e.kind == EstimatorKind::ProportionWilson);
}

TEST_CASE("shape: single-site snapshots, rate scaling, dimension check") {
  const auto tiny = shape_check(1.0, 1e-9, Experiment{1, 5, 2, 1});
  CHECK(tiny.deficiency.mean == 0.0);
  CHECK(tiny.deviation.mean == 0.0);
  for (const auto& s : tiny.snapshots) CHECK(s.infected == 1);

  const auto fast = shape_check(2.0, 6.0, Experiment{7, 5, 2, 1}, true);
  const auto slow = shape_check(1.0, 12.0, Experiment{7, 5, 2, 1}, true);
  CHECK(fast.half_width == slow.half_width);
  for (std::size_t i = 0; i < fast.snapshots.size(); ++i) {
    CHECK(fast.snapshots[i].sites == slow.snapshots[i].sites);
    CHECK(fast.snapshots[i].deficiency == slow.snapshots[i].deficiency);
    CHECK(fast.snapshots[i].deviation == slow.snapshots[i].deviation);
  }
  for (const auto& s : slow.snapshots) {
    CHECK(s.deficiency >= 0.0);
    CHECK(s.deficiency <= 1.0);
    CHECK(s.deviation >= 0.0);
    CHECK(s.deviation <= 1.0);
    CHECK(s.hull_points >= s.infected);
    for (const auto& p : s.sites) CHECK(p.linf_norm() < slow.half_width);
  }
  CHECK_THROWS_AS(shape_check(1.0, 5.0, Experiment{1, 2, 3, 1}), Unsupported);
}

TEST_CASE("survival: R = 0 always survives and curves are nested") {
  const std::vector<std::int64_t> radii{0, 1, 2, 4, 8};
  const auto r = survival_curve(SeedConfig::hyperplane(2, 16), radii, Experiment{5, 100, 2, 1});
  REQUIRE(r.rows.size() == radii.size());
  CHECK(r.rows[0].survived == 100);
  CHECK(r.rows[0].estimate.mean == 1.0);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].survived <= r.rows[i - 1].survived);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const auto expected =
        std::count_if(r.max_type2_distance.begin(), r.max_type2_distance.end(), [&](auto m) { return m >= radii[i]; });
    CHECK(r.rows[i].survived == expected);
  }
  CHECK(r.half_width == 16);
  CHECK(default_half_width(SeedConfig::half_axis(2, 64), 8) == 64);
  CHECK(default_half_width(SeedConfig{2, RegionSpec::empty(), RegionSpec::origin()}, 8) == 16);
  CHECK_THROWS_AS(survival_curve(SeedConfig::half_axis(2, 64), {128}, Experiment{1, 2, 2, 1}), ConfigError);
  CHECK_THROWS_AS(survival_curve(SeedConfig::half_axis(2, 64), {8, 4}, Experiment{1, 2, 2, 1}), ConfigError);

  SurvivalOptions markov;
  markov.engine = Engine::Markov;
  const auto m = survival_curve(SeedConfig::hyperplane(2, 16), radii, Experiment{5, 100, 2, 1}, markov);
  CHECK(m.rows[0].survived == 100);
  for (std::size_t i = 1; i < m.rows.size(); ++i) CHECK(m.rows[i].survived <= m.rows[i - 1].survived);
}

TEST_CASE("coexistence scan: n >= 1 and exchangeable types") {
  CHECK_THROWS_AS(coexistence_scan({0}, 8, Experiment{1, 10, 2, 1}), ConfigError);
  const auto a = coexistence_scan({2, 6}, 8, Experiment{3, 400, 2, 1});
  const auto b = coexistence_scan({2, 6}, 8, Experiment{3, 400, 2, 1}, true);
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == b[i].n);
    CHECK(a[i].estimate.overlaps(b[i].estimate));
  }
}
