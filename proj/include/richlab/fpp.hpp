#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "richlab/lattice.hpp"
#include "richlab/site_table.hpp"
#include "richlab/weight_field.hpp"

namespace richlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Per-site state of a shortest-path run. `descent` indexes the source list,
/// `pred_dir` encodes the step from the predecessor: axis * 2 + (1 if predecessor is on the plus side).
struct PassageEntry {
  double time = kInfinity;
  std::int32_t descent = -1;
  std::int8_t pred_dir = -1;
  bool settled = false;
};

/// Output of a multi-source first-passage computation on a finite domain.
class PassageResult {
 public:
  PassageResult(Domain domain, std::vector<Point> sources);

  const Domain& domain() const { return domain_; }
  const std::vector<Point>& sources() const { return sources_; }

  /// Whether the site's passage time was finalized (always true for a full run).
  bool reached(const Point& p) const;
  /// Passage time, +inf when not reached. Throws DomainError outside the domain.
  double time(const Point& p) const;
  /// Source attaining the minimum. Throws ContractViolation if not reached.
  const Point& descent(const Point& p) const;
  std::size_t descent_index(const Point& p) const;
  /// Neighbour through which the minimum is attained; nullopt for sources.
  std::optional<Point> predecessor(const Point& p) const;

  /// Indices of reached sites in settling (time) order.
  std::span<const std::int64_t> settle_order() const { return order_; }
  const PassageEntry& entry(std::int64_t index) const { return table_.get(index); }
  std::size_t reached_count() const { return order_.size(); }
  /// Whether the run ended early (time limit or stop predicate).
  bool truncated() const { return truncated_; }

 private:
  friend class PassageSolver;

  std::int64_t checked_index(const Point& p) const;

  Domain domain_;
  std::vector<Point> sources_;
  SiteTable<PassageEntry> table_;
  std::vector<std::int64_t> order_;
  bool truncated_ = false;
};

struct PassageOptions {
  /// Relaxation never enters sites with x1 > x1_bound.
  std::optional<std::int64_t> x1_bound;
  /// Only sites with time <= time_limit are settled.
  double time_limit = kInfinity;
  /// Stop right after settling the first site satisfying this predicate.
  std::function<bool(const Point&)> stop_after;
};

/// Exact multi-source first-passage times from `sources` within `dom`, using the weights of
/// `type_index` in `field`. Weights are read lazily. Descent ties go to the
/// lexicographically smaller source.
PassageResult passage_times(const Domain& dom, std::span<const Point> sources, const WeightField& field,
                            int type_index = 1, const PassageOptions& options = {});

/// Same, restricted to paths that never visit a site with x1 > b. Throws ContractViolation
/// if a source has x1 > b.
PassageResult restricted_passage_times(const Domain& dom, std::span<const Point> sources, const WeightField& field,
                                       int type_index, std::int64_t b);

/// Target of a set passage time: a region descriptor, a hyperplane {x1 = c}, or explicit points.
class TargetSet {
 public:
  static TargetSet region(RegionSpec r) { return TargetSet(Kind::Region, std::move(r), 0, {}); }
  static TargetSet plane_x1(std::int64_t c) { return TargetSet(Kind::Plane, {}, c, {}); }
  static TargetSet points(std::vector<Point> pts) { return TargetSet(Kind::Points, {}, 0, std::move(pts)); }

  bool contains(const Point& p) const;
  bool intersects(const Domain& dom) const;

 private:
  enum class Kind { Region, Plane, Points };
  TargetSet(Kind k, RegionSpec r, std::int64_t c, std::vector<Point> pts)
      : kind_(k), region_(std::move(r)), plane_(c), points_(std::move(pts)) {}

  Kind kind_;
  RegionSpec region_;
  std::int64_t plane_;
  std::vector<Point> points_;
};

/// min over target sites of the passage time from `source`. Throws DomainError when the
/// target misses the domain.
double passage_time_to_set(const Domain& dom, const Point& source, const TargetSet& target, const WeightField& field,
                           int type_index = 1);

struct DescentCounts {
  std::int64_t x_b = 0;       // sites of H_b descending from the origin
  std::int64_t x_b_star = 0;  // same under the slab restriction x1 <= b
};

/// Descent counts from the truncated hyperplane {x1 = 0, |x_i| <= W} on the slab
/// x1 in [-overshoot, b + overshoot], |x_i| <= W. Both counts share `field`.
DescentCounts descent_counts(int dim, std::int64_t b, std::int64_t width, std::int64_t overshoot,
                             const WeightField& field);

struct RecordProbe {
  double t = 0;
  std::int64_t y = 0;         // positive-axis nodes infected by t
  std::int64_t y_record = 0;  // of those, nodes that were the rightmost infected axis node when infected
  bool exact = false;         // no site with x1 = n_max was infected by t
};

struct RecordTrace {
  std::vector<double> axis_times;  // T(n e1), n = 0..n_max
  std::vector<bool> record;        // T(n) < min_{n < l <= n_max} T(l)
  std::vector<bool> reliable;      // false within the guard band of the horizon
  double horizon_time = kInfinity; // first infection time of the column x1 = n_max
  std::vector<RecordProbe> probes;
};

/// Axis record statistics of a single-origin run. `dom` must contain the axis segment 0..n_max.
/// With a finite `time_limit` only sites infected by then are computed; axis times beyond it
/// read +inf, which leaves every probe at t <= time_limit unchanged.
RecordTrace record_trace(const Domain& dom, const WeightField& field, std::int64_t n_max,
                         std::span<const double> probe_times, std::int64_t guard = 16,
                         double time_limit = kInfinity);

/// Axis passage times T(n e1), n = 0..x1_max, of the process confined to the tube
/// {x1 in [0, x1_max], |x_i| <= b}, started from the origin.
std::vector<double> hampered_front(int dim, std::int64_t b, std::int64_t x1_max, const WeightField& field);

}  // namespace richlab
