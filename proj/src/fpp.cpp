#include "richlab/fpp.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "richlab/error.hpp"

namespace richlab {

PassageResult::PassageResult(Domain domain, std::vector<Point> sources)
    : domain_(std::move(domain)), sources_(std::move(sources)), table_(domain_.volume()) {}

std::int64_t PassageResult::checked_index(const Point& p) const {
  if (!domain_.contains(p)) throw DomainError("point " + p.to_string() + " outside domain " + domain_.describe());
  return domain_.index(p);
}

bool PassageResult::reached(const Point& p) const { return table_.get(checked_index(p)).settled; }

double PassageResult::time(const Point& p) const {
  const auto& e = table_.get(checked_index(p));
  return e.settled ? e.time : kInfinity;
}

std::size_t PassageResult::descent_index(const Point& p) const {
  const auto& e = table_.get(checked_index(p));
  if (!e.settled) throw ContractViolation("site " + p.to_string() + " was not reached");
  return static_cast<std::size_t>(e.descent);
}

const Point& PassageResult::descent(const Point& p) const { return sources_[descent_index(p)]; }

std::optional<Point> PassageResult::predecessor(const Point& p) const {
  const auto& e = table_.get(checked_index(p));
  if (!e.settled) throw ContractViolation("site " + p.to_string() + " was not reached");
  if (e.pred_dir < 0) return std::nullopt;
  return p.shifted(e.pred_dir / 2, e.pred_dir % 2 ? +1 : -1);
}

namespace {

struct QueueItem {
  double time;
  std::int64_t index;
  std::int32_t source;

  // Min-heap on (time, site index); the index order is lexicographic in the coordinates.
  bool operator>(const QueueItem& o) const { return time != o.time ? time > o.time : index > o.index; }
};

}  // namespace

class PassageSolver {
 public:
  static PassageResult run(const Domain& dom, std::span<const Point> sources, const WeightField& field, int type_index,
                           const PassageOptions& options) {
    if (sources.empty()) throw ContractViolation("passage_times needs at least one source");
    if (type_index != 1 && type_index != 2) throw ContractViolation("type index must be 1 or 2");
    for (const auto& s : sources) {
      if (!dom.contains(s)) throw DomainError("source " + s.to_string() + " outside domain " + dom.describe());
      if (options.x1_bound && s[0] > *options.x1_bound) {
        throw ContractViolation("source " + s.to_string() + " violates the slab bound x1 <= " +
                                std::to_string(*options.x1_bound));
      }
    }

    PassageResult result(dom, std::vector<Point>(sources.begin(), sources.end()));
    auto& table = result.table_;

    // lex_rank[i]: position of source i in lexicographic order, for descent tie-breaks.
    std::vector<std::int32_t> order(sources.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sources[static_cast<std::size_t>(a)] < sources[static_cast<std::size_t>(b)]; });
    std::vector<std::int32_t> lex_rank(sources.size());
    for (std::size_t r = 0; r < order.size(); ++r) lex_rank[static_cast<std::size_t>(order[r])] = static_cast<std::int32_t>(r);
    auto better_source = [&](std::int32_t a, std::int32_t b) {
      return b < 0 || lex_rank[static_cast<std::size_t>(a)] < lex_rank[static_cast<std::size_t>(b)];
    };

    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> heap;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const auto idx = dom.index(sources[i]);
      auto& e = table.at(idx);
      const auto src = static_cast<std::int32_t>(i);
      if (e.time > 0.0 || better_source(src, e.descent)) {
        e.time = 0.0;
        e.descent = src;
        e.pred_dir = -1;
        heap.push({0.0, idx, src});
      }
    }

    const int dim = dom.dim();
    const std::int64_t x1_cap = options.x1_bound ? std::min(*options.x1_bound, dom.upper(0)) : dom.upper(0);
    while (!heap.empty()) {
      const QueueItem top = heap.top();
      heap.pop();
      auto& e = table.at(top.index);
      if (e.settled || top.time != e.time || top.source != e.descent) continue;
      if (top.time > options.time_limit) {
        result.truncated_ = true;
        break;
      }
      e.settled = true;
      result.order_.push_back(top.index);
      const Point p = dom.point(top.index);
      if (options.stop_after && options.stop_after(p)) {
        result.truncated_ = !heap.empty();
        break;
      }
      for (int axis = 0; axis < dim; ++axis) {
        const std::int64_t hi = axis == 0 ? x1_cap : dom.upper(axis);
        const std::int64_t stride = dom.stride(axis);
        for (int side = 0; side < 2; ++side) {
          const std::int64_t step = side ? +1 : -1;
          const std::int64_t c = p[axis] + step;
          if (c < dom.lower(axis) || c > hi) continue;
          const std::int64_t nidx = top.index + step * stride;
          auto& ne = table.at(nidx);
          if (ne.settled) continue;
          const double w = field.weight_at(side ? p : p.shifted(axis, -1), axis, type_index);
          const double nt = top.time + w;
          if (nt < ne.time || (nt == ne.time && better_source(top.source, ne.descent))) {
            ne.time = nt;
            ne.descent = top.source;
            // The predecessor p sits on the opposite side of the step.
            ne.pred_dir = static_cast<std::int8_t>(axis * 2 + (side ? 0 : 1));
            heap.push({nt, nidx, top.source});
          }
        }
      }
    }
    return result;
  }
};

PassageResult passage_times(const Domain& dom, std::span<const Point> sources, const WeightField& field, int type_index,
                            const PassageOptions& options) {
  return PassageSolver::run(dom, sources, field, type_index, options);
}

PassageResult restricted_passage_times(const Domain& dom, std::span<const Point> sources, const WeightField& field,
                                       int type_index, std::int64_t b) {
  PassageOptions opts;
  opts.x1_bound = b;
  return PassageSolver::run(dom, sources, field, type_index, opts);
}

bool TargetSet::contains(const Point& p) const {
  switch (kind_) {
    case Kind::Region: return region_.contains(p);
    case Kind::Plane: return p[0] == plane_;
    case Kind::Points: return std::find(points_.begin(), points_.end(), p) != points_.end();
  }
  return false;
}

bool TargetSet::intersects(const Domain& dom) const {
  switch (kind_) {
    case Kind::Plane: return plane_ >= dom.lower(0) && plane_ <= dom.upper(0);
    case Kind::Region: {
      const auto pts = enumerate_region(region_, dom.dim());
      return std::any_of(pts.begin(), pts.end(), [&](const Point& p) { return dom.contains(p); });
    }
    case Kind::Points:
      return std::any_of(points_.begin(), points_.end(), [&](const Point& p) { return dom.contains(p); });
  }
  return false;
}

double passage_time_to_set(const Domain& dom, const Point& source, const TargetSet& target, const WeightField& field,
                           int type_index) {
  if (!target.intersects(dom)) throw DomainError("target set does not intersect domain " + dom.describe());
  PassageOptions opts;
  opts.stop_after = [&](const Point& p) { return target.contains(p); };
  const Point sources[] = {source};
  const auto res = PassageSolver::run(dom, sources, field, type_index, opts);
  const auto order = res.settle_order();
  const Point last = dom.point(order.back());
  if (!target.contains(last)) throw DomainError("target set unreachable within domain " + dom.describe());
  return res.entry(order.back()).time;
}

DescentCounts descent_counts(int dim, std::int64_t b, std::int64_t width, std::int64_t overshoot,
                             const WeightField& field) {
  if (b < 0) throw ConfigError("descent_counts: b must be >= 0");
  if (overshoot < 0) throw ConfigError("descent_counts: overshoot must be >= 0");
  if (width < b) throw ConfigError("descent_counts: lateral width W=" + std::to_string(width) + " must be >= b=" + std::to_string(b));

  const Domain slab = Domain::slab(dim, -overshoot, b + overshoot, width);
  std::vector<Point> sources{Point::origin(dim)};
  const auto rest = enumerate_region(RegionSpec::hyperplane(width), dim);
  sources.insert(sources.end(), rest.begin(), rest.end());

  auto count_from_origin = [&](const PassageResult& res) {
    std::int64_t n = 0;
    Point x = Point::origin(dim);
    x[0] = b;
    // Walk all lateral offsets of H_b.
    std::vector<Point> layer{x};
    const auto lateral = enumerate_region(RegionSpec::hyperplane(width), dim);
    for (const auto& y : lateral) {
      Point z = y;
      z[0] = b;
      layer.push_back(z);
    }
    for (const auto& z : layer) n += res.descent_index(z) == 0;
    return n;
  };

  DescentCounts out;
  out.x_b = count_from_origin(passage_times(slab, sources, field, 1));
  out.x_b_star = count_from_origin(restricted_passage_times(slab, sources, field, 1, b));
  return out;
}

RecordTrace record_trace(const Domain& dom, const WeightField& field, std::int64_t n_max,
                         std::span<const double> probe_times, std::int64_t guard, double time_limit) {
  const int dim = dom.dim();
  if (n_max < 0 || !dom.contains(Point::origin(dim)) || !dom.contains(Point::on_axis(dim, n_max))) {
    throw DomainError("record_trace: domain must contain the axis segment 0.." + std::to_string(n_max));
  }
  const Point origin[] = {Point::origin(dim)};
  PassageOptions opts;
  opts.time_limit = time_limit;
  const auto res = passage_times(dom, origin, field, 1, opts);

  RecordTrace tr;
  const auto n_count = static_cast<std::size_t>(n_max + 1);
  tr.axis_times.resize(n_count);
  for (std::int64_t n = 0; n <= n_max; ++n) tr.axis_times[static_cast<std::size_t>(n)] = res.time(Point::on_axis(dim, n));

  tr.record.assign(n_count, false);
  tr.reliable.assign(n_count, false);
  double suffix_min = kInfinity;
  for (std::int64_t n = n_max; n >= 0; --n) {
    const auto i = static_cast<std::size_t>(n);
    tr.record[i] = tr.axis_times[i] < suffix_min;
    tr.reliable[i] = n <= n_max - guard;
    suffix_min = std::min(suffix_min, tr.axis_times[i]);
  }

  for (const auto idx : res.settle_order()) {
    if (dom.point(idx)[0] == n_max) {
      tr.horizon_time = res.entry(idx).time;
      break;
    }
  }

  for (const double t : probe_times) {
    RecordProbe probe{t};
    for (std::size_t n = 1; n < n_count; ++n) {
      if (tr.axis_times[n] <= t) {
        ++probe.y;
        probe.y_record += tr.record[n];
      }
    }
    probe.exact = t < tr.horizon_time;
    tr.probes.push_back(probe);
  }
  return tr;
}

std::vector<double> hampered_front(int dim, std::int64_t b, std::int64_t x1_max, const WeightField& field) {
  if (b < 0) throw ConfigError("hampered_front: b must be >= 0");
  if (x1_max < 0) throw ConfigError("hampered_front: x1_max must be >= 0");
  const Domain tube = Domain::tube(dim, b, 0, x1_max);
  const Point origin[] = {Point::origin(dim)};
  const auto res = passage_times(tube, origin, field, 1);
  std::vector<double> times(static_cast<std::size_t>(x1_max + 1));
  for (std::int64_t n = 0; n <= x1_max; ++n) times[static_cast<std::size_t>(n)] = res.time(Point::on_axis(dim, n));
  return times;
}

}  // namespace richlab
