#include "richlab/competition.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <set>

#include "richlab/error.hpp"

namespace richlab {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Survived: return "survived";
    case StopReason::Coexisted: return "coexisted";
    case StopReason::Enclosed: return "enclosed";
    case StopReason::Horizon: return "horizon";
    case StopReason::Exhausted: return "exhausted";
  }
  return "?";
}

// ---------------------------------------------------------------- InfectionMap

InfectionMap::InfectionMap(Domain domain) : domain_(std::move(domain)), table_(domain_.volume()) {}

SiteState InfectionMap::state(const Point& p) const {
  if (!domain_.contains(p)) throw DomainError("point " + p.to_string() + " outside domain " + domain_.describe());
  return table_.get(domain_.index(p)).state;
}

std::optional<double> InfectionMap::time(const Point& p) const {
  if (state(p) == SiteState::Uninfected) return std::nullopt;
  return table_.get(domain_.index(p)).time;
}

std::optional<Point> InfectionMap::predecessor(const Point& p) const {
  if (state(p) == SiteState::Uninfected) return std::nullopt;
  const auto dir = table_.get(domain_.index(p)).pred_dir;
  if (dir < 0) return std::nullopt;
  return p.shifted(dir / 2, dir % 2 ? +1 : -1);
}

std::int64_t InfectionMap::count(SiteState s) const {
  return std::count_if(events_.begin(), events_.end(), [s](const InfectionEvent& e) { return e.type == s; });
}

void InfectionMap::infect(std::int64_t index, SiteState type, double time, std::int8_t pred_dir) {
  auto& e = table_.at(index);
  if (e.state != SiteState::Uninfected) {
    throw ContractViolation("site " + domain_.point(index).to_string() + " infected twice");
  }
  e.state = type;
  e.time = time;
  e.pred_dir = pred_dir;
  events_.push_back({time, index, type});
}

namespace {

int type_slot(SiteState s) { return s == SiteState::Type1 ? 0 : 1; }

void check_seeds(const Domain& dom, const SeedLists& seeds) {
  std::set<Point> seen;
  for (const auto* list : {&seeds.type1, &seeds.type2}) {
    for (const auto& p : *list) {
      if (!dom.contains(p)) throw ConfigError("seed " + p.to_string() + " outside domain " + dom.describe());
      if (!seen.insert(p).second) throw ConfigError("seed " + p.to_string() + " listed twice or for both types");
    }
  }
}

// Shared stop bookkeeping for both engines.
class OutcomeTracker {
 public:
  OutcomeTracker(const Domain& dom, const SeedLists& seeds, const StopRule& stop)
      : stop_(stop),
        center_{stop.type1_center.value_or(Point::origin(dom.dim())), stop.type2_center.value_or(Point::origin(dom.dim()))},
        seeds_total_(static_cast<std::int64_t>(seeds.type1.size() + seeds.type2.size())),
        has_seeds_{!seeds.type1.empty(), !seeds.type2.empty()} {
    if (stop.radius < 0) throw ConfigError("stop radius must be >= 0");
    if (stop.mode == StopMode::Exhaust) return;
    for (int k = 0; k < 2; ++k) {
      if (stop.mode == StopMode::Survival && k == 0) continue;
      const Point& c = center_[static_cast<std::size_t>(k)];
      for (int i = 0; i < dom.dim(); ++i) {
        if (c[i] - dom.lower(i) < 2 * stop.radius || dom.upper(i) - c[i] < 2 * stop.radius) {
          throw ConfigError("radius R=" + std::to_string(stop.radius) + " too large for domain " + dom.describe() +
                            " (needs R <= half-width / 2)");
        }
      }
    }
  }

  // `neighbors_of[k]`: number of already-infected type-(k+1) neighbours of the new site.
  void infect(const Point& p, SiteState type, double t, std::array<int, 2> infected_neighbors, int uninfected_neighbors) {
    ++out_.event_count;
    out_.end_time = t;
    for (int k = 0; k < 2; ++k) frontier_[static_cast<std::size_t>(k)] -= infected_neighbors[static_cast<std::size_t>(k)];
    const int slot = type_slot(type);
    frontier_[static_cast<std::size_t>(slot)] += uninfected_neighbors;
    const auto dist = p.linf_distance(center_[static_cast<std::size_t>(slot)]);
    auto& maxd = slot == 0 ? out_.max_type1_distance : out_.max_type2_distance;
    maxd = std::max(maxd, dist);

    if (out_.event_count >= seeds_total_) {
      if (has_seeds_[1] && frontier_[1] == 0 && !out_.enclosure_time) out_.enclosure_time = t;
      if (has_seeds_[0] && frontier_[0] == 0 && !out_.type1_enclosure_time) out_.type1_enclosure_time = t;
    }
  }

  /// Whether the run should end after the event just recorded.
  bool done() {
    const auto r = stop_.radius;
    switch (stop_.mode) {
      case StopMode::Survival:
        if (out_.max_type2_distance >= r) return finish(StopReason::Survived);
        if (out_.enclosure_time) return finish(StopReason::Enclosed);
        return false;
      case StopMode::Coexistence:
        if (out_.max_type1_distance >= r && out_.max_type2_distance >= r) return finish(StopReason::Coexisted);
        if (out_.enclosure_time || out_.type1_enclosure_time) return finish(StopReason::Enclosed);
        return false;
      case StopMode::Exhaust: return false;
    }
    return false;
  }

  bool past_horizon(double t) const { return t > stop_.horizon; }

  RunOutcome finish_with(StopReason reason) {
    finish(reason);
    return out_;
  }
  const RunOutcome& outcome() const { return out_; }

 private:
  bool finish(StopReason reason) {
    out_.reason = reason;
    out_.survived_to_R = out_.max_type2_distance >= stop_.radius;
    return true;
  }

  StopRule stop_;
  std::array<Point, 2> center_;
  std::int64_t seeds_total_;
  std::array<bool, 2> has_seeds_;
  std::array<std::int64_t, 2> frontier_{};
  RunOutcome out_;
};

// Neighbour census of a site about to be infected.
struct Census {
  std::array<int, 2> infected{};
  int uninfected = 0;
};

template <typename StateAt>
Census census(const Domain& dom, const Point& p, std::int64_t idx, StateAt&& state_at) {
  Census c;
  for (int axis = 0; axis < dom.dim(); ++axis) {
    for (int side = 0; side < 2; ++side) {
      const std::int64_t step = side ? 1 : -1;
      const auto coord = p[axis] + step;
      if (coord < dom.lower(axis) || coord > dom.upper(axis)) continue;
      const SiteState s = state_at(idx + step * dom.stride(axis));
      if (s == SiteState::Uninfected) {
        ++c.uninfected;
      } else {
        ++c.infected[static_cast<std::size_t>(type_slot(s))];
      }
    }
  }
  return c;
}

struct Arrival {
  double time;
  std::int64_t index;
  SiteState type;
  std::int8_t pred_dir;

  bool operator>(const Arrival& o) const {
    if (time != o.time) return time > o.time;
    if (index != o.index) return index > o.index;
    if (type != o.type) return type > o.type;
    return pred_dir > o.pred_dir;
  }
};

// Best pending arrival per site. Arrivals at one site pop in (time, type, pred) order, so
// pushing only improvements leaves the outcome unchanged.
struct Pending {
  double time = kInfinity;
  SiteState type = SiteState::Uninfected;
  std::int8_t pred_dir = -1;

  bool beaten_by(double t, SiteState ty, std::int8_t pred) const {
    if (t != time) return t < time;
    if (ty != type) return ty < type;
    return pred < pred_dir;
  }
};

}  // namespace

// ---------------------------------------------------------------- weight-based engine

TwoTypeRun run_two_type(const Domain& dom, const SeedLists& seeds, const WeightField& field, const StopRule& stop) {
  check_seeds(dom, seeds);
  OutcomeTracker tracker(dom, seeds, stop);
  InfectionMap map(dom);

  std::priority_queue<Arrival, std::vector<Arrival>, std::greater<>> queue;
  SiteTable<Pending> pending(dom.volume());
  for (const auto& p : seeds.type1) queue.push({0.0, dom.index(p), SiteState::Type1, -1});
  for (const auto& p : seeds.type2) queue.push({0.0, dom.index(p), SiteState::Type2, -1});

  auto state_at = [&](std::int64_t i) { return map.entry(i).state; };
  const int dim = dom.dim();
  while (true) {
    if (queue.empty()) return {std::move(map), tracker.finish_with(StopReason::Exhausted)};
    const Arrival a = queue.top();
    queue.pop();
    if (map.entry(a.index).state != SiteState::Uninfected) continue;
    if (tracker.past_horizon(a.time)) return {std::move(map), tracker.finish_with(StopReason::Horizon)};

    const Point p = dom.point(a.index);
    const Census c = census(dom, p, a.index, state_at);
    map.infect(a.index, a.type, a.time, a.pred_dir);
    tracker.infect(p, a.type, a.time, c.infected, c.uninfected);
    if (tracker.done()) return {std::move(map), tracker.outcome()};

    const int type_index = a.type == SiteState::Type1 ? 1 : 2;
    for (int axis = 0; axis < dim; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const std::int64_t step = side ? 1 : -1;
        const auto coord = p[axis] + step;
        if (coord < dom.lower(axis) || coord > dom.upper(axis)) continue;
        const std::int64_t nidx = a.index + step * dom.stride(axis);
        if (map.entry(nidx).state != SiteState::Uninfected) continue;
        const double t = a.time + field.weight_at(side ? p : p.shifted(axis, -1), axis, type_index);
        const auto pred = static_cast<std::int8_t>(axis * 2 + (side ? 0 : 1));
        auto& best = pending.at(nidx);
        if (!best.beaten_by(t, a.type, pred)) continue;
        best = {t, a.type, pred};
        queue.push({t, nidx, a.type, pred});
      }
    }
  }
}

TwoTypeRun run_two_type(const Domain& dom, const SeedConfig& cfg, const WeightField& field, const StopRule& stop) {
  if (cfg.dim != dom.dim()) throw ConfigError("seed configuration and domain differ in dimension");
  return run_two_type(dom, enumerate_seeds(cfg), field, stop);
}

// ---------------------------------------------------------------- Markov engine

namespace {

struct MarkovEntry {
  std::array<std::int32_t, 2 * Point::kMaxDim> bond_pos{};  // position + 1 in its type's bond list; 0 = absent
};

struct Bond {
  std::int64_t from;
  std::int8_t dir;  // axis * 2 + side (side 1 = plus)
};

class BondSet {
 public:
  void add(SiteTable<MarkovEntry>& table, std::int64_t from, std::int8_t dir) {
    bonds_.push_back({from, dir});
    table.at(from).bond_pos[static_cast<std::size_t>(dir)] = static_cast<std::int32_t>(bonds_.size());
  }
  void remove(SiteTable<MarkovEntry>& table, std::int64_t from, std::int8_t dir) {
    auto& slot = table.at(from).bond_pos[static_cast<std::size_t>(dir)];
    const auto pos = static_cast<std::size_t>(slot - 1);
    slot = 0;
    if (pos + 1 != bonds_.size()) {
      bonds_[pos] = bonds_.back();
      table.at(bonds_[pos].from).bond_pos[static_cast<std::size_t>(bonds_[pos].dir)] = static_cast<std::int32_t>(pos + 1);
    }
    bonds_.pop_back();
  }
  std::size_t size() const { return bonds_.size(); }
  const Bond& operator[](std::size_t i) const { return bonds_[i]; }

 private:
  std::vector<Bond> bonds_;
};

}  // namespace

TwoTypeRun run_two_type_markov(const Domain& dom, const SeedLists& seeds, double lambda1, double lambda2,
                               CounterStream& rng, const StopRule& stop) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0) || !std::isfinite(lambda1) || !std::isfinite(lambda2)) {
    throw ConfigError("rates must satisfy lambda > 0");
  }
  check_seeds(dom, seeds);
  OutcomeTracker tracker(dom, seeds, stop);
  InfectionMap map(dom);
  SiteTable<MarkovEntry> bonds_at(dom.volume());
  std::array<BondSet, 2> bonds;
  const std::array<double, 2> rate{lambda1, lambda2};
  const int dim = dom.dim();

  // Infects idx and rewires the active bond lists; returns true when the run should stop.
  auto infect = [&](std::int64_t idx, SiteState type, double t, std::int8_t pred_dir) {
    const Point p = dom.point(idx);
    Census c;
    for (int axis = 0; axis < dim; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const std::int64_t step = side ? 1 : -1;
        const auto coord = p[axis] + step;
        if (coord < dom.lower(axis) || coord > dom.upper(axis)) continue;
        const std::int64_t nidx = idx + step * dom.stride(axis);
        const SiteState s = map.entry(nidx).state;
        if (s == SiteState::Uninfected) {
          ++c.uninfected;
          bonds[static_cast<std::size_t>(type_slot(type))].add(bonds_at, idx, static_cast<std::int8_t>(axis * 2 + side));
        } else {
          ++c.infected[static_cast<std::size_t>(type_slot(s))];
          // The neighbour's bond towards p points the opposite way.
          bonds[static_cast<std::size_t>(type_slot(s))].remove(bonds_at, nidx, static_cast<std::int8_t>(axis * 2 + (1 - side)));
        }
      }
    }
    map.infect(idx, type, t, pred_dir);
    tracker.infect(p, type, t, c.infected, c.uninfected);
    return tracker.done();
  };

  for (const auto& p : seeds.type1) {
    if (infect(dom.index(p), SiteState::Type1, 0.0, -1)) return {std::move(map), tracker.outcome()};
  }
  for (const auto& p : seeds.type2) {
    if (infect(dom.index(p), SiteState::Type2, 0.0, -1)) return {std::move(map), tracker.outcome()};
  }

  double t = 0.0;
  while (true) {
    const double w1 = rate[0] * static_cast<double>(bonds[0].size());
    const double w2 = rate[1] * static_cast<double>(bonds[1].size());
    const double total = w1 + w2;
    if (total <= 0.0) return {std::move(map), tracker.finish_with(StopReason::Exhausted)};
    t += rng.exponential(total);
    if (tracker.past_horizon(t)) return {std::move(map), tracker.finish_with(StopReason::Horizon)};
    const int slot = rng.uniform01() * total < w1 ? 0 : 1;
    const auto& set = bonds[static_cast<std::size_t>(slot)];
    const Bond b = set[static_cast<std::size_t>(rng.below(set.size()))];
    const int axis = b.dir / 2;
    const std::int64_t step = b.dir % 2 ? 1 : -1;
    const std::int64_t target = b.from + step * dom.stride(axis);
    const auto pred_dir = static_cast<std::int8_t>(axis * 2 + (b.dir % 2 ? 0 : 1));
    if (infect(target, slot == 0 ? SiteState::Type1 : SiteState::Type2, t, pred_dir)) {
      return {std::move(map), tracker.outcome()};
    }
  }
}

TwoTypeRun run_two_type_markov(const Domain& dom, const SeedConfig& cfg, double lambda1, double lambda2,
                               CounterStream& rng, const StopRule& stop) {
  if (cfg.dim != dom.dim()) throw ConfigError("seed configuration and domain differ in dimension");
  return run_two_type_markov(dom, enumerate_seeds(cfg), lambda1, lambda2, rng, stop);
}

// ---------------------------------------------------------------- couplings

namespace {

bool is_subset(const std::vector<Point>& small, const std::vector<Point>& big) {
  const std::set<Point> b(big.begin(), big.end());
  return std::all_of(small.begin(), small.end(), [&](const Point& p) { return b.count(p) > 0; });
}

}  // namespace

CouplingReport coupled_containment(const Domain& dom, const SeedLists& a, const SeedLists& b, const WeightField& field,
                                   double horizon) {
  if (!is_subset(a.type1, b.type1)) throw ConfigError("containment coupling needs A.type1 within B.type1");
  if (!is_subset(b.type2, a.type2)) throw ConfigError("containment coupling needs A.type2 containing B.type2");

  const auto run_a = run_two_type(dom, a, field, StopRule::exhaust(horizon));
  const auto run_b = run_two_type(dom, b, field, StopRule::exhaust(horizon));
  const auto& ev_a = run_a.map.events();
  const auto& ev_b = run_b.map.events();

  CouplingReport rep{CouplingForm::Containment};
  SiteTable<SiteState> cur_a(dom.volume()), cur_b(dom.volume());
  std::int64_t bad1 = 0;  // type 1 in A but not in B
  std::int64_t bad2 = 0;  // type 2 in B but not in A
  std::size_t ia = 0, ib = 0;
  while (ia < ev_a.size() || ib < ev_b.size()) {
    const double t = std::min(ia < ev_a.size() ? ev_a[ia].time : kInfinity, ib < ev_b.size() ? ev_b[ib].time : kInfinity);
    for (; ia < ev_a.size() && ev_a[ia].time == t; ++ia) {
      const auto& e = ev_a[ia];
      cur_a.at(e.index) = e.type;
      const SiteState in_b = cur_b.get(e.index);
      if (e.type == SiteState::Type1 && in_b != SiteState::Type1) ++bad1;
      if (e.type == SiteState::Type2 && in_b == SiteState::Type2) --bad2;
    }
    for (; ib < ev_b.size() && ev_b[ib].time == t; ++ib) {
      const auto& e = ev_b[ib];
      cur_b.at(e.index) = e.type;
      const SiteState in_a = cur_a.get(e.index);
      if (e.type == SiteState::Type1 && in_a == SiteState::Type1) --bad1;
      if (e.type == SiteState::Type2 && in_a != SiteState::Type2) ++bad2;
    }
    ++rep.checks;
    if (bad1 != 0 || bad2 != 0) {
      ++rep.violations;
      if (!rep.first_violation_time) {
        rep.first_violation_time = t;
        rep.first_violation = "at t=" + std::to_string(t) + ": " + std::to_string(bad1) + " type-1 sites of A missing in B, " +
                              std::to_string(bad2) + " type-2 sites of B missing in A";
      }
    }
  }
  return rep;
}

CouplingReport coupled_subgraph(const Domain& dom_sub, std::span<const Point> sources_sub, const Domain& dom_super,
                                std::span<const Point> sources_super, const WeightField& field) {
  if (!dom_sub.is_subdomain_of(dom_super)) throw ConfigError("subgraph coupling needs the first domain inside the second");
  if (!is_subset(std::vector<Point>(sources_sub.begin(), sources_sub.end()),
                 std::vector<Point>(sources_super.begin(), sources_super.end()))) {
    throw ConfigError("subgraph coupling needs the first initial set inside the second");
  }
  const auto sub = passage_times(dom_sub, sources_sub, field, 1);
  const auto sup = passage_times(dom_super, sources_super, field, 1);

  CouplingReport rep{CouplingForm::SubgraphDominance};
  for (const auto idx : sub.settle_order()) {
    const Point p = dom_sub.point(idx);
    const double t_sub = sub.entry(idx).time;
    const double t_sup = sup.time(p);
    ++rep.checks;
    if (t_sup > t_sub) {
      ++rep.violations;
      if (!rep.first_violation_time) {
        rep.first_violation_time = t_sub;
        rep.first_violation = "site " + p.to_string() + ": subgraph time " + std::to_string(t_sub) +
                              " < supergraph time " + std::to_string(t_sup);
      }
    }
  }
  return rep;
}

CouplingReport coupled_pair(const Domain& dom_a, const SeedConfig& cfg_a, const Domain& dom_b, const SeedConfig& cfg_b,
                            const WeightField& field, CouplingForm form, double horizon) {
  const auto a = enumerate_seeds(cfg_a);
  const auto b = enumerate_seeds(cfg_b);
  if (form == CouplingForm::Containment) {
    if (!(dom_a == dom_b)) throw ConfigError("containment coupling runs both processes on the same domain");
    return coupled_containment(dom_a, a, b, field, horizon);
  }
  std::vector<Point> xa = a.type1, xb = b.type1;
  xa.insert(xa.end(), a.type2.begin(), a.type2.end());
  xb.insert(xb.end(), b.type2.begin(), b.type2.end());
  return coupled_subgraph(dom_a, xa, dom_b, xb, field);
}

}  // namespace richlab
