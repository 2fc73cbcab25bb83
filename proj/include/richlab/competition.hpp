#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "richlab/fpp.hpp"
#include "richlab/lattice.hpp"
#include "richlab/site_table.hpp"
#include "richlab/weight_field.hpp"

namespace richlab {

enum class SiteState : std::uint8_t { Uninfected = 0, Type1 = 1, Type2 = 2 };

struct InfectionEntry {
  double time = kInfinity;
  SiteState state = SiteState::Uninfected;
  std::int8_t pred_dir = -1;  // same encoding as PassageEntry::pred_dir
};

struct InfectionEvent {
  double time;
  std::int64_t index;
  SiteState type;
};

/// Write-once per-site infection record of one two-type run.
class InfectionMap {
 public:
  explicit InfectionMap(Domain domain);

  const Domain& domain() const { return domain_; }
  SiteState state(const Point& p) const;
  /// Infection time; nullopt while uninfected.
  std::optional<double> time(const Point& p) const;
  /// Infecting neighbour; nullopt for seeds and uninfected sites.
  std::optional<Point> predecessor(const Point& p) const;
  const InfectionEntry& entry(std::int64_t index) const { return table_.get(index); }
  /// Infections in the order they happened (seeds first, at time 0).
  const std::vector<InfectionEvent>& events() const { return events_; }
  std::int64_t count(SiteState s) const;

  /// Records an infection. Throws ContractViolation if the site is already infected.
  void infect(std::int64_t index, SiteState type, double time, std::int8_t pred_dir);

 private:
  Domain domain_;
  SiteTable<InfectionEntry> table_;
  std::vector<InfectionEvent> events_;
};

enum class StopMode {
  Survival,     // type 2 reaches L-inf distance R from its centre, or is enclosed
  Coexistence,  // both types reach distance R from their centres, or either is enclosed
  Exhaust,      // run until no event remains (or the horizon)
};

struct StopRule {
  StopMode mode = StopMode::Exhaust;
  std::int64_t radius = 0;
  double horizon = kInfinity;
  /// Distance references; default to the origin.
  std::optional<Point> type1_center;
  std::optional<Point> type2_center;

  static StopRule survival(std::int64_t radius, double horizon = kInfinity) {
    return {StopMode::Survival, radius, horizon, std::nullopt, std::nullopt};
  }
  static StopRule coexistence(std::int64_t radius, Point type1_center, Point type2_center, double horizon = kInfinity) {
    return {StopMode::Coexistence, radius, horizon, type1_center, type2_center};
  }
  static StopRule exhaust(double horizon = kInfinity) { return {StopMode::Exhaust, 0, horizon, std::nullopt, std::nullopt}; }
};

enum class StopReason { Survived, Coexisted, Enclosed, Horizon, Exhausted };

std::string to_string(StopReason r);

struct RunOutcome {
  bool survived_to_R = false;
  std::int64_t max_type2_distance = -1;  // -1 when type 2 never infected anything
  std::int64_t max_type1_distance = -1;
  std::optional<double> enclosure_time;        // type 2 lost its last uninfected neighbour
  std::optional<double> type1_enclosure_time;  // same for type 1
  std::int64_t event_count = 0;
  StopReason reason = StopReason::Exhausted;
  double end_time = 0;

  bool horizon_hit() const { return reason == StopReason::Horizon; }
};

struct TwoTypeRun {
  InfectionMap map;
  RunOutcome outcome;
};

/// Competing first-passage dynamics on shared edge weights: a queue of tentative
/// (time, site, type) arrivals; the first arrival at an uninfected site fixes its type and
/// relaxes its neighbours with that type's weights. Ties go to the lexicographically
/// smaller site, then type 1.
TwoTypeRun run_two_type(const Domain& dom, const SeedLists& seeds, const WeightField& field, const StopRule& stop);
TwoTypeRun run_two_type(const Domain& dom, const SeedConfig& cfg, const WeightField& field, const StopRule& stop);

/// Event-driven continuous-time Markov simulation: every (infected, uninfected neighbour)
/// bond of type i fires at rate lambda_i with fresh exponential times. Agrees with
/// run_two_type in law, not pathwise.
TwoTypeRun run_two_type_markov(const Domain& dom, const SeedLists& seeds, double lambda1, double lambda2,
                               CounterStream& rng, const StopRule& stop);
TwoTypeRun run_two_type_markov(const Domain& dom, const SeedConfig& cfg, double lambda1, double lambda2,
                               CounterStream& rng, const StopRule& stop);

enum class CouplingForm {
  Containment,        // xi1^A(t) within xi1^B(t) and xi2^A(t) containing xi2^B(t), at every event time
  SubgraphDominance,  // every site infected on the subgraph run is infected no later on the supergraph run
};

struct CouplingReport {
  CouplingForm form = CouplingForm::Containment;
  std::int64_t checks = 0;      // event times (containment) or sites (dominance) examined
  std::int64_t violations = 0;
  std::optional<double> first_violation_time;
  std::string first_violation;

  bool holds() const { return violations == 0; }
};

/// Two-type runs A and B on one weight field and one domain. Requires
/// A.type1 within B.type1 and A.type2 containing B.type2 (ConfigError otherwise).
CouplingReport coupled_containment(const Domain& dom, const SeedLists& a, const SeedLists& b, const WeightField& field,
                                   double horizon = kInfinity);

/// One-type runs on dom_sub within dom_super from sources_sub within sources_super, shared weights.
CouplingReport coupled_subgraph(const Domain& dom_sub, std::span<const Point> sources_sub, const Domain& dom_super,
                                std::span<const Point> sources_super, const WeightField& field);

/// Dispatches on `form`. For SubgraphDominance the union of each config's seeds is the
/// one-type initial set.
CouplingReport coupled_pair(const Domain& dom_a, const SeedConfig& cfg_a, const Domain& dom_b, const SeedConfig& cfg_b,
                            const WeightField& field, CouplingForm form, double horizon = kInfinity);

}  // namespace richlab
