#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "richlab/competition.hpp"
#include "richlab/fpp.hpp"
#include "richlab/lattice.hpp"
#include "richlab/stats.hpp"

namespace richlab {

/// Settings shared by every Monte Carlo estimator. Replication i reads the weight field
/// (seed, i); results do not depend on `threads`.
struct Experiment {
  std::uint64_t seed = 1;
  std::int64_t reps = 100;
  int dim = 2;
  unsigned threads = 1;
};

// ---------------------------------------------------------------- time constants

struct MuResult {
  Estimate estimate;             // of T(n e1) / n
  std::vector<double> samples;   // T(n e1) / n per replication
  Domain domain;
};

/// Mean of T^0(n e1)/n on the slab x1 in [-n/2, 3n/2], lateral half-width n/2 (rounded up).
MuResult estimate_mu(double lambda, std::int64_t n, const Experiment& ex);

struct MuHyperplaneResult {
  Estimate hyperplane;  // T^H(n e1) / n
  Estimate origin;      // T^0(n e1) / n on the same weights and domain
  std::vector<double> hyperplane_samples;
  std::vector<double> origin_samples;
  std::int64_t pathwise_violations = 0;  // replications with T^H(n) > T^0(n)
  Domain domain;
};

/// Start set: the hyperplane {x1 = 0, |x_i| <= W}; domain slab x1 in [-n, 2n], lateral W.
/// Throws ConfigError if W < 4n.
MuHyperplaneResult estimate_mu_hyperplane(double lambda, std::int64_t n, std::int64_t width, const Experiment& ex);

struct PlaneIdentityResult {
  std::vector<double> from_plane;  // T^H(n e1), replications 0..reps-1
  std::vector<double> to_plane;    // T^0(H_n), replications reps..2 reps-1
  Estimate from_plane_mean;
  Estimate to_plane_mean;
  KsResult ks;
};

/// Two independent samples whose laws coincide: the time from the truncated hyperplane to
/// n e1, and from the origin to the plane {x1 = n}, both on the slab x1 in [-n, 2n], lateral W.
PlaneIdentityResult hyperplane_identity(std::int64_t n, std::int64_t width, const Experiment& ex);

struct HamperedRow {
  std::int64_t b = 0;
  Estimate estimate;  // T^{b*}(n e1) / n
};

struct HamperedResult {
  std::vector<HamperedRow> rows;
  Estimate unhampered;  // estimate_mu on the same replications
  std::int64_t pathwise_violations = 0;
};

/// Tube constants for each b (tube x1 in [0, n + n/4]), plus the unhampered constant.
HamperedResult estimate_mu_hampered(double lambda, std::int64_t n, const std::vector<std::int64_t>& b_list,
                                    const Experiment& ex);

// ---------------------------------------------------------------- descent and records

struct DescentResult {
  Estimate x_b;
  Estimate x_b_star;
  std::int64_t implication_violations = 0;  // replications with X_b >= 1 but X_b* = 0
  std::vector<DescentCounts> samples;
};

DescentResult descent_experiment(std::int64_t b, std::int64_t width, std::int64_t overshoot, const Experiment& ex);

struct RecordsResult {
  double t = 0;
  Estimate axis_rate;    // Y(t) / t
  Estimate record_rate;  // Y_rec(t) / t
  std::int64_t n_max = 0;
  std::int64_t lateral = 0;
  std::int64_t extended_reps = 0;  // replications rerun on a longer axis to keep the probe exact
  std::vector<RecordProbe> probes;
};

/// Record statistics at time t on the slab x1 in [-min(lateral, 32), n_max], lateral
/// half-width `lateral` (0 picks t / (4 mu_pilot)). n_max starts at 1.25 t / mu_pilot + 16
/// and doubles for any replication whose horizon column is reached by time t.
RecordsResult records_experiment(double t, const Experiment& ex, std::int64_t lateral = 0);

/// Proportion of replications with T(n e1) = min_{n <= l <= n+K} T(l e1).
Estimate record_probability(std::int64_t n, std::int64_t k, const Experiment& ex);

// ---------------------------------------------------------------- shape

struct ShapeSnapshot {
  double t = 0;
  std::vector<Point> sites;  // infected by time t (kept only on request)
  std::vector<Vec2> hull;
  std::int64_t infected = 0;
  std::int64_t hull_points = 0;  // lattice points inside or on the hull
  double deficiency = 0;         // fraction of hull lattice points not infected
  double deviation = 0;          // mean over the 7 non-trivial dihedral maps g of 1 - |S and gS| / |S|

  /// The scaled set {x / t}.
  std::vector<std::pair<double, double>> scaled() const;
};

/// Scores of the set {x : time(x) <= t} of a planar single-origin run. The run's domain
/// must be symmetric about the origin.
ShapeSnapshot shape_snapshot(const PassageResult& run, double t, bool keep_sites = false);

struct ShapeSummary {
  Estimate deficiency;
  Estimate deviation;
  std::int64_t half_width = 0;
  std::vector<ShapeSnapshot> snapshots;
};

/// Planar shape diagnostics at time t. The box half-width starts at 1.3 lambda t / mu_pilot
/// and doubles until the infected set stays off the walls. Throws Unsupported for d != 2.
ShapeSummary shape_check(double lambda, double t, const Experiment& ex, bool keep_sites = false);

// ---------------------------------------------------------------- two-type experiments

enum class Engine { Weights, Markov };

struct SurvivalRow {
  std::int64_t radius = 0;
  std::int64_t survived = 0;
  Estimate estimate;
};

struct SurvivalResult {
  std::vector<SurvivalRow> rows;
  std::int64_t half_width = 0;  // domain box M
  double horizon = 0;
  std::int64_t horizon_hits = 0;
  std::vector<std::int64_t> max_type2_distance;  // per replication
};

struct SurvivalOptions {
  double lambda2 = 1.0;  // type 1 runs at rate 1
  ClockMode clock = ClockMode::Two;
  Engine engine = Engine::Weights;
  std::optional<std::int64_t> half_width;  // default: seed truncation, or 2 R_max
  std::optional<double> horizon;           // default: kHorizonFactor R_max mu_pilot
};

/// Default box half-width for a seed configuration and largest radius.
std::int64_t default_half_width(const SeedConfig& cfg, std::int64_t r_max);

/// Survival-to-R proportions with one run per replication to R_max (nested design:
/// survived at R iff the run's max type-2 distance is >= R).
SurvivalResult survival_curve(const SeedConfig& cfg, const std::vector<std::int64_t>& radii, const Experiment& ex,
                              const SurvivalOptions& opts = {});

struct CoexistenceRow {
  std::int64_t n = 0;
  std::int64_t both = 0;
  Estimate estimate;
  std::int64_t horizon_hits = 0;
};

/// Type 1 at the origin, type 2 at n e1 (swapped if `swap_types`), lambda1 = lambda2 = 1,
/// single clock, box M = 2R + n. Estimates P(both types reach distance R from their seed).
std::vector<CoexistenceRow> coexistence_scan(const std::vector<std::int64_t>& n_list, std::int64_t radius,
                                             const Experiment& ex, bool swap_types = false);

}  // namespace richlab
