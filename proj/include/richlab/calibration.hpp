#pragma once

#include <cstdint>

// Pilot-calibrated defaults. These are calibration artifacts, not derived quantities;
// docs/calibration.md describes the pilot protocol for each value. Bump kVersion whenever
// a value changes so manifests record which calibration produced a result.
namespace richlab::calibration {

inline constexpr int kVersion = 1;

/// Unit-rate axis time constant, d = 2, rounded down from the n = 256 pilot (0.4237, 500 reps).
/// Used for domain sizing and safety horizons only.
inline constexpr double kMuPilot = 0.42;

/// Safety horizon for survival-style runs: kHorizonFactor * R * kMuPilot time units.
inline constexpr double kHorizonFactor = 10.0;

/// Guard band excluding record flags near the finite axis horizon.
inline constexpr std::int64_t kGuardBand = 16;

/// Survival plateau floor for I(L) at lambda = 1.
inline constexpr double kPlateauFloor = 0.05;

/// Slack on the finite-n record probability lower bound (>= mu - slack).
inline constexpr double kRecordSlack = 0.05;

/// Lower bound on the mean record rate Y_rec(t)/t at t = 200.
inline constexpr double kRecordRateFloor = 0.95;

/// Relative tolerance between the b = 32 hampered and the unhampered constant at n = 256.
inline constexpr double kHamperedTolerance = 0.05;

/// Shape diagnostics at t = 150: upper bounds on mean convexity deficiency and
/// dihedral symmetry deviation.
inline constexpr double kShapeDeficiencyMax = 0.05;
inline constexpr double kShapeDeviationMax = 0.05;

}  // namespace richlab::calibration
