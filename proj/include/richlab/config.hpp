#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "richlab/competition.hpp"
#include "richlab/estimators.hpp"
#include "richlab/lattice.hpp"

namespace richlab {

enum class ExperimentKind {
  Mu,
  MuHyperplane,
  MuHampered,
  Descent,
  Records,
  RecordProbability,
  Shape,
  Survival,
  CoexistenceScan,
  Simulate,
};

/// Canonical subcommand name ("mu", "mu-hyperplane", ...).
std::string kind_name(ExperimentKind k);
/// Accepts canonical names and their underscore spellings (e.g. survival_curve).
std::optional<ExperimentKind> parse_kind(std::string_view name);
std::vector<std::string> kind_names();

/// A validated experiment. Optional fields are unset when the kind does not use them.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Mu;
  std::uint64_t seed = 1;
  std::int64_t reps = 100;
  int dim = 2;
  std::string out = "out";

  // one-type estimators
  std::optional<double> lambda;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> width;      // W
  std::optional<std::int64_t> overshoot;
  std::optional<std::int64_t> k;          // K
  std::optional<double> t;
  std::optional<std::int64_t> lateral;
  std::vector<std::int64_t> b_list;        // mu-hampered
  std::optional<std::int64_t> b;           // descent
  std::optional<bool> identity;            // mu-hyperplane: also run the plane identity samples

  // two-type runs
  std::optional<SeedConfig> seeds;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<ClockMode> clock;
  std::optional<Engine> engine;
  std::optional<std::int64_t> half_width;  // M
  std::optional<double> horizon;
  std::vector<std::int64_t> radii;         // survival R list; coexistence-scan and simulate use radii[0]
  std::vector<std::int64_t> n_list;        // coexistence-scan
  std::optional<bool> swap;
  std::optional<std::int64_t> rep;         // simulate: replication index
  std::optional<StopMode> stop;            // simulate
  std::optional<bool> emit_events;         // simulate

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// One `key=value` assignment and where it came from, for diagnostics.
struct ConfigToken {
  std::string key;
  std::string value;
  std::string source;  // e.g. "config.txt" or "<text>"
  int line = 0;
  int column = 0;

  std::string where() const;
};

/// Splits text into assignments: whitespace-separated `key=value` tokens, `#` starts a
/// comment that runs to the end of the line. Throws ConfigError on a token without '='.
std::vector<ConfigToken> tokenize_config(std::string_view text, std::string_view source = "<text>");

/// Validates assignments into a config. Later assignments override earlier ones with the same
/// key. Every error message carries the offending token's line and column.
ExperimentConfig build_config(const std::vector<ConfigToken>& tokens);

/// tokenize_config + build_config, rejecting a key assigned twice within the text.
ExperimentConfig parse_config(std::string_view text);

/// Canonical text form, one assignment per line; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& c);

/// Box half-width the run will use (explicit M, or the seed-configuration default).
std::int64_t effective_half_width(const ExperimentConfig& c);

}  // namespace richlab
