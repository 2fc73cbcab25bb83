#include "richlab/experiment.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "richlab/calibration.hpp"
#include "richlab/error.hpp"
#include "richlab/estimators.hpp"

#ifndef RICHLAB_BUILD_ID
#define RICHLAB_BUILD_ID "unknown"
#endif

namespace richlab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}
std::string num(std::int64_t v) { return std::to_string(v); }

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw ContractViolation("csv row width mismatch");
    rows_.push_back(std::move(cells));
  }
  std::string str() const {
    std::string s;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
      }
      s += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return s;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

json to_json(const Estimate& e) {
  return json{{"mean", e.mean},
              {"ci_lo", e.ci_lo},
              {"ci_hi", e.ci_hi},
              {"n", e.n},
              {"interval", e.kind == EstimatorKind::ProportionWilson ? "wilson95" : "normal95"}};
}

std::vector<std::string> estimate_cells(const Estimate& e) { return {num(e.mean), num(e.ci_lo), num(e.ci_hi)}; }

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

struct Output {
  Table results{{}};
  std::optional<Table> reps;
  std::optional<Table> events;
  json estimates = json::object();
  json truncation = json::object();
  json checks = json::object();
  std::int64_t horizon_hits = 0;
  std::string message;
};

template <typename... Cells>
std::vector<std::string> cells(Cells&&... c) {
  return {std::forward<Cells>(c)...};
}

Output run_kind(const ExperimentConfig& c, unsigned threads) {
  const Experiment ex{c.seed, c.reps, c.dim, threads};
  Output o;
  switch (c.kind) {
    case ExperimentKind::Mu: {
      const auto r = estimate_mu(*c.lambda, *c.n, ex);
      o.results = Table({"n", "lambda", "reps", "mean", "ci_lo", "ci_hi"});
      auto row = cells(num(*c.n), num(*c.lambda), num(c.reps));
      for (auto& s : estimate_cells(r.estimate)) row.push_back(s);
      o.results.row(row);
      o.reps = Table({"rep", "T_over_n"});
      for (std::size_t i = 0; i < r.samples.size(); ++i) o.reps->row({num(static_cast<std::int64_t>(i)), num(r.samples[i])});
      o.estimates["mu"] = to_json(r.estimate);
      o.truncation["domain"] = r.domain.describe();
      o.message = "mu_hat = " + num(r.estimate.mean);
      break;
    }
    case ExperimentKind::MuHyperplane: {
      const auto r = estimate_mu_hyperplane(*c.lambda, *c.n, *c.width, ex);
      o.results = Table({"quantity", "n", "W", "reps", "mean", "ci_lo", "ci_hi"});
      auto add = [&](const char* q, const Estimate& e) {
        auto row = cells(q, num(*c.n), num(*c.width), num(c.reps));
        for (auto& s : estimate_cells(e)) row.push_back(s);
        o.results.row(row);
      };
      add("hyperplane_start", r.hyperplane);
      add("origin_start", r.origin);
      o.estimates["hyperplane_start"] = to_json(r.hyperplane);
      o.estimates["origin_start"] = to_json(r.origin);
      o.checks["pathwise_violations"] = r.pathwise_violations;
      o.truncation["domain"] = r.domain.describe();
      o.truncation["W"] = *c.width;
      std::vector<std::string> header{"rep", "TH_over_n", "T0_over_n"};
      std::optional<PlaneIdentityResult> id;
      if (*c.identity) {
        id = hyperplane_identity(*c.n, *c.width, ex);
        add("identity_from_plane", id->from_plane_mean);
        add("identity_to_plane", id->to_plane_mean);
        o.estimates["identity_from_plane"] = to_json(id->from_plane_mean);
        o.estimates["identity_to_plane"] = to_json(id->to_plane_mean);
        o.checks["identity_ks"] = {{"statistic", id->ks.statistic}, {"p_value", id->ks.p_value}};
        header.insert(header.end(), {"identity_from_plane", "identity_to_plane"});
      }
      o.reps = Table(header);
      for (std::size_t i = 0; i < r.hyperplane_samples.size(); ++i) {
        auto row = cells(num(static_cast<std::int64_t>(i)), num(r.hyperplane_samples[i]), num(r.origin_samples[i]));
        if (id) {
          row.push_back(num(id->from_plane[i]));
          row.push_back(num(id->to_plane[i]));
        }
        o.reps->row(row);
      }
      o.message = "hyperplane " + num(r.hyperplane.mean) + ", origin " + num(r.origin.mean);
      break;
    }
    case ExperimentKind::MuHampered: {
      const auto r = estimate_mu_hampered(*c.lambda, *c.n, c.b_list, ex);
      o.results = Table({"b", "n", "reps", "mean", "ci_lo", "ci_hi"});
      json rows = json::array();
      for (const auto& row : r.rows) {
        auto cellsv = cells(num(row.b), num(*c.n), num(c.reps));
        for (auto& s : estimate_cells(row.estimate)) cellsv.push_back(s);
        o.results.row(cellsv);
        auto j = to_json(row.estimate);
        j["b"] = row.b;
        rows.push_back(j);
      }
      auto last = cells("unhampered", num(*c.n), num(c.reps));
      for (auto& s : estimate_cells(r.unhampered)) last.push_back(s);
      o.results.row(last);
      o.estimates["hampered"] = rows;
      o.estimates["unhampered"] = to_json(r.unhampered);
      o.checks["pathwise_violations"] = r.pathwise_violations;
      o.truncation["tube_x1_max"] = *c.n + *c.n / 4;
      o.message = "unhampered " + num(r.unhampered.mean);
      break;
    }
    case ExperimentKind::Descent: {
      const auto r = descent_experiment(*c.b, *c.width, *c.overshoot, ex);
      o.results = Table({"quantity", "b", "W", "overshoot", "reps", "mean", "ci_lo", "ci_hi"});
      for (const auto& [q, e] : {std::pair{"X_b", r.x_b}, std::pair{"X_b_star", r.x_b_star}}) {
        auto row = cells(q, num(*c.b), num(*c.width), num(*c.overshoot), num(c.reps));
        for (auto& s : estimate_cells(e)) row.push_back(s);
        o.results.row(row);
      }
      o.reps = Table({"rep", "X_b", "X_b_star"});
      for (std::size_t i = 0; i < r.samples.size(); ++i) {
        o.reps->row({num(static_cast<std::int64_t>(i)), num(r.samples[i].x_b), num(r.samples[i].x_b_star)});
      }
      o.estimates["X_b"] = to_json(r.x_b);
      o.estimates["X_b_star"] = to_json(r.x_b_star);
      o.checks["implication_violations"] = r.implication_violations;
      o.truncation["W"] = *c.width;
      o.truncation["overshoot"] = *c.overshoot;
      o.message = "E[X_b] ~ " + num(r.x_b.mean) + ", E[X_b*] ~ " + num(r.x_b_star.mean);
      break;
    }
    case ExperimentKind::Records: {
      const auto r = records_experiment(*c.t, ex, c.lateral.value_or(0));
      o.results = Table({"quantity", "t", "reps", "mean", "ci_lo", "ci_hi"});
      for (const auto& [q, e] : {std::pair{"axis_rate", r.axis_rate}, std::pair{"record_rate", r.record_rate}}) {
        auto row = cells(q, num(*c.t), num(c.reps));
        for (auto& s : estimate_cells(e)) row.push_back(s);
        o.results.row(row);
      }
      o.reps = Table({"rep", "Y", "Y_record"});
      for (std::size_t i = 0; i < r.probes.size(); ++i) {
        o.reps->row({num(static_cast<std::int64_t>(i)), num(r.probes[i].y), num(r.probes[i].y_record)});
      }
      o.estimates["axis_rate"] = to_json(r.axis_rate);
      o.estimates["record_rate"] = to_json(r.record_rate);
      o.truncation["n_max"] = r.n_max;
      o.truncation["lateral"] = r.lateral;
      o.truncation["extended_reps"] = r.extended_reps;
      o.truncation["guard_band"] = calibration::kGuardBand;
      o.message = "Y/t ~ " + num(r.axis_rate.mean) + ", Y_rec/t ~ " + num(r.record_rate.mean);
      break;
    }
    case ExperimentKind::RecordProbability: {
      const auto e = record_probability(*c.n, *c.k, ex);
      o.results = Table({"n", "K", "successes", "reps", "p_hat", "ci_lo", "ci_hi"});
      const auto successes = static_cast<std::int64_t>(std::llround(e.mean * static_cast<double>(c.reps)));
      auto row = cells(num(*c.n), num(*c.k), num(successes), num(c.reps));
      for (auto& s : estimate_cells(e)) row.push_back(s);
      o.results.row(row);
      o.estimates["record_probability"] = to_json(e);
      o.message = "p_hat = " + num(e.mean);
      break;
    }
    case ExperimentKind::Shape: {
      const auto r = shape_check(*c.lambda, *c.t, ex);
      o.results = Table({"quantity", "t", "lambda", "reps", "mean", "ci_lo", "ci_hi"});
      for (const auto& [q, e] : {std::pair{"deficiency", r.deficiency}, std::pair{"deviation", r.deviation}}) {
        auto row = cells(q, num(*c.t), num(*c.lambda), num(c.reps));
        for (auto& s : estimate_cells(e)) row.push_back(s);
        o.results.row(row);
      }
      o.reps = Table({"rep", "infected", "hull_points", "deficiency", "deviation"});
      for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
        const auto& s = r.snapshots[i];
        o.reps->row({num(static_cast<std::int64_t>(i)), num(s.infected), num(s.hull_points), num(s.deficiency), num(s.deviation)});
      }
      o.estimates["deficiency"] = to_json(r.deficiency);
      o.estimates["deviation"] = to_json(r.deviation);
      o.truncation["max_half_width"] = r.half_width;
      o.message = "deficiency " + num(r.deficiency.mean) + ", deviation " + num(r.deviation.mean);
      break;
    }
    case ExperimentKind::Survival: {
      SurvivalOptions so;
      so.lambda2 = *c.lambda2;
      so.clock = *c.clock;
      so.engine = *c.engine;
      so.half_width = c.half_width;
      so.horizon = c.horizon;
      const auto r = survival_curve(*c.seeds, c.radii, ex, so);
      o.results = Table({"R", "survived", "reps", "p_hat", "ci_lo", "ci_hi"});
      json rows = json::array();
      for (const auto& row : r.rows) {
        auto cv = cells(num(row.radius), num(row.survived), num(c.reps));
        for (auto& s : estimate_cells(row.estimate)) cv.push_back(s);
        o.results.row(cv);
        auto j = to_json(row.estimate);
        j["R"] = row.radius;
        j["survived"] = row.survived;
        rows.push_back(j);
      }
      o.reps = Table({"rep", "max_type2_distance"});
      for (std::size_t i = 0; i < r.max_type2_distance.size(); ++i) {
        o.reps->row({num(static_cast<std::int64_t>(i)), num(r.max_type2_distance[i])});
      }
      o.estimates["survival"] = rows;
      o.truncation["M"] = r.half_width;
      o.truncation["horizon"] = r.horizon;
      o.horizon_hits = r.horizon_hits;
      o.message = "survival at R=" + num(r.rows.back().radius) + ": " + num(r.rows.back().estimate.mean);
      break;
    }
    case ExperimentKind::CoexistenceScan: {
      const auto rows = coexistence_scan(c.n_list, c.radii.front(), ex, *c.swap);
      o.results = Table({"n", "both", "reps", "p_hat", "ci_lo", "ci_hi", "horizon_hits"});
      json js = json::array();
      for (const auto& row : rows) {
        auto cv = cells(num(row.n), num(row.both), num(c.reps));
        for (auto& s : estimate_cells(row.estimate)) cv.push_back(s);
        cv.push_back(num(row.horizon_hits));
        o.results.row(cv);
        auto j = to_json(row.estimate);
        j["n"] = row.n;
        j["both"] = row.both;
        js.push_back(j);
        o.horizon_hits += row.horizon_hits;
      }
      o.estimates["coexistence"] = js;
      o.truncation["M"] = "2R + n";
      o.message = std::to_string(rows.size()) + " separations scanned";
      break;
    }
    case ExperimentKind::Simulate: {
      const auto m = effective_half_width(c);
      const Domain dom = Domain::box(c.dim, m);
      const double horizon = c.horizon.value_or(kInfinity);
      const std::int64_t radius = c.radii.empty() ? 0 : c.radii.front();
      const StopRule stop = *c.stop == StopMode::Survival ? StopRule::survival(radius, horizon) : StopRule::exhaust(horizon);
      const auto seeds = enumerate_seeds(*c.seeds);
      const auto rep = *c.rep;
      std::optional<TwoTypeRun> run;
      if (*c.engine == Engine::Markov) {
        CounterStream rng(c.seed, rep, 0x6d61726b6f76ULL);
        run.emplace(run_two_type_markov(dom, seeds, *c.lambda1, *c.lambda2, rng, stop));
      } else {
        run.emplace(run_two_type(dom, seeds, WeightField(c.seed, rep, *c.clock, *c.lambda1, *c.lambda2), stop));
      }
      const auto& out = run->outcome;
      o.results = Table({"reason", "end_time", "events", "type1_sites", "type2_sites", "max_type1_distance",
                         "max_type2_distance", "survived_to_R", "enclosure_time"});
      o.results.row({to_string(out.reason), num(out.end_time), num(out.event_count), num(run->map.count(SiteState::Type1)),
                     num(run->map.count(SiteState::Type2)), num(out.max_type1_distance), num(out.max_type2_distance),
                     out.survived_to_R ? "1" : "0", out.enclosure_time ? num(*out.enclosure_time) : ""});
      if (*c.emit_events) {
        std::vector<std::string> header{"seq", "time", "type"};
        for (int i = 0; i < c.dim; ++i) header.push_back("x" + std::to_string(i + 1));
        o.events = Table(header);
        std::int64_t seq = 0;
        for (const auto& e : run->map.events()) {
          const Point p = dom.point(e.index);
          std::vector<std::string> row{num(seq++), num(e.time), e.type == SiteState::Type1 ? "1" : "2"};
          for (int i = 0; i < c.dim; ++i) row.push_back(num(p[i]));
          o.events->row(row);
        }
      }
      o.estimates["outcome"] = {{"reason", to_string(out.reason)},
                                {"end_time", out.end_time},
                                {"events", out.event_count},
                                {"max_type1_distance", out.max_type1_distance},
                                {"max_type2_distance", out.max_type2_distance},
                                {"survived_to_R", out.survived_to_R}};
      o.truncation["M"] = m;
      o.truncation["horizon"] = c.horizon ? json(*c.horizon) : json(nullptr);
      o.horizon_hits = out.horizon_hit() ? 1 : 0;
      o.message = "run ended: " + to_string(out.reason) + " after " + num(out.event_count) + " infections";
      break;
    }
  }
  return o;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
  if (!f) throw ConfigError("error writing " + path.string());
}

json parameters(const ExperimentConfig& c) {
  json p = json::object();
  for (const auto& tok : tokenize_config(to_text(c))) {
    if (tok.key != "out") p[tok.key] = tok.value;
  }
  return p;
}

}  // namespace

std::string build_id() { return RICHLAB_BUILD_ID; }

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  // Configs built in code skip the parser; push them through it once.
  build_config(tokenize_config(to_text(cfg), "<config>"));
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + cfg.out + "'");
  const fs::path marker = dir / ".partial";
  write_file(marker, to_text(cfg));

  const auto started = utc_now();
  Output o = run_kind(cfg, opts.threads);

  RunReport rep;
  auto emit = [&](const char* name, const std::string& content) {
    write_file(dir / name, content);
    rep.files.push_back(dir / name);
  };
  emit("results.csv", o.results.str());
  if (o.reps) emit("reps.csv", o.reps->str());
  if (o.events) emit("events.csv", o.events->str());

  json summary;
  summary["kind"] = kind_name(cfg.kind);
  summary["parameters"] = parameters(cfg);
  summary["seed"] = cfg.seed;
  summary["reps"] = cfg.reps;
  summary["estimates"] = o.estimates;
  if (!o.checks.empty()) summary["checks"] = o.checks;
  summary["truncation"] = o.truncation;
  summary["horizon_hits"] = o.horizon_hits;
  summary["calibration_version"] = calibration::kVersion;
  summary["build_id"] = build_id();
  emit("summary.json", summary.dump(2) + "\n");

  json manifest;
  manifest["config"] = to_text(cfg);
  manifest["build_id"] = build_id();
  manifest["calibration_version"] = calibration::kVersion;
  manifest["threads"] = opts.threads;
  manifest["command_line"] = opts.command_line;
  manifest["started_utc"] = started;
  manifest["finished_utc"] = utc_now();
  json files = json::array();
  for (const auto& f : rep.files) files.push_back(f.filename().string());
  manifest["files"] = files;
  emit("manifest.json", manifest.dump(2) + "\n");

  fs::remove(marker, ec);
  rep.horizon_hits = o.horizon_hits;
  rep.message = o.message;
  if (o.horizon_hits > 0) {
    rep.exit_code = 3;
    rep.message += "; " + std::to_string(o.horizon_hits) + " run(s) hit the time horizon";
  }
  return rep;
}

}  // namespace richlab
