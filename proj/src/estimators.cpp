#include "richlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "richlab/calibration.hpp"
#include "richlab/error.hpp"
#include "richlab/parallel.hpp"

namespace richlab {

namespace {

constexpr std::uint64_t kMarkovTag = 0x6d61726b6f76ULL;

void check_experiment(const Experiment& ex, const char* who) {
  if (ex.reps < 1) throw ConfigError(std::string(who) + ": reps must be >= 1");
  if (ex.dim < 1 || ex.dim > Point::kMaxDim) {
    throw ConfigError(std::string(who) + ": dimension must be in [1, " + std::to_string(Point::kMaxDim) + "]");
  }
}

void check_rate(double lambda, const char* who) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw ConfigError(std::string(who) + ": lambda must be > 0");
}

std::int64_t ceil_half(std::int64_t n) { return (n + 1) / 2; }

Domain mu_domain(int dim, std::int64_t n) {
  const auto h = ceil_half(n);
  return Domain::slab(dim, -h, n + h, std::max<std::int64_t>(h, 1));
}

double axis_time(const Domain& dom, std::span<const Point> sources, const WeightField& field, std::int64_t n) {
  const Point target = Point::on_axis(dom.dim(), n);
  PassageOptions opts;
  opts.stop_after = [&](const Point& p) { return p == target; };
  return passage_times(dom, sources, field, 1, opts).time(target);
}

std::vector<Point> hyperplane_sources(int dim, std::int64_t width) {
  std::vector<Point> src{Point::origin(dim)};
  const auto rest = enumerate_region(RegionSpec::hyperplane(width), dim);
  src.insert(src.end(), rest.begin(), rest.end());
  return src;
}

double time_scale(std::int64_t r) { return calibration::kHorizonFactor * static_cast<double>(std::max<std::int64_t>(r, 1)) * calibration::kMuPilot; }

}  // namespace

MuResult estimate_mu(double lambda, std::int64_t n, const Experiment& ex) {
  check_experiment(ex, "estimate_mu");
  check_rate(lambda, "estimate_mu");
  if (n < 1) throw ConfigError("estimate_mu: n must be >= 1");
  const Domain dom = mu_domain(ex.dim, n);
  const Point origin[] = {Point::origin(ex.dim)};
  auto samples = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    return axis_time(dom, origin, WeightField::one_type(ex.seed, rep, lambda), n) / static_cast<double>(n);
  });
  return {mean_estimate(samples), std::move(samples), dom};
}

MuHyperplaneResult estimate_mu_hyperplane(double lambda, std::int64_t n, std::int64_t width, const Experiment& ex) {
  check_experiment(ex, "estimate_mu_hyperplane");
  check_rate(lambda, "estimate_mu_hyperplane");
  if (n < 1) throw ConfigError("estimate_mu_hyperplane: n must be >= 1");
  if (width < 4 * n) {
    throw ConfigError("estimate_mu_hyperplane: W=" + std::to_string(width) + " must be >= 4n=" + std::to_string(4 * n));
  }
  const Domain dom = Domain::slab(ex.dim, -n, 2 * n, width);
  const auto sources = hyperplane_sources(ex.dim, width);
  const Point origin[] = {Point::origin(ex.dim)};
  const auto nd = static_cast<double>(n);

  struct Pair {
    double plane = 0, point = 0;
  };
  const auto pairs = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    const auto field = WeightField::one_type(ex.seed, rep, lambda);
    return Pair{axis_time(dom, sources, field, n) / nd, axis_time(dom, origin, field, n) / nd};
  });

  MuHyperplaneResult r{{}, {}, {}, {}, 0, dom};
  for (const auto& p : pairs) {
    r.hyperplane_samples.push_back(p.plane);
    r.origin_samples.push_back(p.point);
    r.pathwise_violations += p.plane > p.point;
  }
  r.hyperplane = mean_estimate(r.hyperplane_samples);
  r.origin = mean_estimate(r.origin_samples);
  return r;
}

PlaneIdentityResult hyperplane_identity(std::int64_t n, std::int64_t width, const Experiment& ex) {
  check_experiment(ex, "hyperplane_identity");
  if (n < 1) throw ConfigError("hyperplane_identity: n must be >= 1");
  if (width < 4 * n) {
    throw ConfigError("hyperplane_identity: W=" + std::to_string(width) + " must be >= 4n=" + std::to_string(4 * n));
  }
  const Domain dom = Domain::slab(ex.dim, -n, 2 * n, width);
  const auto sources = hyperplane_sources(ex.dim, width);
  const auto plane = TargetSet::plane_x1(n);

  PlaneIdentityResult r;
  r.from_plane = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    return axis_time(dom, sources, WeightField::one_type(ex.seed, rep), n);
  });
  r.to_plane = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    return passage_time_to_set(dom, Point::origin(ex.dim), plane, WeightField::one_type(ex.seed, ex.reps + rep));
  });
  r.from_plane_mean = mean_estimate(r.from_plane);
  r.to_plane_mean = mean_estimate(r.to_plane);
  r.ks = ks_two_sample(r.from_plane, r.to_plane);
  return r;
}

HamperedResult estimate_mu_hampered(double lambda, std::int64_t n, const std::vector<std::int64_t>& b_list,
                                    const Experiment& ex) {
  check_experiment(ex, "estimate_mu_hampered");
  check_rate(lambda, "estimate_mu_hampered");
  if (n < 1) throw ConfigError("estimate_mu_hampered: n must be >= 1");
  if (b_list.empty()) throw ConfigError("estimate_mu_hampered: need at least one b");
  for (const auto b : b_list) {
    if (b < 0) throw ConfigError("estimate_mu_hampered: b must be >= 0");
  }
  std::vector<std::int64_t> bs = b_list;
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());

  const std::int64_t x1_max = n + n / 4;
  const Domain full = mu_domain(ex.dim, n);
  const Point origin[] = {Point::origin(ex.dim)};
  const auto nd = static_cast<double>(n);

  struct Row {
    std::vector<double> tube;
    double free = 0;
    std::int64_t violations = 0;
  };
  const auto rows = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    const auto field = WeightField::one_type(ex.seed, rep, lambda);
    Row row;
    row.free = axis_time(full, origin, field, n);
    for (const auto b : bs) row.tube.push_back(hampered_front(ex.dim, b, x1_max, field)[static_cast<std::size_t>(n)]);
    // Wider tubes are supergraphs of narrower ones; the slab contains every tube with b <= its lateral width.
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (i > 0 && row.tube[i] > row.tube[i - 1]) ++row.violations;
      if ((ex.dim == 1 || bs[i] <= full.upper(1)) && row.free > row.tube[i]) ++row.violations;
    }
    for (auto& v : row.tube) v /= nd;
    row.free /= nd;
    return row;
  });

  HamperedResult r;
  std::vector<double> col(rows.size());
  for (std::size_t j = 0; j < bs.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i].tube[j];
    r.rows.push_back({bs[j], mean_estimate(col)});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    col[i] = rows[i].free;
    r.pathwise_violations += rows[i].violations;
  }
  r.unhampered = mean_estimate(col);
  return r;
}

DescentResult descent_experiment(std::int64_t b, std::int64_t width, std::int64_t overshoot, const Experiment& ex) {
  check_experiment(ex, "descent_experiment");
  DescentResult r;
  r.samples = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    return descent_counts(ex.dim, b, width, overshoot, WeightField::one_type(ex.seed, rep));
  });
  std::vector<double> xb, xbs;
  for (const auto& s : r.samples) {
    xb.push_back(static_cast<double>(s.x_b));
    xbs.push_back(static_cast<double>(s.x_b_star));
    r.implication_violations += s.x_b >= 1 && s.x_b_star == 0;
  }
  r.x_b = mean_estimate(xb);
  r.x_b_star = mean_estimate(xbs);
  return r;
}

RecordsResult records_experiment(double t, const Experiment& ex, std::int64_t lateral) {
  check_experiment(ex, "records_experiment");
  if (!(t > 0) || !std::isfinite(t)) throw ConfigError("records_experiment: t must be > 0");
  if (lateral < 0) throw ConfigError("records_experiment: lateral width must be >= 0");
  if (lateral == 0) lateral = std::max<std::int64_t>(8, static_cast<std::int64_t>(std::ceil(t / (4.0 * calibration::kMuPilot))));
  const auto n_start = static_cast<std::int64_t>(std::ceil(1.25 * t / calibration::kMuPilot)) + calibration::kGuardBand;
  const std::int64_t back = std::min<std::int64_t>(lateral, 32);
  const double probe[] = {t};

  struct Rep {
    RecordProbe probe;
    std::int64_t n_max = 0;
    bool extended = false;
  };
  const auto reps = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    const auto field = WeightField::one_type(ex.seed, rep);
    Rep out;
    for (std::int64_t n_max = n_start;; n_max *= 2) {
      const auto dom = Domain::slab(ex.dim, -back, n_max, lateral);
      const auto tr = record_trace(dom, field, n_max, probe, calibration::kGuardBand, t);
      out.probe = tr.probes.front();
      out.n_max = n_max;
      if (out.probe.exact) return out;
      out.extended = true;
    }
  });

  RecordsResult r;
  r.t = t;
  r.lateral = lateral;
  std::vector<double> all, rec;
  for (const auto& x : reps) {
    all.push_back(static_cast<double>(x.probe.y) / t);
    rec.push_back(static_cast<double>(x.probe.y_record) / t);
    r.n_max = std::max(r.n_max, x.n_max);
    r.extended_reps += x.extended;
    r.probes.push_back(x.probe);
  }
  r.axis_rate = mean_estimate(all);
  r.record_rate = mean_estimate(rec);
  return r;
}

Estimate record_probability(std::int64_t n, std::int64_t k, const Experiment& ex) {
  check_experiment(ex, "record_probability");
  if (n < 0 || k < 0) throw ConfigError("record_probability: n and K must be >= 0");
  const std::int64_t margin = std::max<std::int64_t>(8, (n + k + 1) / 2);
  const Domain dom = Domain::slab(ex.dim, -margin, n + k + margin, margin);
  const Point origin[] = {Point::origin(ex.dim)};

  const auto hits = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) -> int {
    std::int64_t remaining = k + 1;
    PassageOptions opts;
    opts.stop_after = [&](const Point& p) {
      if (p[0] < n || p[0] > n + k) return false;
      for (int i = 1; i < p.dim(); ++i) {
        if (p[i] != 0) return false;
      }
      return --remaining == 0;
    };
    const auto res = passage_times(dom, origin, WeightField::one_type(ex.seed, rep), 1, opts);
    const double tn = res.time(Point::on_axis(ex.dim, n));
    for (std::int64_t l = n + 1; l <= n + k; ++l) {
      if (res.time(Point::on_axis(ex.dim, l)) < tn) return 0;
    }
    return 1;
  });
  std::int64_t s = 0;
  for (const int h : hits) s += h;
  return wilson_estimate(s, ex.reps);
}

std::vector<std::pair<double, double>> ShapeSnapshot::scaled() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(sites.size());
  for (const auto& p : sites) out.emplace_back(static_cast<double>(p[0]) / t, static_cast<double>(p[1]) / t);
  return out;
}

ShapeSnapshot shape_snapshot(const PassageResult& run, double t, bool keep_sites) {
  const Domain& dom = run.domain();
  if (dom.dim() != 2) throw Unsupported("shape_snapshot: planar runs only");
  for (int i = 0; i < 2; ++i) {
    if (dom.lower(i) != -dom.upper(i)) throw ContractViolation("shape_snapshot: domain must be symmetric about the origin");
  }
  if (dom.upper(0) != dom.upper(1)) throw ContractViolation("shape_snapshot: domain must be a square box");

  ShapeSnapshot s;
  s.t = t;
  std::vector<Vec2> pts;
  for (const auto idx : run.settle_order()) {
    if (run.entry(idx).time > t) break;
    const Point p = dom.point(idx);
    pts.push_back({p[0], p[1]});
    if (keep_sites) s.sites.push_back(p);
  }
  s.infected = static_cast<std::int64_t>(pts.size());
  if (pts.empty()) return s;

  s.hull = convex_hull(pts);
  s.hull_points = lattice_points_in_hull(s.hull);
  s.deficiency = static_cast<double>(s.hull_points - s.infected) / static_cast<double>(s.hull_points);

  auto inside = [&](const Point& p) {
    const auto& e = run.entry(dom.index(p));
    return e.settled && e.time <= t;
  };
  const auto maps = Symmetry::all(2);
  double dev = 0;
  int used = 0;
  for (const auto& g : maps) {
    if (g.is_identity()) continue;
    std::int64_t common = 0;
    for (const auto& v : pts) common += inside(g.apply(Point{v.x, v.y}));
    dev += 1.0 - static_cast<double>(common) / static_cast<double>(s.infected);
    ++used;
  }
  s.deviation = dev / used;
  return s;
}

ShapeSummary shape_check(double lambda, double t, const Experiment& ex, bool keep_sites) {
  check_experiment(ex, "shape_check");
  check_rate(lambda, "shape_check");
  if (ex.dim != 2) throw Unsupported("shape_check: only d = 2 is supported");
  if (!(t > 0) || !std::isfinite(t)) throw ConfigError("shape_check: t must be > 0");
  const auto m_start = static_cast<std::int64_t>(std::ceil(1.3 * lambda * t / calibration::kMuPilot)) + 4;

  struct Rep {
    ShapeSnapshot snap;
    std::int64_t m = 0;
  };
  const auto reps = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    const auto field = WeightField::one_type(ex.seed, rep, lambda);
    const Point origin[] = {Point::origin(2)};
    PassageOptions opts;
    opts.time_limit = t;
    for (std::int64_t m = m_start;; m *= 2) {
      const auto dom = Domain::box(2, m);
      const auto res = passage_times(dom, origin, field, 1, opts);
      bool touches = false;
      for (const auto idx : res.settle_order()) {
        if (dom.on_boundary(dom.point(idx))) {
          touches = true;
          break;
        }
      }
      if (!touches) return Rep{shape_snapshot(res, t, keep_sites), m};
    }
  });

  ShapeSummary r;
  std::vector<double> def, dev;
  for (const auto& x : reps) {
    def.push_back(x.snap.deficiency);
    dev.push_back(x.snap.deviation);
    r.half_width = std::max(r.half_width, x.m);
    r.snapshots.push_back(x.snap);
  }
  r.deficiency = mean_estimate(def);
  r.deviation = mean_estimate(dev);
  return r;
}

std::int64_t default_half_width(const SeedConfig& cfg, std::int64_t r_max) {
  const auto trunc = std::max(cfg.type1.truncation(), cfg.type2.truncation());
  return trunc > 0 ? trunc : 2 * r_max;
}

SurvivalResult survival_curve(const SeedConfig& cfg, const std::vector<std::int64_t>& radii, const Experiment& ex,
                              const SurvivalOptions& opts) {
  check_experiment(ex, "survival_curve");
  check_rate(opts.lambda2, "survival_curve");
  if (cfg.dim != ex.dim) throw ConfigError("survival_curve: seed dimension does not match the experiment");
  if (radii.empty()) throw ConfigError("survival_curve: need at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0) throw ConfigError("survival_curve: radii must be >= 0");
    if (i > 0 && radii[i] <= radii[i - 1]) throw ConfigError("survival_curve: radii must be strictly increasing");
  }
  const auto r_max = radii.back();
  const auto m = opts.half_width.value_or(default_half_width(cfg, r_max));
  if (2 * r_max > m) {
    throw ConfigError("survival_curve: R=" + std::to_string(r_max) + " exceeds M/2 for box half-width M=" + std::to_string(m));
  }
  const Domain dom = Domain::box(ex.dim, m);
  const auto seeds = enumerate_seeds(cfg);
  for (const auto* list : {&seeds.type1, &seeds.type2}) {
    for (const auto& p : *list) {
      if (!dom.contains(p)) throw ConfigError("survival_curve: seed " + p.to_string() + " lies outside " + dom.describe());
    }
  }
  const double horizon = opts.horizon.value_or(time_scale(r_max));
  const auto stop = StopRule::survival(r_max, horizon);
  // Validates the clock/rate combination once, before any worker starts.
  WeightField(ex.seed, 0, opts.clock, 1.0, opts.lambda2);

  const auto outcomes = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
    if (opts.engine == Engine::Markov) {
      CounterStream rng(ex.seed, rep, kMarkovTag);
      return run_two_type_markov(dom, seeds, 1.0, opts.lambda2, rng, stop).outcome;
    }
    return run_two_type(dom, seeds, WeightField(ex.seed, rep, opts.clock, 1.0, opts.lambda2), stop).outcome;
  });

  SurvivalResult r;
  r.half_width = m;
  r.horizon = horizon;
  for (const auto& o : outcomes) {
    r.horizon_hits += o.horizon_hit();
    r.max_type2_distance.push_back(o.max_type2_distance);
  }
  for (const auto radius : radii) {
    std::int64_t s = 0;
    for (const auto d : r.max_type2_distance) s += d >= radius;
    r.rows.push_back({radius, s, wilson_estimate(s, ex.reps)});
  }
  return r;
}

std::vector<CoexistenceRow> coexistence_scan(const std::vector<std::int64_t>& n_list, std::int64_t radius,
                                             const Experiment& ex, bool swap_types) {
  check_experiment(ex, "coexistence_scan");
  if (radius < 1) throw ConfigError("coexistence_scan: R must be >= 1");
  if (n_list.empty()) throw ConfigError("coexistence_scan: need at least one separation n");
  std::vector<CoexistenceRow> rows;
  for (const auto n : n_list) {
    if (n < 1) throw ConfigError("coexistence_scan: separations must be >= 1");
    const Domain dom = Domain::box(ex.dim, 2 * radius + n);
    const Point a = Point::origin(ex.dim);
    const Point b = Point::on_axis(ex.dim, n);
    const SeedLists seeds = swap_types ? SeedLists{{b}, {a}} : SeedLists{{a}, {b}};
    const auto stop = StopRule::coexistence(radius, seeds.type1.front(), seeds.type2.front(), time_scale(radius + n));
    const auto outcomes = parallel_map(ex.reps, ex.threads, [&](std::int64_t rep) {
      return run_two_type(dom, seeds, WeightField::one_type(ex.seed, rep), stop).outcome;
    });
    CoexistenceRow row{n, 0, {}, 0};
    for (const auto& o : outcomes) {
      row.both += o.max_type1_distance >= radius && o.max_type2_distance >= radius;
      row.horizon_hits += o.horizon_hit();
    }
    row.estimate = wilson_estimate(row.both, ex.reps);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace richlab
