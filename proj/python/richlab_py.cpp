#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "richlab/competition.hpp"
#include "richlab/config.hpp"
#include "richlab/error.hpp"
#include "richlab/estimators.hpp"
#include "richlab/experiment.hpp"
#include "richlab/fpp.hpp"
#include "richlab/stats.hpp"
#include "richlab/weight_field.hpp"

namespace py = pybind11;
using namespace richlab;

// Points travel as tuples of ints.
namespace pybind11::detail {
template <>
struct type_caster<Point> {
  PYBIND11_TYPE_CASTER(Point, const_name("tuple[int, ...]"));

  bool load(handle src, bool) {
    if (!isinstance<sequence>(src) || isinstance<str>(src)) return false;
    const auto seq = reinterpret_borrow<sequence>(src);
    const auto n = static_cast<int>(seq.size());
    if (n < 1 || n > Point::kMaxDim) return false;
    value = Point(n);
    for (int i = 0; i < n; ++i) value[i] = seq[static_cast<std::size_t>(i)].cast<std::int64_t>();
    return true;
  }

  static handle cast(const Point& p, return_value_policy, handle) {
    tuple t(p.dim());
    for (int i = 0; i < p.dim(); ++i) t[static_cast<std::size_t>(i)] = int_(p[i]);
    return t.release();
  }
};
}  // namespace pybind11::detail

namespace {

Experiment make_experiment(std::uint64_t seed, std::int64_t reps, int dim, unsigned threads) {
  return Experiment{seed, reps, dim, threads};
}

SeedConfig seed_config(const std::string& type1, const std::string& type2, int dim) {
  return SeedConfig{dim, parse_region(type1), parse_region(type2)};
}

py::dict passage_dict(const PassageResult& res) {
  py::dict out;
  for (const auto idx : res.settle_order()) out[py::cast(res.domain().point(idx))] = res.entry(idx).time;
  return out;
}

}  // namespace

PYBIND11_MODULE(richlab, m) {
  m.doc() = "Simulation lab for one- and two-type first-passage growth on Z^d.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("mean", &Estimate::mean)
      .def_readonly("ci_lo", &Estimate::ci_lo)
      .def_readonly("ci_hi", &Estimate::ci_hi)
      .def_readonly("n", &Estimate::n)
      .def_property_readonly("half_width", &Estimate::half_width)
      .def("contains", &Estimate::contains)
      .def("overlaps", &Estimate::overlaps)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(" + std::to_string(e.mean) + ", [" + std::to_string(e.ci_lo) + ", " + std::to_string(e.ci_hi) +
               "], n=" + std::to_string(e.n) + ")";
      });

  py::class_<Domain>(m, "Domain")
      .def_static("box", &Domain::box, py::arg("dim"), py::arg("half_width"))
      .def_static("tube", &Domain::tube, py::arg("dim"), py::arg("b"), py::arg("x1_min"), py::arg("x1_max"))
      .def_static("slab", &Domain::slab, py::arg("dim"), py::arg("x1_min"), py::arg("x1_max"), py::arg("lateral"))
      .def_property_readonly("dim", &Domain::dim)
      .def_property_readonly("volume", &Domain::volume)
      .def("contains", &Domain::contains)
      .def("neighbors", &Domain::neighbors)
      .def("sites", &Domain::sites)
      .def("__repr__", &Domain::describe);

  m.def(
      "enumerate_seeds",
      [](const std::string& type1, const std::string& type2, int dim) {
        const auto s = enumerate_seeds(seed_config(type1, type2, dim));
        return py::make_tuple(s.type1, s.type2);
      },
      py::arg("type1"), py::arg("type2") = "origin", py::arg("dim") = 2);

  m.def(
      "uniform01",
      [](std::uint64_t seed, std::int64_t rep, const Point& p, const Point& q, int clock) {
        return uniform01(seed, rep, canonical_edge(p, q), clock);
      },
      py::arg("seed"), py::arg("rep"), py::arg("p"), py::arg("q"), py::arg("clock") = 1);

  m.def(
      "edge_weight",
      [](std::uint64_t seed, std::int64_t rep, const Point& p, const Point& q, double lambda) {
        return WeightField::one_type(seed, rep, lambda).edge_weight(canonical_edge(p, q), 1);
      },
      py::arg("seed"), py::arg("rep"), py::arg("p"), py::arg("q"), py::arg("lambda_") = 1.0);

  m.def(
      "passage_times",
      [](const Domain& dom, const std::vector<Point>& sources, std::uint64_t seed, std::int64_t rep, double lambda,
         std::optional<std::int64_t> x1_bound) {
        const auto f = WeightField::one_type(seed, rep, lambda);
        return passage_dict(x1_bound ? restricted_passage_times(dom, sources, f, 1, *x1_bound)
                                     : passage_times(dom, sources, f));
      },
      py::arg("domain"), py::arg("sources"), py::arg("seed"), py::arg("rep") = 0, py::arg("lambda_") = 1.0,
      py::arg("x1_bound") = py::none(), "Map site -> first-passage time from the source set.");

  m.def(
      "run_two_type",
      [](const Domain& dom, const std::string& type1, const std::string& type2, std::uint64_t seed, std::int64_t rep,
         double lambda2, bool single_clock, std::int64_t radius) {
        const auto cfg = seed_config(type1, type2, dom.dim());
        const WeightField f(seed, rep, single_clock ? ClockMode::Single : ClockMode::Two, 1.0, lambda2);
        const auto stop = radius > 0 ? StopRule::survival(radius) : StopRule::exhaust();
        const auto run = run_two_type(dom, cfg, f, stop);
        py::dict states;
        for (const auto& ev : run.map.events()) {
          states[py::cast(dom.point(ev.index))] = py::make_tuple(static_cast<int>(ev.type), ev.time);
        }
        py::dict outcome;
        outcome["survived_to_R"] = run.outcome.survived_to_R;
        outcome["max_type2_distance"] = run.outcome.max_type2_distance;
        outcome["reason"] = to_string(run.outcome.reason);
        outcome["event_count"] = run.outcome.event_count;
        outcome["enclosure_time"] = run.outcome.enclosure_time;
        return py::make_tuple(states, outcome);
      },
      py::arg("domain"), py::arg("type1"), py::arg("type2") = "origin", py::arg("seed") = 1, py::arg("rep") = 0,
      py::arg("lambda2") = 1.0, py::arg("single_clock") = false, py::arg("radius") = 0,
      "Returns ({site: (type, time)}, outcome dict).");

  m.def(
      "estimate_mu",
      [](double lambda, std::int64_t n, std::uint64_t seed, std::int64_t reps, int dim, unsigned threads) {
        const auto r = estimate_mu(lambda, n, make_experiment(seed, reps, dim, threads));
        return py::make_tuple(r.estimate, r.samples);
      },
      py::arg("lambda_"), py::arg("n"), py::arg("seed") = 1, py::arg("reps") = 100, py::arg("dim") = 2,
      py::arg("threads") = 1, "Returns (Estimate of T(n e1)/n, per-replication samples).");

  m.def(
      "hyperplane_identity",
      [](std::int64_t n, std::int64_t width, std::uint64_t seed, std::int64_t reps, unsigned threads) {
        const auto r = hyperplane_identity(n, width, make_experiment(seed, reps, 2, threads));
        return py::make_tuple(r.from_plane, r.to_plane, r.ks.statistic, r.ks.p_value);
      },
      py::arg("n"), py::arg("width"), py::arg("seed") = 1, py::arg("reps") = 100, py::arg("threads") = 1);

  m.def(
      "descent_experiment",
      [](std::int64_t b, std::int64_t width, std::int64_t overshoot, std::uint64_t seed, std::int64_t reps,
         unsigned threads) {
        const auto r = descent_experiment(b, width, overshoot, make_experiment(seed, reps, 2, threads));
        return py::make_tuple(r.x_b, r.x_b_star, r.implication_violations);
      },
      py::arg("b"), py::arg("width"), py::arg("overshoot"), py::arg("seed") = 1, py::arg("reps") = 100,
      py::arg("threads") = 1);

  m.def(
      "record_probability",
      [](std::int64_t n, std::int64_t k, std::uint64_t seed, std::int64_t reps, unsigned threads) {
        return record_probability(n, k, make_experiment(seed, reps, 2, threads));
      },
      py::arg("n"), py::arg("k"), py::arg("seed") = 1, py::arg("reps") = 100, py::arg("threads") = 1);

  m.def(
      "shape_check",
      [](double lambda, double t, std::uint64_t seed, std::int64_t reps, unsigned threads) {
        const auto r = shape_check(lambda, t, make_experiment(seed, reps, 2, threads));
        return py::make_tuple(r.deficiency, r.deviation);
      },
      py::arg("lambda_"), py::arg("t"), py::arg("seed") = 1, py::arg("reps") = 10, py::arg("threads") = 1);

  m.def(
      "survival_curve",
      [](const std::string& type1, const std::vector<std::int64_t>& radii, double lambda2, std::uint64_t seed,
         std::int64_t reps, std::optional<std::int64_t> half_width, bool markov, unsigned threads) {
        SurvivalOptions opts;
        opts.lambda2 = lambda2;
        opts.half_width = half_width;
        opts.engine = markov ? Engine::Markov : Engine::Weights;
        const auto r = survival_curve(seed_config(type1, "origin", 2), radii, make_experiment(seed, reps, 2, threads), opts);
        py::list rows;
        for (const auto& row : r.rows) rows.append(py::make_tuple(row.radius, row.survived, row.estimate));
        return rows;
      },
      py::arg("type1"), py::arg("radii"), py::arg("lambda2") = 1.0, py::arg("seed") = 1, py::arg("reps") = 100,
      py::arg("half_width") = py::none(), py::arg("markov") = false, py::arg("threads") = 1,
      "Rows of (R, survived, Estimate).");

  m.def(
      "coexistence_scan",
      [](const std::vector<std::int64_t>& n_list, std::int64_t radius, std::uint64_t seed, std::int64_t reps,
         bool swap_types, unsigned threads) {
        py::list rows;
        for (const auto& row : coexistence_scan(n_list, radius, make_experiment(seed, reps, 2, threads), swap_types)) {
          rows.append(py::make_tuple(row.n, row.both, row.estimate));
        }
        return rows;
      },
      py::arg("n_list"), py::arg("radius"), py::arg("seed") = 1, py::arg("reps") = 100, py::arg("swap") = false,
      py::arg("threads") = 1);

  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = ks_two_sample(a, b);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("a"), py::arg("b"));
  m.def("wilson", &wilson_estimate, py::arg("successes"), py::arg("trials"), py::arg("z") = kZ95);
  m.def(
      "mean_estimate", [](const std::vector<double>& v) { return mean_estimate(v); }, py::arg("samples"));

  m.def(
      "normalize_config", [](const std::string& text) { return to_text(parse_config(text)); }, py::arg("text"),
      "Parses and validates a key=value config, returning its canonical text.");
  m.def(
      "run_experiment",
      [](const std::string& text, unsigned threads) {
        const auto report = run_experiment(parse_config(text), RunOptions{threads, "python"});
        std::vector<std::string> files;
        for (const auto& f : report.files) files.push_back(f.string());
        return py::make_tuple(report.exit_code, files);
      },
      py::arg("config"), py::arg("threads") = 1, "Returns (exit code, written files).");

  m.attr("build_id") = build_id();
}
