import csv
import math

import networkx as nx
import pytest

import richlab


def test_weights_are_minus_log_uniform():
    u = richlab.uniform01(7, 3, (0, 0), (1, 0))
    assert 0.0 < u < 1.0
    assert richlab.edge_weight(7, 3, (1, 0), (0, 0)) == -math.log(u)
    assert richlab.edge_weight(7, 3, (0, 0), (1, 0), lambda_=2.0) == -math.log(u) / 2.0


def test_passage_times_match_networkx_dijkstra():
    dom = richlab.Domain.box(2, 3)
    g = nx.Graph()
    for p in dom.sites():
        for q in dom.neighbors(p):
            g.add_edge(p, q, weight=richlab.edge_weight(11, 0, p, q))
    sources = [(0, 0), (2, -3)]
    expected = nx.multi_source_dijkstra_path_length(g, sources)
    got = richlab.passage_times(dom, sources, seed=11)
    assert set(got) == set(expected)
    for site, t in expected.items():
        assert got[site] == pytest.approx(t, rel=1e-12, abs=1e-15)


def test_single_clock_types_follow_the_nearest_source():
    dom = richlab.Domain.box(2, 6)
    states, outcome = richlab.run_two_type(dom, "halfaxis:L=6", seed=5, single_clock=True)
    type1, type2 = richlab.enumerate_seeds("halfaxis:L=6")
    from_1 = richlab.passage_times(dom, type1, seed=5)
    from_2 = richlab.passage_times(dom, type2, seed=5)
    assert outcome["reason"] == "exhausted"
    for site, (kind, t) in states.items():
        assert t == min(from_1[site], from_2[site])
        assert kind == (1 if from_1[site] < from_2[site] else 2)


def test_estimator_rate_scaling_is_exact():
    _, base = richlab.estimate_mu(1.0, 16, seed=3, reps=10)
    _, fast = richlab.estimate_mu(2.0, 16, seed=3, reps=10)
    assert [2 * x for x in fast] == base


def test_statistics_helpers():
    assert richlab.ks_two_sample([1, 2, 3], [1.5, 2.5, 3.5])[0] == pytest.approx(1 / 3)
    e = richlab.wilson(0, 10)
    z2 = 1.959963984540054**2
    assert e.ci_hi == pytest.approx(z2 / (10 + z2))
    rows = richlab.survival_curve("hyperplane:W=16", [0, 4, 8], seed=2, reps=30)
    assert rows[0][1] == 30
    assert rows[1][1] >= rows[2][1]


def test_config_round_trip_and_errors():
    text = richlab.normalize_config("kind=survival_curve cfg=hyperplane:W=256 lambda2=1.0 R=16,32,64 reps=2000 seed=7")
    assert richlab.normalize_config(text) == text
    with pytest.raises(ValueError, match="lambda > 0"):
        richlab.normalize_config("kind=survival cfg=hyperplane:W=64 R=8 lambda2=-1")


def test_run_experiment_writes_results(tmp_path):
    out = tmp_path / "surv"
    code, files = richlab.run_experiment(f"kind=survival cfg=hyperplane:W=16 R=2,4 reps=20 out={out}")
    assert code in (0, 3)
    with open(out / "results.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["R", "survived", "reps", "p_hat", "ci_lo", "ci_hi"]
    assert len(rows) == 3
    assert not (out / ".partial").exists()
