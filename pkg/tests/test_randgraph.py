import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nonjump import BudgetExceededError, SolverConfig, make_graph, make_pattern, simple_blow_up
from nonjump.io import emit_report
from nonjump.randgraph import (ConstructionError, build_theorem_graph, check_small_subgraph_bound,
                               delete_bad_edges, find_bad_sets, random_uniform_graph,
                               sample_sparse_graph, verify_sparse_property)
from oracles import brute_bad_sets, single_edge_lagrangian


def test_complete_k4_is_bad():
    K4 = make_graph(3, 4, itertools.combinations(range(1, 5), 3))
    assert find_bad_sets(K4, 4) == [(1, 2, 3, 4)]
    assert not verify_sparse_property(K4, 4)


def test_single_edge_is_never_bad():
    assert find_bad_sets(make_graph(3, 5, ["123"]), 5) == []


def test_two_edges_on_four_vertices_sit_at_the_threshold():
    assert find_bad_sets(make_graph(3, 4, ["123", "124"]), 4) == []


def test_three_edges_on_four_vertices_are_bad():
    assert find_bad_sets(make_graph(3, 4, ["123", "124", "134"]), 4) == [(1, 2, 3, 4)]


def test_isolated_vertex_extensions_are_listed():
    # K4 has surplus 4 - 2 = 2, so adding one isolated vertex keeps it bad
    K4 = make_graph(3, 5, itertools.combinations(range(1, 5), 3))
    bad = find_bad_sets(K4, 5)
    assert bad == brute_bad_sets(3, K4.edges, 5, 5)
    assert (1, 2, 3, 4, 5) in bad
    assert find_bad_sets(K4, 5, spanned_only=True) == [(1, 2, 3, 4)]


@settings(max_examples=40)
@given(st.integers(5, 8), st.integers(3, 6), st.integers(0, 10 ** 6))
def test_find_bad_sets_matches_brute_force(n, m, seed):
    rng = np.random.default_rng(seed)
    edges = [e for e in itertools.combinations(range(1, n + 1), 3) if rng.random() < 0.2]
    G = make_graph(3, n, edges)
    assert find_bad_sets(G, m) == brute_bad_sets(3, G.edges, m, n)


def test_m_equal_r_only_needs_simplicity():
    rep = sample_sparse_graph(3, 3, 0.01, 20, seed=1)
    assert rep.verified


def test_m_below_r_rejected():
    with pytest.raises(ValueError):
        find_bad_sets(make_graph(3, 4, ["123"]), 2)


def test_budget_error_reports_budget():
    G = make_graph(3, 9, itertools.combinations(range(1, 10), 3))
    with pytest.raises(BudgetExceededError) as exc:
        find_bad_sets(G, 6, budget=100)
    assert exc.value.budget == 100


def test_sampler_parameter_errors():
    with pytest.raises(ValueError, match="exceeds 1"):
        sample_sparse_graph(3, 5, 10.0, 20, seed=0)
    with pytest.raises(ValueError):
        sample_sparse_graph(3, 2, 0.1, 20, seed=0)


def test_sampler_reference_run():
    rep = sample_sparse_graph(3, 5, 0.05, 60, seed=7)
    assert rep.success and rep.verified
    assert rep.p == pytest.approx(3 * 0.05 * 6 / 60)
    assert rep.edges_after >= 0.05 * 60 ** 2
    # the deletion pass is a fixed point
    assert find_bad_sets(rep.graph, 5) == []
    again, cores, deleted = delete_bad_edges(rep.graph, 5)
    assert again == rep.graph and deleted == 0


def test_sampler_is_deterministic():
    a = sample_sparse_graph(3, 5, 0.05, 60, seed=11)
    b = sample_sparse_graph(3, 5, 0.05, 60, seed=11)
    assert emit_report(a, "json") == emit_report(b, "json")
    c = sample_sparse_graph(3, 5, 0.05, 60, seed=12)
    assert c.graph != a.graph


def test_sampler_reports_failure_when_t_is_too_small():
    rep = sample_sparse_graph(4, 5, 0.03, 8, seed=0, retries=3)
    assert not rep.success
    assert len(rep.attempts_log) == 3


def test_binomial_mean_of_sample_size():
    r, t, p = 3, 30, 0.05
    sizes = [random_uniform_graph(r, t, p, np.random.default_rng(s)).num_edges
             for s in range(100)]
    expected = p * math.comb(t, r)
    assert abs(np.mean(sizes) - expected) <= 0.05 * expected


def test_uniform_graph_edges_are_distinct_sorted_and_in_range():
    G = random_uniform_graph(4, 12, 0.3, np.random.default_rng(0))
    assert all(1 <= e[0] and e[-1] <= 12 and len(set(e)) == 4 for e in G.edges)


def test_theorem_graph_structure():
    P = make_pattern(4, 3, ["1233"])
    tg = build_theorem_graph(P, 3, 5, 0.01, 8, seed=0)
    blown = simple_blow_up(P, [8, 8, 8])
    assert tg.graph.n == 24
    assert set(blown.edges) <= set(tg.graph.edges)
    extra = set(tg.graph.edges) - set(blown.edges)
    assert all(set(e) <= set(tg.pivot_class) for e in extra)
    assert tg.value == pytest.approx(tg.blowup_value + tg.sparse_gain, abs=1e-15)
    assert tg.weighting.sum() == pytest.approx(1.0)


def test_theorem_graph_rejects_alpha_at_least_one():
    with pytest.raises(ValueError):
        build_theorem_graph(make_pattern(3, 2, ["111", "112"]), 2, 5, 0.01, 8, seed=0)


def test_theorem_graph_with_tiny_t_has_no_sparse_part():
    P = make_graph(3, 3, ["123"])
    tg = build_theorem_graph(P, 1, 5, 0.01, 1, seed=0)
    assert tg.sparse is None and tg.graph.edges == P.edges


def test_theorem_graph_sampler_failure_propagates():
    with pytest.raises(ConstructionError):
        build_theorem_graph(make_pattern(4, 3, ["1233"]), 3, 5, 0.04, 8, seed=0, retries=2)


def test_small_subgraph_bound_on_theorem_graph():
    P = make_pattern(4, 3, ["1233"])
    tg = build_theorem_graph(P, 3, 5, 0.01, 8, seed=0)
    rep = check_small_subgraph_bound(tg.graph, P, 3, 5, lambda_P=1 / 128)
    assert rep.exhaustive and rep.holds
    assert rep.subsets_checked == math.comb(24, 5)
    assert rep.max_scaled_lambda <= 3 / 16 + 1e-6


def test_small_subgraph_bound_all_sizes_and_sampling():
    P = make_pattern(4, 3, ["1233"])
    tg = build_theorem_graph(P, 3, 5, 0.01, 8, seed=0)
    full = check_small_subgraph_bound(tg.graph, P, 3, 5, lambda_P=1 / 128, all_sizes=True)
    assert full.sizes == (4, 5) and full.holds
    with pytest.raises(BudgetExceededError):
        check_small_subgraph_bound(tg.graph, P, 3, 5, lambda_P=1 / 128, budget=10)
    sampled = check_small_subgraph_bound(tg.graph, P, 3, 5, lambda_P=1 / 128, budget=10,
                                         samples=200, seed=3)
    assert not sampled.exhaustive and sampled.subsets_checked == 200


def test_single_sparse_edge_has_single_edge_lagrangian():
    G = make_graph(4, 4, ["1234"])
    rep = check_small_subgraph_bound(G, G, 1, 4, cfg=SolverConfig(restarts=10), lambda_P=4 ** -4)
    assert rep.max_scaled_lambda == pytest.approx(24 * single_edge_lagrangian("1234"))


def test_edgeless_class_has_zero_lagrangian():
    G = make_graph(3, 5, [])
    rep = check_small_subgraph_bound(G, G, 1, 5, lambda_P=0.0)
    assert rep.max_scaled_lambda == 0.0
