import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import patterns
from nonjump import (BudgetExceededError, SolverConfig, best_blowup_density, blow_up,
                     certified_lagrangian, lagrangian_grid_oracle, lagrangian_numeric,
                     lagrangian_support_enum, make_graph, make_pattern, simple_blow_up, verify_kkt)
from nonjump.lagrangian import classify_hessian, project_simplex
from oracles import (LAMBDA_STAR3, WITNESS_STAR3, clique_number, motzkin_straus,
                     single_edge_lagrangian)

CFG = SolverConfig(restarts=30)


@pytest.mark.parametrize("edge", ["123", "1233", "112", "1112", "11223"])
def test_single_edge_closed_form(edge):
    r = len(edge)
    P = make_pattern(r, max(map(int, edge)), [edge])
    res = lagrangian_numeric(P, CFG)
    assert res.value == pytest.approx(single_edge_lagrangian(edge), abs=1e-12)


def test_single_edge_1233_witness_is_half_on_the_doubled_vertex():
    res = lagrangian_numeric(make_pattern(4, 3, ["1233"]))
    assert res.value == pytest.approx(1 / 128, abs=1e-12)
    assert res.witness == pytest.approx([0.25, 0.25, 0.5], abs=1e-9)


def test_star3_pattern_value_and_witness(p_star3):
    res = lagrangian_numeric(p_star3)
    assert res.value == pytest.approx(LAMBDA_STAR3, abs=1e-12)
    assert res.witness == pytest.approx(WITNESS_STAR3, abs=1e-9)
    assert res.classification == "interior-stationary"
    assert res.converged and verify_kkt(p_star3, res.witness, 1e-10)


def test_empty_pattern_has_zero_lagrangian():
    res = lagrangian_numeric(make_pattern(3, 4, []), CFG)
    assert res.value == 0.0


@settings(max_examples=15)
@given(st.integers(2, 7), st.integers(0, 10 ** 6))
def test_motzkin_straus(n, seed):
    rng = np.random.default_rng(seed)
    edges = [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.5]
    if not edges:
        edges = [(1, 2)]
    G = make_graph(2, n, edges)
    t = clique_number(n, edges)
    assert lagrangian_numeric(G, CFG).value == pytest.approx(motzkin_straus(t), abs=1e-8)


@settings(max_examples=25)
@given(patterns(r=3, max_n=5, min_edges=2), st.data())
def test_monotone_under_edge_deletion(P, data):
    drop = data.draw(st.integers(0, P.num_edges - 1))
    H = make_pattern(P.r, P.n, P.edges[:drop] + P.edges[drop + 1:])
    assert lagrangian_numeric(H, CFG).value <= lagrangian_numeric(P, CFG).value + 1e-9


@settings(max_examples=15)
@given(patterns(r=3, max_n=3), st.data())
def test_blow_up_invariance(P, data):
    spec = data.draw(st.lists(st.integers(1, 2), min_size=P.n, max_size=P.n))
    lam = lagrangian_numeric(P, CFG).value
    assert lagrangian_numeric(blow_up(P, spec), CFG).value == pytest.approx(lam, abs=1e-8)
    assert lagrangian_numeric(simple_blow_up(P, spec), CFG).value <= lam + 1e-9


@settings(max_examples=15)
@given(patterns(r=3, max_n=4), st.integers(2, 12))
def test_grid_is_a_lower_bound(P, N):
    assert lagrangian_grid_oracle(P, N).value <= lagrangian_numeric(P, CFG).value + 1e-9


@settings(max_examples=15)
@given(patterns(r=3, max_n=5))
def test_support_enumeration_agrees_with_ascent(P):
    num = lagrangian_numeric(P, CFG)
    enum = lagrangian_support_enum(P, seeds=[], cfg=CFG)
    assert enum.value == pytest.approx(num.value, abs=1e-8)


def test_grid_budget_error(p_star3):
    with pytest.raises(BudgetExceededError) as exc:
        lagrangian_grid_oracle(p_star3, 200, budget=1000)
    assert exc.value.required == math.comb(203, 3)


def test_support_enum_size_limit():
    P = make_pattern(2, 12, [(1, 2)])
    with pytest.raises(BudgetExceededError):
        lagrangian_support_enum(P, max_n=10, seeds=[])


def test_deterministic_and_thread_independent(p_star3):
    a = lagrangian_numeric(p_star3, SolverConfig(restarts=20, seed=5))
    b = lagrangian_numeric(p_star3, SolverConfig(restarts=20, seed=5))
    assert a.value == b.value and np.array_equal(a.witness, b.witness)
    e1 = lagrangian_support_enum(p_star3, seeds=[], cfg=SolverConfig(threads=1))
    e4 = lagrangian_support_enum(p_star3, seeds=[], cfg=SolverConfig(threads=4))
    assert e1.value == e4.value and np.array_equal(e1.witness, e4.witness)
    assert [p.support for p in e1.stationary_points] == [p.support for p in e4.stationary_points]


def test_certified_flag(p_star3):
    res = certified_lagrangian(p_star3)
    assert res.certified
    assert set(res.diagnostics["checks"]) == {"numeric", "support_enum", "grid"}


def test_tie_break_prefers_smaller_support():
    # K2 plus an isolated vertex: every maximum sits on {1, 2}
    res = lagrangian_support_enum(make_graph(2, 3, ["12"]), seeds=[])
    assert res.support == (1, 2)


def test_classify_hessian():
    assert classify_hessian(np.diag([-1.0, -2.0])) == "local-max"
    assert classify_hessian(np.diag([1.0, 2.0])) == "local-min"
    assert classify_hessian(np.diag([-1.0, 2.0])) == "saddle"
    assert classify_hessian(np.diag([-1.0, 0.0])) == "degenerate"
    assert classify_hessian(np.zeros((0, 0))) == "vertex"


def test_project_simplex():
    x = project_simplex(np.array([0.8, 0.8, -1.0]))
    assert x == pytest.approx([0.5, 0.5, 0.0])


def test_best_blowup_density_k2():
    spec, d = best_blowup_density(make_graph(2, 2, ["12"]), 10)
    assert spec == (5, 5) and d == Fraction(25, 45)


def test_best_blowup_density_identity():
    G = make_graph(3, 4, ["123", "124", "134"])
    spec, d = best_blowup_density(G, 4)
    assert spec == (1, 1, 1, 1) and d == Fraction(3, 4)


def test_k3_blowup_densities_approach_two_ninths():
    K = make_graph(3, 3, ["123"])
    normalized, raw = [], []
    for n in (6, 12, 24, 48):
        spec, d = best_blowup_density(K, n)
        raw.append(d)
        normalized.append(d * math.comb(n, 3) * 6 / Fraction(n) ** 3)
    # |E| r!/n^r rises to r! lambda = 2/9; the plain density falls to it
    assert all(x <= Fraction(2, 9) for x in normalized)
    assert normalized == sorted(normalized)
    assert raw == sorted(raw, reverse=True) and all(d > Fraction(2, 9) for d in raw)
