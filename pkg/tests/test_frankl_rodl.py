import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import patterns, simplex_points
from nonjump import (PatternError, SolverConfig, check_multiplicity_condition,
                     check_nonjump_certificate, edge_weight_lower_bound, fr_construction,
                     lagrangian_numeric, limitation_bound, make_graph, make_pattern,
                     pattern_weight, scale_nonjump)
from nonjump.frankl_rodl import fr_embedding_weighting, fr_weighting_from_pattern, pivot_copies
from oracles import ALPHA_STAR3, STAR3_EDGES, SQRT5

CFG = SolverConfig(restarts=30, grid_budget=10 ** 6)


@given(patterns(r=3, max_n=4), st.data())
def test_fr_shape(P, data):
    v = data.draw(st.integers(1, P.n))
    F = fr_construction(P, v)
    copies = pivot_copies(P, v)
    assert F.n == P.n + P.r - 1
    # the copy edge is the only edge that is not a kept blow-up edge; when vv...v
    # is not in P it is also the only edge living on the copies alone
    on_copies = [e for e in F.edges if set(e) <= set(copies)]
    assert tuple(copies) in F.edges
    if tuple([v] * P.r) not in P.edges:
        assert on_copies == [tuple(copies)]
    assert all(type(u) is int for e in F.edges for u in e)
    # copies 2..r appear at most once per edge
    assert all(e.count(c) <= 1 for e in F.edges for c in copies[1:])
    assert F.labels[v - 1] == (v, 1)


@given(patterns(r=3, max_n=4), st.data())
def test_fr_edges_project_onto_pattern_edges(P, data):
    v = data.draw(st.integers(1, P.n))
    F = fr_construction(P, v)
    original = set(P.edges)
    proj = {tuple(sorted(F.labels[u - 1][0] if isinstance(F.labels[u - 1], tuple)
                         else F.labels[u - 1] for u in e)) for e in F.edges}
    assert proj - {tuple([v] * P.r)} <= original


def test_fr_when_pivot_is_in_no_edge():
    P = make_pattern(3, 4, ["123"])
    F = fr_construction(P, 4)
    assert F.edges == ((1, 2, 3), (4, 5, 6))


def test_fr_rejects_bad_pivot():
    with pytest.raises(PatternError):
        fr_construction(make_pattern(3, 3, ["123"]), 4)


@settings(max_examples=15)
@given(patterns(r=3, max_n=4), st.data())
def test_fr_lagrangian_is_at_least_pattern_lagrangian(P, data):
    v = data.draw(st.integers(1, P.n))
    lam = lagrangian_numeric(P, CFG)
    w = fr_embedding_weighting(P, v, lam.witness)
    F = fr_construction(P, v)
    assert pattern_weight(F, w) == pytest.approx(lam.value, abs=1e-12)
    assert lagrangian_numeric(F, CFG).value >= lam.value - 1e-9


@settings(max_examples=15)
@given(patterns(r=3, max_n=5, simple=True), st.data())
def test_no_repeated_pivot_gains_copy_edge_weight(P, data):
    v = data.draw(st.integers(1, P.n))
    lam = lagrangian_numeric(P, CFG)
    w = lam.witness
    F = fr_construction(P, v)
    gain = w[v - 1] ** P.r / P.r ** P.r
    split = fr_weighting_from_pattern(P, v, w)
    assert pattern_weight(F, split) == pytest.approx(lam.value + gain, abs=1e-12)
    assert lagrangian_numeric(F, CFG).value >= lam.value + gain - 1e-9


def test_multiplicity_condition():
    assert check_multiplicity_condition(make_pattern(3, 4, STAR3_EDGES), 2)
    assert check_multiplicity_condition(make_pattern(4, 3, ["1233"]), 3)
    assert not check_multiplicity_condition(make_pattern(3, 3, ["123"]), 1)


def test_limitation_bound():
    assert limitation_bound(3) == pytest.approx(6 / 121 * (5 * SQRT5 - 2), abs=1e-15)
    assert limitation_bound(3) == pytest.approx(0.4552, abs=5e-5)
    assert limitation_bound(4) == 0.1875
    assert limitation_bound(5) == pytest.approx(0.0768, abs=1e-15)
    with pytest.raises(ValueError):
        limitation_bound(2)


def test_scale_nonjump():
    assert scale_nonjump(3, 3, 12 / 25) == pytest.approx(12 / 25)
    assert scale_nonjump(3, 4, 12 / 25) == pytest.approx(0.2025)
    for s in (4, 5, 6):
        expected = 27 / 121 * (5 * SQRT5 - 2) * math.factorial(s) / s ** s
        assert scale_nonjump(3, s, ALPHA_STAR3) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        scale_nonjump(4, 3, 0.5)


def test_edge_weight_lower_bound():
    assert edge_weight_lower_bound(make_pattern(4, 3, ["1233"]), (1, 2, 3, 3)) == 1 / 128
    assert edge_weight_lower_bound(make_pattern(5, 5, ["12345"]), "12345") == 5 ** -5
    assert edge_weight_lower_bound(make_pattern(3, 2, ["122"]), "122") == pytest.approx(2 / 27)
    with pytest.raises(PatternError):
        edge_weight_lower_bound(make_pattern(3, 3, ["123"]), "112")


def test_certificate_single_edge_1233():
    rep = check_nonjump_certificate(make_pattern(4, 3, ["1233"]), 3)
    assert rep.passed, rep.reasons
    assert rep.alpha == pytest.approx(3 / 16, abs=1e-12)
    assert rep.lambda_P.value == pytest.approx(1 / 128, abs=1e-12)
    assert rep.alpha >= limitation_bound(4) - 1e-9
    assert "not proved" in rep.note


@pytest.mark.parametrize("r", [3, 4])
def test_certificate_fails_for_a_single_simple_edge(r):
    P = make_graph(r, r, [range(1, r + 1)])
    rep = check_nonjump_certificate(P, 1, CFG)
    assert not rep.passed
    assert not rep.multiplicity_ok
    assert rep.gap > 0
    assert any("exceeds" in reason for reason in rep.reasons)


def test_certificate_rejects_alpha_at_least_one():
    P = make_pattern(3, 2, ["111", "112"])
    rep = check_nonjump_certificate(P, 1, CFG)
    assert not rep.passed
    assert any("not below 1" in reason for reason in rep.reasons)


def test_yan_peng_pattern_needs_pivot_one():
    # with pivot 2 the FR pattern beats lambda(P) = 0.08, so only pivot 1 certifies 12/25
    P = make_pattern(3, 3, ["112", "123", "223"])
    assert check_nonjump_certificate(P, 1).passed
    rep = check_nonjump_certificate(P, 2)
    assert not rep.passed
    assert rep.lambda_FR.value == pytest.approx(0.0803303, abs=1e-6)


def test_pass_certificates_respect_limitation_bound():
    for P, v in [(make_pattern(3, 3, ["112", "133", "123", "223"]), 2),
                 (make_pattern(3, 3, ["112", "123", "223"]), 1)]:
        rep = check_nonjump_certificate(P, v)
        assert rep.passed
        assert rep.alpha >= limitation_bound(3) - 1e-9


def test_fr_of_all_multisets_on_two_vertices():
    # sanity on a hand count: P = {112, 122} with pivot 1 and r = 3
    P = make_pattern(3, 2, ["112", "122"])
    F = fr_construction(P, 1)
    # copies 1, 2, 3 of vertex 1 and vertex 2 becomes 4
    expected = set()
    for e in itertools.combinations_with_replacement(range(1, 5), 3):
        proj = tuple(sorted(1 if u <= 3 else 2 for u in e))
        if proj in {(1, 1, 2), (1, 2, 2)} and e.count(2) <= 1 and e.count(3) <= 1:
            expected.add(e)
    expected.add((1, 2, 3))
    assert set(F.edges) == expected
