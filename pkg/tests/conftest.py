import itertools
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from nonjump import SolverConfig, make_pattern  # noqa: E402
from oracles import STAR3_EDGES  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def p_star3():
    return make_pattern(3, 4, STAR3_EDGES)


@pytest.fixture
def q1233():
    return make_pattern(4, 3, ["1233"])


@pytest.fixture
def fast_cfg():
    return SolverConfig(restarts=30)


@st.composite
def patterns(draw, r=None, max_n=5, min_edges=1, simple=False):
    r = draw(st.integers(2, 4)) if r is None else r
    n = draw(st.integers(r if simple else (2 if min_edges > 1 else 1), max_n))
    pool = list((itertools.combinations if simple else itertools.combinations_with_replacement)(
        range(1, n + 1), r))
    if not pool:
        n = r
        pool = [tuple(range(1, r + 1))]
    edges = draw(st.lists(st.sampled_from(pool), min_size=min_edges, max_size=min(len(pool), 8),
                          unique=True))
    return make_pattern(r, n, edges)


@st.composite
def simplex_points(draw, n):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return np.random.default_rng(seed).dirichlet(np.ones(n))


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    n, title = mark.args
    detail = "; ".join(str(v) for k, v in rep.user_properties if k == "detail")
    if "[" in item.name:
        detail = f"{item.name.split('[', 1)[1].rstrip(']')}: {detail}"
    ok, _, details = _CRITERIA.get(n, (True, title, []))
    _CRITERIA[n] = (ok and rep.passed, title, details + [detail] * bool(detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, title, details = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
        for detail in details:
            terminalreporter.write_line(f"              {detail}")
