import json
import math

import pytest

from nonjump import SolverConfig
from nonjump.cli import main
from nonjump.repro import builtin_cases, frankl_rodl_pattern, repro_suite


def test_builtin_cases():
    cases = {c.name: c for c in builtin_cases()}
    assert set(cases) == {"thm-4.1", "thm-4.2", "yan-peng", "fpr-talbot", "frankl-rodl-k7"}
    for c in cases.values():
        assert abs(math.factorial(c.pattern.r) * c.expected_lambda - c.expected_alpha) <= 1e-12
    assert cases["thm-4.2"].expected_alpha == 3 / 16
    assert cases["frankl-rodl-k7"].expected_alpha == pytest.approx(48 / 49, abs=1e-15)


def test_frankl_rodl_pattern_counts():
    # all 3-multisets on [7] except the 7 constant ones
    assert frankl_rodl_pattern(3, 7).num_edges == math.comb(9, 3) - 7


def test_suite_is_deterministic_on_small_cases():
    small = [c for c in builtin_cases() if c.pattern.n <= 3]
    a = repro_suite(SolverConfig(seed=3), small)
    b = repro_suite(SolverConfig(seed=3), small)
    assert a.passed
    assert [c.measured_alpha for c in a.cases] == [c.measured_alpha for c in b.cases]


@pytest.mark.slow
def test_cli_repro_end_to_end(capsys):
    code = main(["repro", "--json"])
    data = json.loads(capsys.readouterr().out)["result"]
    assert code == 0 and data["passed"]
    for row in data["cases"]:
        assert row["verdict"] == "pass"
        assert row["abs_diff"] <= row["tolerance"]
