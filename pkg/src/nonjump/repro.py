"""Built-in non-jump certificates with their published values."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

from .frankl_rodl import ALPHA3_STAR, CertificateReport, check_nonjump_certificate
from .lagrangian import SolverConfig
from .pattern import RPattern, make_pattern


@dataclass(frozen=True)
class ReproCase:
    name: str
    pattern: RPattern
    pivot: int
    expected_alpha: float
    expected_lambda: float
    tolerance: float
    source: str

    def __post_init__(self):
        implied = math.factorial(self.pattern.r) * self.expected_lambda
        if abs(implied - self.expected_alpha) > 1e-12:
            raise ValueError(f"{self.name}: expected_alpha {self.expected_alpha!r} is not "
                             f"r! * expected_lambda = {implied!r}")


def frankl_rodl_pattern(r: int, k: int) -> RPattern:
    """Every r-multiset on [k] except the k constant ones ``vv...v``."""
    edges = [e for e in itertools.combinations_with_replacement(range(1, k + 1), r)
             if len(set(e)) > 1]
    return make_pattern(r, k, edges)


def _case(name, P, pivot, alpha, tol, source):
    return ReproCase(name=name, pattern=P, pivot=pivot, expected_alpha=alpha,
                     expected_lambda=alpha / math.factorial(P.r), tolerance=tol, source=source)


def builtin_cases() -> list[ReproCase]:
    return [
        _case("thm-4.1", make_pattern(3, 4, ["122", "123", "133", "134", "144", "234"]), 2,
              ALPHA3_STAR, 1e-6, "alpha = (6/121)(5*sqrt(5) - 2), smallest 3-graph value"),
        _case("thm-4.2", make_pattern(4, 3, ["1233"]), 3, 3 / 16, 1e-6,
              "alpha = 2 * 4!/4^4 = 3/16 from the single edge 1233"),
        # pivot 1: with pivot 2 or 3, lambda(FR_v) ~ 0.0803303 exceeds lambda(P) = 0.08
        _case("yan-peng", make_pattern(3, 3, ["112", "123", "223"]), 1, 12 / 25, 1e-6,
              "Yan and Peng, alpha = 12/25"),
        _case("fpr-talbot", make_pattern(3, 3, ["112", "133", "123", "223"]), 2, 5 / 9, 1e-6,
              "Frankl, Peng, Rödl and Talbot, alpha = 5/9"),
        _case("frankl-rodl-k7", frankl_rodl_pattern(3, 7), 1, 1 - 1 / 7 ** 2, 1e-6,
              "Frankl and Rödl, alpha = 1 - 1/k^(r-1) with r = 3, k = 7"),
    ]


@dataclass
class CaseResult:
    case: str
    pivot: int
    expected_alpha: float
    measured_alpha: float
    abs_error: float
    tolerance: float
    verdict: str
    reasons: list[str]
    seconds: float
    certificate: CertificateReport = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


@dataclass
class SuiteReport:
    cases: list[CaseResult]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)


def run_case(case: ReproCase, cfg: SolverConfig | None = None) -> CaseResult:
    t0 = time.perf_counter()
    cert = check_nonjump_certificate(case.pattern, case.pivot, cfg)
    err = abs(cert.alpha - case.expected_alpha)
    reasons = list(cert.reasons)
    if err > case.tolerance:
        reasons.append(f"|measured - expected| = {err!r} exceeds {case.tolerance!r}")
    return CaseResult(case=case.name, pivot=case.pivot, expected_alpha=case.expected_alpha,
                      measured_alpha=cert.alpha, abs_error=err, tolerance=case.tolerance,
                      verdict="fail" if reasons else "pass", reasons=reasons,
                      seconds=time.perf_counter() - t0, certificate=cert)


def repro_suite(cfg: SolverConfig | None = None, cases=None) -> SuiteReport:
    t0 = time.perf_counter()
    results = [run_case(c, cfg) for c in (cases or builtin_cases())]
    return SuiteReport(cases=results, seconds=time.perf_counter() - t0)
