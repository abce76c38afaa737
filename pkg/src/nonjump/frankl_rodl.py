"""The Frankl-Rödl construction and the non-jump certificate it supports.

A pair ``(P, v)`` certifies that ``alpha = r! * lambda(P)`` is a non-jump
for r-graphs when ``alpha < 1``, some maximal weighting of P puts positive
weight on v, and ``lambda(FR_v(P)) = lambda(P)``. The last equality is
checked numerically, so a passing certificate is numerical evidence, not a
proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lagrangian import LagrangianResult, SolverConfig, certified_lagrangian
from .pattern import PatternError, RPattern, blow_up, canonical_edge, multiplicities

DEFAULT_TOL = 1e-7
ALPHA3_STAR = 6 / 121 * (5 * math.sqrt(5) - 2)


def _check_vertex(P: RPattern, v: int):
    if not 1 <= v <= P.n:
        raise PatternError(f"pivot {v} is not a vertex of the pattern (1..{P.n})")


def pivot_copies(P: RPattern, v: int) -> list[int]:
    """Indices of the copies ``(v,1), ..., (v,r)`` in ``fr_construction(P, v)``."""
    _check_vertex(P, v)
    return [v + i for i in range(P.r)]


def fr_construction(P: RPattern, v: int) -> RPattern:
    """``FR_v(P)``: blow v up into r copies, restrict copies 2..r, add the copy edge.

    The copies take indices ``v, v+1, ..., v+r-1`` (``(v,1)`` first); later
    vertices shift up by ``r - 1``. Kept blown-up edges use each of
    ``(v,2), ..., (v,r)`` at most once; ``(v,1)`` is unrestricted.
    """
    _check_vertex(P, v)
    spec = [1] * P.n
    spec[v - 1] = P.r
    B = blow_up(P, spec)
    copies = pivot_copies(P, v)
    restricted = set(copies[1:])
    kept = {e for e in B.edges
            if all(m <= 1 for u, m in multiplicities(e).items() if u in restricted)}
    kept.add(tuple(copies))
    return RPattern(P.r, B.n, tuple(sorted(kept)), B.labels)


def check_multiplicity_condition(P: RPattern, v: int) -> bool:
    """True iff some edge contains v at least twice."""
    _check_vertex(P, v)
    return any(e.count(v) >= 2 for e in P.edges)


def limitation_bound(r: int) -> float:
    """Smallest non-jump the Frankl-Rödl method can certify for r-graphs."""
    if r < 3:
        raise ValueError("the bound is stated for r >= 3")
    if r == 3:
        return ALPHA3_STAR
    return 2 * math.factorial(r) / r ** r


def scale_nonjump(r: int, s: int, alpha: float) -> float:
    """Carry a non-jump density for r-graphs to s-graphs.

    ``alpha`` is the density for r-graphs. Writing it as
    ``a * r!/r^r``, the result is ``a * s!/s^s``.
    """
    if r < 3:
        raise ValueError("scaling is stated for 3 <= r <= s")
    if r > s:
        raise ValueError(f"cannot scale down from r={r} to s={s}")
    if not 0 <= alpha <= 1:
        raise ValueError(f"density {alpha} is outside [0, 1]")
    normalized = alpha * r ** r / math.factorial(r)
    return normalized * math.factorial(s) / s ** s


def edge_weight_lower_bound(P: RPattern, e) -> float:
    """``w(P)`` at ``w(u) = m_e(u) / r``, a lower bound on ``lambda(P)``.

    Only the edge e itself is counted, matching
    ``r^-r * prod_u m_e(u)^m_e(u) / m_e(u)!``.
    """
    e = canonical_edge(int(ch) for ch in e) if isinstance(e, str) else canonical_edge(e)
    if e not in set(P.edges):
        raise PatternError(f"{e} is not an edge of the pattern")
    return math.prod(m ** m / math.factorial(m) for m in multiplicities(e).values()) / P.r ** P.r


@dataclass
class CertificateReport:
    pattern: RPattern
    pivot: int
    lambda_P: LagrangianResult
    lambda_FR: LagrangianResult
    pivot_weight: float
    gap: float
    multiplicity_ok: bool
    alpha: float
    tol: float
    verdict: str
    reasons: list[str] = field(default_factory=list)
    pivot_witness: str = "solver witness"
    note: str = ("a pass is numerical evidence that alpha = r! * lambda(P) is a non-jump "
                 "for r-graphs; the equality lambda(FR_v(P)) = lambda(P) is checked by "
                 "solvers, not proved")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _positive_pivot_witness(res: LagrangianResult, v: int, tol: float):
    """A maximal weighting with positive weight on v, and where it came from."""
    if res.witness[v - 1] > 0:
        return res.witness, "solver witness"
    for p in res.stationary_points:
        if p.value >= res.value - tol and p.point[v - 1] > 0 and p.kkt:
            return p.point, "alternative maximal stationary point"
    return res.witness, "no positive-weight witness found"


def check_nonjump_certificate(P: RPattern, v: int, cfg: SolverConfig | None = None,
                              tol: float = DEFAULT_TOL) -> CertificateReport:
    """Check every hypothesis of the Frankl-Rödl non-jump argument for ``(P, v)``."""
    _check_vertex(P, v)
    cfg = cfg or SolverConfig()
    FR = fr_construction(P, v)
    lam_P = certified_lagrangian(P, cfg)
    lam_FR = certified_lagrangian(FR, cfg)

    witness, source = _positive_pivot_witness(lam_P, v, tol)
    pivot_weight = float(witness[v - 1])
    alpha = math.factorial(P.r) * lam_P.value
    gap = lam_FR.value - lam_P.value
    mult = check_multiplicity_condition(P, v)

    reasons = []
    if not alpha < 1:
        reasons.append(f"r!*lambda(P) = {alpha!r} is not below 1")
    if not pivot_weight > 0:
        reasons.append(f"pivot {v} has zero weight in every maximal weighting found ({source})")
    if gap > tol:
        reasons.append(f"lambda(FR_v(P)) exceeds lambda(P) by {gap!r} > tol {tol!r}")
    elif gap < -tol:
        reasons.append(f"lambda(FR_v(P)) is below lambda(P) by {-gap!r}; "
                       "FR_v(P) contains a copy of P's weight, so a solver failed")
    if not mult:
        reasons.append(f"no edge contains pivot {v} with multiplicity at least two")
    for name, res in (("P", lam_P), ("FR_v(P)", lam_FR)):
        if not res.converged:
            reasons.append(f"solver for lambda({name}) did not converge")
        checks = res.diagnostics.get("checks", {})
        if "support_enum" in checks and abs(checks["support_enum"] - checks["numeric"]) > tol:
            reasons.append(f"solvers disagree on lambda({name}): {checks}")
    return CertificateReport(pattern=P, pivot=v, lambda_P=lam_P, lambda_FR=lam_FR,
                             pivot_weight=pivot_weight, gap=gap, multiplicity_ok=mult,
                             alpha=alpha, tol=tol, verdict="fail" if reasons else "pass",
                             reasons=reasons, pivot_witness=source)


def fr_weighting_from_pattern(P: RPattern, v: int, w) -> np.ndarray:
    """Weighting of ``FR_v(P)`` splitting ``w(v)`` evenly over the r copies.

    Used to show that when no edge repeats v, this weighting gains
    ``w(v)^r / r^r`` over ``w(P)``.
    """
    _check_vertex(P, v)
    w = np.asarray(w, dtype=float)
    out = np.concatenate([w[:v - 1], np.full(P.r, w[v - 1] / P.r), w[v:]])
    return out


def fr_embedding_weighting(P: RPattern, v: int, w) -> np.ndarray:
    """Weighting of ``FR_v(P)`` putting all of ``w(v)`` on ``(v,1)``; reproduces ``w(P)``."""
    _check_vertex(P, v)
    w = np.asarray(w, dtype=float)
    return np.concatenate([w[:v - 1], [w[v - 1]], np.zeros(P.r - 1), w[v:]])
