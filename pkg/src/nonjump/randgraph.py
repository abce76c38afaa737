"""Locally sparse, globally dense r-graphs, and the composite graph built from them.

``sample_sparse_graph`` draws each r-set of ``[t]`` with probability
``p = 3 * c * r! / t``, finds every *bad* vertex set S (``r <= |S| <= m``
spanning at least ``|S| - r + 2`` edges) and deletes all edges of all bad
sets in one pass. What remains has no bad set, so every subgraph on at most
m vertices has at most ``v(H) - r + 1`` edges.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError
from .lagrangian import (LagrangianResult, SolverConfig, certified_lagrangian,
                         lagrangian_numeric, lagrangian_support_enum)
from .pattern import PatternError, RGraph, RPattern, make_graph, pattern_weight, simple_blow_up

DEFAULT_BUDGET = 10 ** 8
DEFAULT_RETRIES = 20


class ConstructionError(RuntimeError):
    """The sampler ran out of retries without meeting the edge target."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass
class SparseGraphReport:
    graph: RGraph
    r: int
    t: int
    m: int
    c: float
    p: float
    edges_before: int
    edges_after: int
    bad_sets_found: int
    seed: int
    attempt: int
    verified: bool
    success: bool
    target: float
    deleted_edges: int = 0
    attempts_log: list[dict] = field(default_factory=list, repr=False)


def _unrank_colex(rank: int, r: int) -> tuple[int, ...]:
    """The r-subset of ``{0, 1, ...}`` with the given colexicographic rank."""
    out = []
    for k in range(r, 0, -1):
        x = k - 1
        while math.comb(x + 1, k) <= rank:
            x += 1
        out.append(x)
        rank -= math.comb(x, k)
    return tuple(sorted(out))


def random_uniform_graph(r: int, t: int, p: float, rng: np.random.Generator) -> RGraph:
    """Each r-subset of ``1..t`` present independently with probability p."""
    total = math.comb(t, r)
    k = int(rng.binomial(total, p))
    ranks = rng.choice(total, size=k, replace=False) if k else []
    edges = [tuple(x + 1 for x in _unrank_colex(int(q), r)) for q in ranks]
    return make_graph(r, t, edges)


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.ops = 0

    def tick(self, k=1):
        self.ops += k
        if self.ops > self.budget:
            raise BudgetExceededError("bad-set enumeration exceeded its operation budget",
                                      required=f">{self.ops}", budget=self.budget)


def _edge_unions(G: RPattern, m: int, counter: _Counter):
    """Every vertex set of size <= m that is a union of edges of G."""
    incident = {v: [] for v in G.vertices}
    for e in G.edges:
        for v in e:
            incident[v].append(e)
    seen = {frozenset(e) for e in G.edges}
    stack = list(seen)
    while stack:
        S = stack.pop()
        room = m - len(S)
        if room <= 0:
            continue
        if room >= G.r:
            # a disjoint edge still fits
            cand = G.edges
        else:
            cand = {e for v in S for e in incident[v]}
        counter.tick(len(cand))
        for e in cand:
            U = S.union(e)
            if len(U) <= m and len(U) > len(S) and U not in seen:
                seen.add(U)
                stack.append(U)
    return seen


def find_bad_sets(G: RPattern, m: int, budget: int = DEFAULT_BUDGET,
                  spanned_only: bool = False) -> list[tuple[int, ...]]:
    """All vertex sets S with ``r <= |S| <= m`` and ``e(G[S]) >= |S| - r + 2``.

    A bad S splits uniquely into its spanned part (vertices lying in an
    edge of ``G[S]``), which is itself bad, and isolated vertices. Spanned
    parts are found by growing unions of edges; bad sets with isolated
    vertices are then listed by adding vertices that create no edge, as
    long as the surplus of edges allows. ``spanned_only`` skips that last
    step; the edges covered by bad sets are the same either way.
    """
    r = G.r
    if m < r:
        raise ValueError(f"locality bound m={m} must be at least r={r}")
    counter = _Counter(budget)
    edge_set = set(G.edges)

    def induced_count(S):
        counter.tick(math.comb(len(S), r))
        return sum(1 for c in itertools.combinations(sorted(S), r) if c in edge_set)

    cores = []
    for U in _edge_unions(G, m, counter):
        e = induced_count(U)
        if e >= len(U) - r + 2:
            cores.append((tuple(sorted(U)), e))

    bad = [c for c, _ in cores]
    if not spanned_only:
        incident = {v: [] for v in G.vertices}
        for e in G.edges:
            for v in e:
                incident[v].append(e)
        for core, e in cores:
            surplus = e - (len(core) - r + 2)
            room = m - len(core)
            outside = [v for v in G.vertices if v not in core]
            for size in range(1, min(surplus, room) + 1):
                for X in itertools.combinations(outside, size):
                    counter.tick()
                    S = set(core).union(X)
                    if any(set(f) <= S for x in X for f in incident[x]):
                        continue
                    bad.append(tuple(sorted(S)))
    return sorted(bad, key=lambda s: (len(s), s))


def verify_sparse_property(G: RPattern, m: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Every subgraph on ``r..m`` vertices has at most ``v(H) - r + 1`` edges.

    Induced subgraphs are the worst case, so this is ``find_bad_sets`` being
    empty.
    """
    return not find_bad_sets(G, m, budget, spanned_only=True)


def delete_bad_edges(G: RPattern, m: int, budget: int = DEFAULT_BUDGET):
    """Remove every edge of every bad induced subgraph (one pass)."""
    cores = find_bad_sets(G, m, budget, spanned_only=True)
    edge_set = set(G.edges)
    doomed = set()
    for S in cores:
        doomed.update(e for e in itertools.combinations(S, G.r) if e in edge_set)
    kept = [e for e in G.edges if e not in doomed]
    return make_graph(G.r, G.n, kept), cores, len(doomed)


def sample_sparse_graph(r: int, m: int, c: float, t: int, seed: int,
                        retries: int = DEFAULT_RETRIES,
                        budget: int = DEFAULT_BUDGET) -> SparseGraphReport:
    """Sample ``A^{(r)}_{m,c,t}``; retry on fresh streams until it has ``c t^(r-1)`` edges.

    Attempt i draws from the i-th child of ``SeedSequence(seed)``, so a
    report is reproducible from ``(r, m, c, t, seed)`` alone. If every
    attempt falls short the last report is returned with ``success=False``.
    """
    if r < 2 or t < r or m < r or not c > 0:
        raise ValueError(f"need t >= r, m >= r >= 2 and c > 0 (got r={r}, m={m}, c={c}, t={t})")
    p = 3 * c * math.factorial(r) / t
    if p > 1:
        raise ValueError(f"sampling probability p = 3*c*r!/t = {p:.4g} exceeds 1")
    target = c * t ** (r - 1)
    log = []
    report = None
    for attempt, child in enumerate(np.random.SeedSequence(seed).spawn(retries)):
        rng = np.random.default_rng(child)
        A0 = random_uniform_graph(r, t, p, rng)
        A, cores, deleted = delete_bad_edges(A0, m, budget)
        verified = verify_sparse_property(A, m, budget)
        success = verified and len(A.edges) >= target
        report = SparseGraphReport(graph=A, r=r, t=t, m=m, c=c, p=p,
                                   edges_before=len(A0.edges), edges_after=len(A.edges),
                                   bad_sets_found=len(cores), seed=seed, attempt=attempt,
                                   verified=verified, success=success, target=target,
                                   deleted_edges=deleted)
        log.append({"attempt": attempt, "edges_before": len(A0.edges),
                    "edges_after": len(A.edges), "bad_sets": len(cores), "verified": verified})
        if success:
            break
    report.attempts_log = log
    return report


@dataclass
class CompositeGraph:
    """The composite graph G: a simple blow-up of P plus a sparse graph on v's copies."""

    graph: RGraph
    pattern: RPattern
    pivot: int
    t: int
    pivot_class: list[int]
    sparse: SparseGraphReport | None
    base_weighting: np.ndarray
    weighting: np.ndarray
    base_value: float
    blowup_value: float
    value: float
    sparse_gain: float
    guaranteed_gain: float
    lambda_P: LagrangianResult

    @property
    def exceeds_base(self) -> bool:
        """Whether the constructed weighting beats ``w(P)``."""
        return self.value > self.base_value


def build_theorem_graph(P: RPattern, v: int, m: int, c: float, t: int, seed: int,
                        cfg: SolverConfig | None = None, retries: int = DEFAULT_RETRIES,
                        lambda_P: LagrangianResult | None = None) -> CompositeGraph:
    """``simple_blow_up(P, t)`` with ``A_{m,c,t}`` placed on the t copies of v.

    The weighting ``w'((u,i)) = w(u)/t`` comes from a maximal weighting w of
    P with ``w(v) > 0``. Its value splits as ``w'(G') + |A| (w(v)/t)^r``,
    and ``guaranteed_gain`` is the ``(c/t) w(v)^r`` the sparse graph is
    sized to contribute.
    """
    if not 1 <= v <= P.n:
        raise PatternError(f"pivot {v} is not a vertex")
    r = P.r
    if tuple([v] * r) in set(P.edges):
        raise PatternError(f"the edge {str(v) * r} is in P; the construction needs r!*lambda(P) < 1")
    cfg = cfg or SolverConfig()
    lam = lambda_P or certified_lagrangian(P, cfg)
    if math.factorial(r) * lam.value >= 1:
        raise PatternError("r!*lambda(P) >= 1; the construction needs it below 1")
    w = lam.witness
    if not w[v - 1] > 0:
        raise PatternError(f"the maximal weighting found gives pivot {v} zero weight")

    Gp = simple_blow_up(P, [t] * P.n)
    offset = (v - 1) * t
    pivot_class = [offset + i for i in range(1, t + 1)]
    sparse = None
    a_edges = []
    if t >= r:
        sparse = sample_sparse_graph(r, m, c, t, seed, retries=retries)
        if not sparse.success:
            raise ConstructionError(
                f"sparse graph A(r={r}, m={m}, c={c}, t={t}) missed its edge target "
                f"{sparse.target:.4g} in {retries} attempts", report=sparse)
        a_edges = [tuple(offset + x for x in e) for e in sparse.graph.edges]
    G = RGraph(r, Gp.n, tuple(sorted(set(Gp.edges) | set(a_edges))), Gp.labels)

    wp = np.repeat(w / t, t)
    blowup_value = pattern_weight(Gp, wp)
    value = pattern_weight(G, wp)
    return CompositeGraph(graph=G, pattern=P, pivot=v, t=t, pivot_class=pivot_class,
                        sparse=sparse, base_weighting=w, weighting=wp,
                        base_value=pattern_weight(P, w), blowup_value=blowup_value,
                        value=value, sparse_gain=len(a_edges) * (w[v - 1] / t) ** r,
                        guaranteed_gain=c / t * w[v - 1] ** r, lambda_P=lam)


@dataclass
class SubgraphBoundReport:
    alpha: float
    max_scaled_lambda: float
    argmax: tuple[int, ...] | None
    subsets_checked: int
    distinct_subgraphs: int
    sizes: tuple[int, ...]
    holds: bool
    tol: float
    exhaustive: bool


def _small_lambda(H: RPattern, cfg: SolverConfig) -> float:
    if not H.edges:
        return 0.0
    numeric = lagrangian_numeric(H, cfg)
    enum = lagrangian_support_enum(H, max_n=max(10, H.n),
                                   seeds=numeric.diagnostics["endpoints"], cfg=cfg)
    return max(numeric.value, enum.value)


def check_small_subgraph_bound(G: RPattern, P: RPattern, v: int, m: int,
                               cfg: SolverConfig | None = None, tol: float = 1e-6,
                               lambda_P: float | None = None, all_sizes: bool = False,
                               budget: int = 5_000_000, samples: int | None = None,
                               seed: int = 0) -> SubgraphBoundReport:
    """Largest ``r! * lambda(G[S])`` over vertex sets with ``|S| <= m``.

    The Lagrangian can only grow when vertices are added, so by default
    only sets of size exactly ``min(m, |V(G)|)`` are solved; every smaller
    set sits inside one of them. ``all_sizes=True`` solves every size
    anyway. Induced subgraphs with the same labelled edge set share one
    solve. When the subset count exceeds ``budget``, pass ``samples`` to
    check a seeded random sample instead (the report then says
    ``exhaustive=False``).
    """
    cfg = cfg or SolverConfig(restarts=40)
    r = G.r
    if lambda_P is None:
        lambda_P = certified_lagrangian(P, cfg).value
    alpha = math.factorial(r) * lambda_P
    top = min(m, G.n)
    sizes = tuple(range(r, top + 1)) if all_sizes else (top,)
    total = sum(math.comb(G.n, s) for s in sizes)
    exhaustive = True
    if total > budget:
        if samples is None:
            raise BudgetExceededError(f"{total} vertex subsets to check", required=total,
                                      budget=budget)
        exhaustive = False

    def subsets():
        if exhaustive:
            for s in sizes:
                yield from itertools.combinations(G.vertices, s)
        else:
            rng = np.random.default_rng(seed)
            for _ in range(samples):
                s = int(rng.choice(sizes))
                yield tuple(sorted(int(x) + 1 for x in rng.choice(G.n, size=s, replace=False)))

    edge_set = set(G.edges)
    cache: dict = {}
    best, arg, count = 0.0, None, 0
    for S in subsets():
        count += 1
        pos = {u: i + 1 for i, u in enumerate(S)}
        key = (len(S), tuple(tuple(pos[u] for u in e)
                             for e in itertools.combinations(S, r) if e in edge_set))
        if key not in cache:
            H = RPattern(r, len(S), key[1])
            cache[key] = math.factorial(r) * _small_lambda(H, cfg)
        val = cache[key]
        if val > best:
            best, arg = val, S
    return SubgraphBoundReport(alpha=alpha, max_scaled_lambda=best, argmax=arg,
                               subsets_checked=count, distinct_subgraphs=len(cache),
                               sizes=sizes, holds=best <= alpha + tol, tol=tol,
                               exhaustive=exhaustive)
