"""r-patterns, r-graphs, blow-ups and weights.

Vertices are the integers ``1..n``. An edge is stored as a sorted tuple of
vertices with repetition, so ``(1, 2, 2)`` is the multiset with
``m_e(1) = 1`` and ``m_e(2) = 2``. A pattern's edge tuple is kept in
lexicographic order, which makes equality and hashing deterministic.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, ...]

WEIGHT_TOL = 1e-12


class PatternError(ValueError):
    """Raised for malformed patterns, edges, blow-up specs or weightings."""


def canonical_edge(edge: Iterable[int]) -> Edge:
    return tuple(sorted(int(v) for v in edge))


def multiplicities(edge: Edge) -> dict[int, int]:
    """The multiplicity map ``v -> m_e(v)`` of an edge, sorted by vertex."""
    return dict(sorted(Counter(edge).items()))


@dataclass(frozen=True, eq=False)
class RPattern:
    """An r-uniform pattern: edges are multisets of size r over ``1..n``.

    ``labels`` optionally records where each vertex came from (for example
    ``(v, i)`` for the i-th copy of v in a blow-up). It is provenance only
    and does not take part in equality.
    """

    r: int
    n: int
    edges: tuple[Edge, ...]
    labels: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.r < 2:
            raise PatternError(f"uniformity r={self.r} must be at least 2")
        if self.n < 1:
            raise PatternError(f"vertex count n={self.n} must be at least 1")
        for e in self.edges:
            if len(e) != self.r:
                raise PatternError(f"edge multiplicity {len(e)} ≠ r={self.r} in {e}")
            if e != tuple(sorted(e)):
                raise PatternError(f"edge {e} is not in canonical order")
            if e[0] < 1 or e[-1] > self.n:
                raise PatternError(f"edge {e} has a vertex outside 1..{self.n}")
        if list(self.edges) != sorted(set(self.edges)):
            raise PatternError("edges must be distinct and sorted")
        if self.labels is not None and len(self.labels) != self.n:
            raise PatternError("labels must have one entry per vertex")

    def __eq__(self, other):
        if not isinstance(other, RPattern):
            return NotImplemented
        return (self.r, self.n, self.edges) == (other.r, other.n, other.edges)

    def __hash__(self):
        return hash((self.r, self.n, self.edges))

    def __len__(self):
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def order(self) -> int:
        return self.n

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def multiplicity_maps(self) -> list[dict[int, int]]:
        return [multiplicities(e) for e in self.edges]

    def exponent_matrix(self) -> np.ndarray:
        """Integer matrix with entry ``[j, v-1] = m_{e_j}(v)``."""
        M = np.zeros((len(self.edges), self.n), dtype=np.int64)
        for j, e in enumerate(self.edges):
            for v in e:
                M[j, v - 1] += 1
        return M

    def __str__(self):
        body = ",".join("".join(map(str, e)) if self.n < 10 else "-".join(map(str, e))
                        for e in self.edges)
        return f"RPattern(r={self.r}, n={self.n}, {{{body}}})"


class RGraph(RPattern):
    """An r-pattern in which no edge repeats a vertex."""

    def __post_init__(self):
        super().__post_init__()
        if not is_simple(self):
            raise PatternError("an r-graph cannot have repeated vertices in an edge")


def make_pattern(r: int, n: int, edges: Iterable[Iterable[int]], labels=None) -> RPattern:
    """Build a canonical pattern. Duplicate edges are collapsed.

    Edges may be given as iterables of vertices, or as strings of digits
    such as ``"1233"`` when ``n < 10``.
    """
    if r < 2:
        raise PatternError(f"uniformity r={r} must be at least 2")
    canon = set()
    for raw in edges:
        if isinstance(raw, str):
            raw = [int(ch) for ch in raw]
        e = canonical_edge(raw)
        if len(e) != r:
            raise PatternError(f"edge multiplicity {len(e)} ≠ r={r} in {tuple(raw)}")
        if e and (e[0] < 1 or e[-1] > n):
            raise PatternError(f"edge {e} has a vertex outside 1..{n}")
        canon.add(e)
    return RPattern(r, n, tuple(sorted(canon)), labels)


def make_graph(r: int, n: int, edges: Iterable[Iterable[int]], labels=None) -> RGraph:
    P = make_pattern(r, n, edges)
    return RGraph(P.r, P.n, P.edges, labels)


def as_graph(P: RPattern) -> RGraph:
    if isinstance(P, RGraph):
        return P
    return RGraph(P.r, P.n, P.edges, P.labels)


def is_simple(P: RPattern) -> bool:
    return all(len(set(e)) == len(e) for e in P.edges)


def _check_spec(P: RPattern, spec: Sequence[int]) -> tuple[int, ...]:
    spec = tuple(int(k) for k in spec)
    if len(spec) != P.n:
        raise PatternError(f"blow-up spec has length {len(spec)}, pattern has {P.n} vertices")
    if any(k < 1 for k in spec):
        raise PatternError("blow-up multiplicities must be positive integers")
    return spec


def _blowup_frame(P: RPattern, spec):
    offsets = [0, *itertools.accumulate(spec)]
    parent_labels = P.labels if P.labels is not None else tuple(P.vertices)
    labels = tuple((parent_labels[v - 1], i) for v in P.vertices for i in range(1, spec[v - 1] + 1))
    return offsets, labels


def _blown_edges(P: RPattern, spec, offsets, choose):
    for e in P.edges:
        per_vertex = []
        for v, m in multiplicities(e).items():
            base = offsets[v - 1] + 1
            per_vertex.append([tuple(base + i for i in c) for c in choose(range(spec[v - 1]), m)])
        for parts in itertools.product(*per_vertex):
            yield tuple(sorted(itertools.chain.from_iterable(parts)))


def blow_up(P: RPattern, spec: Sequence[int]) -> RPattern:
    """The blow-up ``P(k)``: vertex v becomes copies ``(v,1)..(v,k_v)``.

    A multiset on the copies is an edge iff its projection (with
    multiplicity) is an edge of P. Copies are numbered consecutively, copies
    of vertex 1 first.
    """
    spec = _check_spec(P, spec)
    offsets, labels = _blowup_frame(P, spec)
    edges = _blown_edges(P, spec, offsets, itertools.combinations_with_replacement)
    return RPattern(P.r, offsets[-1], tuple(sorted(set(edges))), labels)


def simple_blow_up(P: RPattern, spec: Sequence[int]) -> RGraph:
    """Edges of ``blow_up(P, spec)`` that repeat no vertex."""
    spec = _check_spec(P, spec)
    offsets, labels = _blowup_frame(P, spec)
    edges = _blown_edges(P, spec, offsets, itertools.combinations)
    return RGraph(P.r, offsets[-1], tuple(sorted(set(edges))), labels)


def simple_blow_up_size(P: RPattern, spec: Sequence[int]) -> int:
    """``sum_e prod_v C(k_v, m_e(v))`` without building the graph."""
    spec = _check_spec(P, spec)
    return sum(math.prod(math.comb(spec[v - 1], m) for v, m in multiplicities(e).items())
               for e in P.edges)


def induced_subpattern(P: RPattern, S: Iterable[int]) -> RPattern:
    """Edges fully supported on S, with S relabelled to ``1..|S|`` in order."""
    S = sorted(set(int(v) for v in S))
    if not S:
        raise PatternError("vertex subset must be nonempty")
    if S[0] < 1 or S[-1] > P.n:
        raise PatternError(f"subset {S} is not contained in 1..{P.n}")
    index = {v: i + 1 for i, v in enumerate(S)}
    edges = tuple(tuple(index[v] for v in e) for e in P.edges if all(v in index for v in e))
    parent_labels = P.labels if P.labels is not None else tuple(P.vertices)
    labels = tuple(parent_labels[v - 1] for v in S)
    cls = RGraph if isinstance(P, RGraph) else RPattern
    return cls(P.r, len(S), edges, labels)


def relabel(P: RPattern, perm: Sequence[int]) -> RPattern:
    """Rename vertex v to ``perm[v-1]`` (perm is a permutation of 1..n)."""
    if sorted(perm) != list(P.vertices):
        raise PatternError("perm must be a permutation of 1..n")
    return make_pattern(P.r, P.n, [[perm[v - 1] for v in e] for e in P.edges])


def union(P: RPattern, Q: RPattern) -> RPattern:
    if P.r != Q.r or P.n != Q.n:
        raise PatternError("union needs patterns with the same r and vertex set")
    cls = RGraph if isinstance(P, RGraph) and isinstance(Q, RGraph) else RPattern
    return cls(P.r, P.n, tuple(sorted(set(P.edges) | set(Q.edges))), P.labels)


def density(G: RPattern) -> Fraction:
    """``|E(G)| / C(n, r)`` as an exact rational."""
    if not is_simple(G):
        raise PatternError("density is defined for r-graphs (simple patterns) only")
    if G.n < G.r:
        raise PatternError(f"density needs at least r={G.r} vertices, got {G.n}")
    return Fraction(len(G.edges), math.comb(G.n, G.r))


def make_weighting(w, n: int | None = None) -> np.ndarray:
    """Validate a weighting: nonnegative entries summing to one."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise PatternError("a weighting is a 1-d vector")
    if n is not None and w.shape[0] != n:
        raise PatternError(f"weighting has {w.shape[0]} entries, expected {n}")
    if np.any(w < 0):
        raise PatternError("weights must be nonnegative")
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise PatternError(f"weights sum to {w.sum()!r}, not 1")
    return w


def edge_weight(e: Sequence[int], w) -> float:
    """``prod_v w(v)^{m_e(v)} / m_e(v)!``."""
    w = np.asarray(w, dtype=float)
    out = 1.0
    for v, m in multiplicities(tuple(e)).items():
        out *= w[v - 1] ** m / math.factorial(m)
    return float(out)


def pattern_weight(P: RPattern, w) -> float:
    w = np.asarray(w, dtype=float)
    return float(sum(edge_weight(e, w) for e in P.edges))
