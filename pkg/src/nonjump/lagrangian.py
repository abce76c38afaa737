"""Maximizing pattern weight over the simplex.

Three independent routes to the Lagrangian:

* :func:`lagrangian_numeric` - multi-start multiplicative ascent. Each
  iterate ``w <- w * grad / <w, grad>`` stays on the simplex and never
  decreases a polynomial with nonnegative coefficients. Endpoints are
  polished by Newton's method on their face.
* :func:`lagrangian_grid_oracle` - exhaustive scan of the grid ``i/N``.
* :func:`lagrangian_support_enum` - solves the equal-partials system on
  every face and classifies each stationary point by its reduced Hessian.

All of them accept an :class:`~nonjump.pattern.RPattern` or a
:class:`~nonjump.polynomial.SimplexPolynomial`.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError
from .pattern import PatternError, RPattern, simple_blow_up_size
from .polynomial import SimplexPolynomial, as_polynomial

log = logging.getLogger(__name__)

CLASSIFICATIONS = ("interior-stationary", "boundary", "grid-lower-bound")
TIE_TOL = 1e-12
CERTIFY_TOL = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    restarts: int = 200
    max_iters: int = 100_000
    tol: float = 1e-14
    grid_n: int = 40
    seed: int = 0
    polish_every: int = 200
    grid_budget: int = 20_000_000
    support_max_n: int = 10
    threads: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.grid_n < 1:
            raise ValueError("grid resolution must be at least 1")
        if self.max_iters < 1 or self.polish_every < 1:
            raise ValueError("iteration counts must be positive")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class StationaryPoint:
    """A stationary point of f restricted to the relative interior of a face."""

    support: tuple[int, ...]
    point: np.ndarray
    value: float
    kind: str
    hessian_det: float
    reduced_hessian: np.ndarray
    kkt: bool


@dataclass
class LagrangianResult:
    value: float
    witness: np.ndarray
    residual: float
    support: tuple[int, ...]
    restarts_used: int
    classification: str
    converged: bool = True
    certified: bool = False
    stationary_points: list[StationaryPoint] = field(default_factory=list, repr=False)
    diagnostics: dict = field(default_factory=dict, repr=False)


def _support(w, thresh=0.0):
    return tuple(int(i) + 1 for i in np.flatnonzero(np.asarray(w) > thresh))


def grad(P, w) -> np.ndarray:
    """Partial derivatives of ``w(P)`` in each vertex weight."""
    return as_polynomial(P).gradient(np.asarray(w, dtype=float))


def stationarity_residual(P, w) -> float:
    """Largest gap between partial derivatives on the support of w."""
    w = np.asarray(w, dtype=float)
    g = grad(P, w)[w > 0]
    return float(g.max() - g.min()) if g.size else 0.0


def verify_kkt(P, w, tol: float = 1e-8) -> bool:
    """First-order optimality on the simplex.

    Partials agree on the support and no zero-weight vertex has a strictly
    larger partial.
    """
    w = np.asarray(w, dtype=float)
    g = grad(P, w)
    on = w > 0
    if not on.any():
        return False
    top, low = g[on].max(), g[on].min()
    if top - low > tol:
        return False
    return bool(np.all(g[~on] <= top + tol))


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    return np.maximum(v - css[rho] / (rho + 1), 0.0)


def _clean(w):
    w = np.where(w > 0, w, 0.0)
    return w / w.sum()


def reduced_hessian(poly: SimplexPolynomial, w, support, eliminate: int | None = None) -> np.ndarray:
    """Hessian of f on the face, eliminating the largest-weight variable.

    With ``j`` the eliminated index, the coordinates are ``w_i`` for
    ``i != j`` in the support and ``w_j = 1 - sum w_i``. Pass ``eliminate``
    (a 1-based vertex in the support) to choose ``j`` instead.
    """
    idx = [i - 1 for i in support]
    if len(idx) < 2:
        return np.zeros((0, 0))
    H = poly.hessian(w)[np.ix_(idx, idx)]
    if eliminate is None:
        j = int(np.argmax(np.asarray(w)[idx]))
    else:
        j = idx.index(eliminate - 1)
    Z = np.delete(np.eye(len(idx)), j, axis=1)
    Z[j, :] = -1.0
    return Z.T @ H @ Z


def classify_hessian(Hr: np.ndarray, tol: float = 1e-9) -> str:
    if Hr.size == 0:
        return "vertex"
    eig = np.linalg.eigvalsh((Hr + Hr.T) / 2)
    scale = max(1.0, float(np.abs(eig).max()))
    if np.all(eig < -tol * scale):
        return "local-max"
    if np.all(eig > tol * scale):
        return "local-min"
    if eig.min() < -tol * scale and eig.max() > tol * scale:
        return "saddle"
    return "degenerate"


def face_newton(poly: SimplexPolynomial, support, w0, max_iter: int = 100, tol: float = 1e-15,
                sub: SimplexPolynomial | None = None):
    """Solve ``grad_S f = mu * 1, sum w_S = 1`` by Newton's method.

    Returns ``(w, converged)`` with ``w`` embedded in the full vector.
    Coordinates are not constrained; a solution outside the face belongs
    to a smaller face. ``sub`` may pass in ``poly.restrict(support)`` when
    it is reused across starts.
    """
    idx = np.asarray([i - 1 for i in support])
    k = len(idx)
    if sub is None:
        sub = poly.restrict(idx)
    x = np.asarray(w0, dtype=float)[idx].copy()
    if x.sum() <= 0:
        x = np.full(k, 1.0 / k)
    x = x / x.sum()
    mu = float(x @ sub.gradient(x))
    ones = np.ones(k)
    for _ in range(max_iter):
        F = np.concatenate([sub.gradient(x) - mu, [x.sum() - 1.0]])
        if np.abs(F).max() < tol:
            break
        J = np.block([[sub.hessian(x), -ones[:, None]], [ones[None, :], np.zeros((1, 1))]])
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            break
        x = x + step[:k]
        mu = mu + step[k]
        if np.abs(step).max() < 1e-17 or np.abs(x).max() > 1e6:
            break
    res = max(np.abs(sub.gradient(x) - mu).max(), abs(x.sum() - 1.0))
    full = np.zeros(poly.nvars)
    full[idx] = x
    return full, bool(res < 1e-11)


def _polish(poly, w, value, hess_tol=1e-7):
    """Try to jump from an ascent iterate to the local maximum it approaches."""
    top = w.max()
    for rel in (1e-3, 1e-6, 1e-9, 1e-12):
        supp = _support(w, rel * top)
        x, ok = face_newton(poly, supp, w)
        # on a flat maximum Newton can slide off the face; retry on the
        # face without the coordinates that went negative
        while ok and np.any(x[[i - 1 for i in supp]] <= 0) and len(supp) > 1:
            supp = tuple(i for i in supp if x[i - 1] > 0)
            if not supp:
                break
            start = np.zeros_like(w)
            start[[i - 1 for i in supp]] = w[[i - 1 for i in supp]]
            x, ok = face_newton(poly, supp, start / start.sum())
        if not ok or not supp:
            continue
        idx = [i - 1 for i in supp]
        if np.any(x[idx] <= 0):
            continue
        x = _clean(x)
        fx = poly(x)
        if fx < value - 1e-13:
            continue
        if not verify_kkt(poly, x, tol=1e-10 * max(1.0, fx)):
            continue
        kind = classify_hessian(reduced_hessian(poly, x, supp), hess_tol)
        if kind in ("local-max", "vertex", "degenerate"):
            return x
    return None


def _ascent(poly: SimplexPolynomial, W: np.ndarray, cfg: SolverConfig):
    """Run multiplicative ascent on every row of W; returns (W, converged, iters)."""
    R = W.shape[0]
    converged = np.zeros(R, dtype=bool)
    iters = np.zeros(R, dtype=int)
    active = np.arange(R)
    done_iters = 0
    while active.size and done_iters < cfg.max_iters:
        chunk = min(cfg.polish_every, cfg.max_iters - done_iters)
        Wa = W[active]
        moved = np.full(active.size, np.inf)
        steps = 0
        for _ in range(chunk):
            G = poly.gradient_batch(Wa)
            denom = np.einsum("bi,bi->b", Wa, G)
            new = np.empty_like(Wa)
            ok = denom > 0
            new[ok] = Wa[ok] * G[ok] / denom[ok, None]
            for b in np.flatnonzero(~ok):
                # f vanishes to first order here: fall back to a gradient step
                new[b] = project_simplex(Wa[b] + 0.1 * G[b])
            new /= new.sum(axis=1, keepdims=True)
            moved = np.abs(new - Wa).max(axis=1)
            Wa = new
            steps += 1
            if np.all(moved < cfg.tol):
                break
        W[active] = Wa
        iters[active] += steps
        done_iters += steps
        values = poly.evaluate_batch(Wa)
        still = []
        for pos, row in enumerate(active):
            if moved[pos] < cfg.tol:
                converged[row] = True
                continue
            x = _polish(poly, W[row], values[pos])
            if x is not None:
                W[row] = x
                converged[row] = True
            else:
                still.append(row)
        active = np.asarray(still, dtype=int)
    return W, converged, iters


def _pick_best(values, supports, tol=TIE_TOL):
    """Index of the best candidate: value, then smaller support, then lexicographic."""
    best = None
    for i, (v, s) in enumerate(zip(values, supports)):
        if best is None:
            best = i
            continue
        bv, bs = values[best], supports[best]
        if v > bv + tol:
            best = i
        elif v >= bv - tol and (len(s), s) < (len(bs), bs):
            best = i
    return best


def _finish(poly, w, restarts, classification, converged=True, **extra):
    w = _clean(np.asarray(w, dtype=float))
    supp = _support(w)
    res = stationarity_residual(poly, w)
    if classification is None:
        classification = "interior-stationary" if len(supp) == poly.nvars else "boundary"
    return LagrangianResult(value=poly(w), witness=w, residual=res, support=supp,
                            restarts_used=restarts, classification=classification,
                            converged=converged, **extra)


def _start_points(n, cfg: SolverConfig):
    # one independent stream per restart, so batching cannot change results
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    return np.stack([np.random.default_rng(s).dirichlet(np.ones(n)) for s in seqs])


def lagrangian_numeric(P, cfg: SolverConfig | None = None) -> LagrangianResult:
    """Best weight found by multi-start ascent from Dirichlet(1,...,1) starts.

    The value is a certified lower bound on the Lagrangian. That it is the
    maximum is a multi-start heuristic; see :func:`certified_lagrangian`.
    """
    cfg = cfg or SolverConfig()
    poly = as_polynomial(P)
    n = poly.nvars
    if n < 1:
        raise PatternError("the vertex set is empty")
    if poly.is_zero:
        return _finish(poly, np.full(n, 1.0 / n), cfg.restarts, None)
    W = _start_points(n, cfg)
    W, conv, iters = _ascent(poly, W, cfg)
    values = poly.evaluate_batch(W)
    supports = [_support(w, 1e-12 * w.max()) for w in W]
    best = _pick_best(values, supports)

    # distinct endpoints, best first; useful as seeds for face enumeration
    order = np.argsort(-values, kind="stable")
    endpoints = []
    for i in order:
        if all(np.abs(W[i] - e).max() > 1e-7 for e in endpoints):
            endpoints.append(W[i].copy())
        if len(endpoints) >= 20:
            break
    diagnostics = {
        "restart_values": values,
        "restart_converged": conv,
        "iterations": iters,
        "endpoints": endpoints,
        "nonconverged": int((~conv).sum()),
    }
    if not conv[best]:
        log.warning("best restart did not converge within %d iterations", cfg.max_iters)
    return _finish(poly, W[best], cfg.restarts, None, converged=bool(conv[best]),
                   diagnostics=diagnostics)


def _compositions(N, n):
    """All nonnegative integer vectors of length n summing to N (stars and bars)."""
    for bars in itertools.combinations(range(N + n - 1), n - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(N + n - 1 - prev - 1)
        yield row


def lagrangian_grid_oracle(P, N: int, budget: int | None = None) -> LagrangianResult:
    """Maximum of the weight over all weightings with coordinates ``i/N``."""
    if N < 1:
        raise ValueError("grid resolution must be at least 1")
    poly = as_polynomial(P)
    n = poly.nvars
    budget = SolverConfig().grid_budget if budget is None else budget
    count = math.comb(N + n - 1, n - 1)
    if count > budget:
        raise BudgetExceededError(f"grid with N={N} on {n} vertices has {count} points",
                                  required=count, budget=budget)
    best_v, best_w = -1.0, None
    gen = _compositions(N, n)
    while True:
        block = list(itertools.islice(gen, 20000))
        if not block:
            break
        W = np.asarray(block, dtype=float) / N
        vals = poly.evaluate_batch(W)
        i = int(np.argmax(vals))
        if vals[i] > best_v:
            best_v, best_w = float(vals[i]), W[i]
    w = best_w
    return LagrangianResult(value=poly(w), witness=w, residual=stationarity_residual(poly, w),
                            support=_support(w), restarts_used=0,
                            classification="grid-lower-bound",
                            diagnostics={"grid_points": count, "N": N})


def _face_candidates(poly, support, seeds, seed, extra_starts):
    n = poly.nvars
    idx = [i - 1 for i in support]
    sub = poly.restrict(idx)
    if sub.is_zero:
        return [], False
    k = len(idx)
    starts = [np.full(k, 1.0 / k)]
    for s in seeds:
        s = np.asarray(s)
        if _support(s, 1e-9 * s.max()) == tuple(support):
            starts.append(s[idx])
    mask = sum(1 << i for i in idx)
    rng = np.random.default_rng([seed, mask])
    starts.extend(rng.dirichlet(np.ones(k), size=extra_starts) if k > 1 else [])

    found = []
    any_converged = False
    for x0 in starts:
        full0 = np.zeros(n)
        full0[idx] = x0
        x, ok = face_newton(poly, support, full0, sub=sub)
        if not ok:
            continue
        any_converged = True
        # points that slid onto a boundary face belong to that face
        if np.any(x[idx] <= 1e-9 * x[idx].max()):
            continue
        if any(np.abs(x - p).max() < 1e-9 for p in found):
            continue
        found.append(x)
    fallback = False
    if not any_converged and k > 1:
        # Newton failed everywhere on this face: ascend inside it instead
        fallback = True
        res = lagrangian_numeric(sub, SolverConfig(restarts=8, max_iters=20000, seed=seed))
        if np.all(res.witness > 0):
            x = np.zeros(n)
            x[idx] = res.witness
            found.append(x)
    return found, fallback


def _make_point(poly, support, x):
    Hr = reduced_hessian(poly, x, support)
    det = float(np.linalg.det(Hr)) if Hr.size else 0.0
    fx = poly(x)
    return StationaryPoint(support=tuple(support), point=x, value=fx,
                           kind=classify_hessian(Hr), hessian_det=det, reduced_hessian=Hr,
                           kkt=verify_kkt(poly, x, tol=1e-9 * max(1.0, fx)))


def lagrangian_support_enum(P, max_n: int = 10, seeds=None, cfg: SolverConfig | None = None,
                            extra_starts: int = 4) -> LagrangianResult:
    """Maximum over stationary points of f on the relative interior of each face.

    Every nonempty support is tried. Newton starts from the face barycenter,
    from any seed weighting with exactly that support, and from a few
    seeded random points of the face. When Newton fails on a face, ascent
    restricted to the face is used instead and the face is recorded in
    ``diagnostics["fallback_supports"]``.

    ``seeds=None`` runs :func:`lagrangian_numeric` first and seeds from its
    distinct endpoints; pass ``seeds=[]`` to skip it.
    """
    cfg = cfg or SolverConfig()
    poly = as_polynomial(P)
    n = poly.nvars
    if n > max_n:
        raise BudgetExceededError(f"support enumeration over {n} vertices exceeds max_n={max_n}",
                                  required=2 ** n - 1, budget=2 ** max_n - 1)
    if seeds is None:
        numeric = lagrangian_numeric(poly, cfg)
        seeds = numeric.diagnostics["endpoints"]
    seeds = [np.asarray(s, dtype=float) for s in seeds]
    supports = [tuple(s) for k in range(1, n + 1)
                for s in itertools.combinations(range(1, n + 1), k)]

    def work(s):
        return _face_candidates(poly, s, seeds, cfg.seed, extra_starts)

    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            outcomes = list(pool.map(work, supports))
    else:
        outcomes = [work(s) for s in supports]

    points, fallbacks = [], []
    for s, (found, fell_back) in zip(supports, outcomes):
        if fell_back:
            fallbacks.append(s)
        points.extend(_make_point(poly, s, x) for x in found)

    diagnostics = {"supports_tried": len(supports), "fallback_supports": fallbacks}
    if not points:
        return _finish(poly, np.full(n, 1.0 / n), 0, None, stationary_points=[],
                       diagnostics=diagnostics)
    best = _pick_best([p.value for p in points], [p.support for p in points])
    top = points[best]
    w = top.point
    return LagrangianResult(value=poly(w), witness=w, residual=stationarity_residual(poly, w),
                            support=top.support, restarts_used=0,
                            classification=("interior-stationary" if len(top.support) == n
                                            else "boundary"),
                            stationary_points=points, diagnostics=diagnostics)


def certified_lagrangian(P, cfg: SolverConfig | None = None, tol: float = CERTIFY_TOL) -> LagrangianResult:
    """Numeric ascent cross-checked by face enumeration and the grid.

    The returned result is the better of the ascent and enumeration
    answers. ``certified`` is set when numeric, grid and enumeration values
    agree within ``tol``; that is a statement about these solvers, not a
    proof of optimality. Face enumeration and the grid are skipped when
    they would exceed ``cfg.support_max_n`` or ``cfg.grid_budget``.
    """
    cfg = cfg or SolverConfig()
    poly = as_polynomial(P)
    numeric = lagrangian_numeric(poly, cfg)
    checks = {"numeric": numeric.value}
    result = numeric
    enum = None
    if poly.nvars <= cfg.support_max_n:
        enum = lagrangian_support_enum(poly, cfg.support_max_n,
                                       seeds=numeric.diagnostics.get("endpoints", []), cfg=cfg)
        checks["support_enum"] = enum.value
        if enum.value > numeric.value + TIE_TOL:
            result = enum
        result.stationary_points = enum.stationary_points
    try:
        grid = lagrangian_grid_oracle(poly, cfg.grid_n, cfg.grid_budget)
        checks["grid"] = grid.value
    except BudgetExceededError:
        grid = None
    # the grid is coarse; it only has to sit below the others up to its
    # own resolution, so it is compared with the grid gap allowed
    agree = enum is not None and abs(enum.value - numeric.value) <= tol
    if grid is not None:
        agree = agree and grid.value <= result.value + 1e-9
    result.certified = bool(agree)
    result.diagnostics = {**result.diagnostics, "checks": checks}
    return result


def best_blowup_density(G: RPattern, n: int, weighting=None,
                        cfg: SolverConfig | None = None) -> tuple[tuple[int, ...], Fraction]:
    """Simple blow-up of order n with the largest density found.

    Starts from a maximal weighting scaled by n and rounded (every class
    keeps at least one vertex), then moves single vertices between classes
    while that strictly increases the edge count.
    """
    if n < G.n:
        raise PatternError(f"order {n} is smaller than |V(G)| = {G.n}")
    if weighting is None:
        weighting = lagrangian_numeric(G, cfg or SolverConfig(restarts=50)).witness
    w = np.asarray(weighting, dtype=float)
    target = w * n
    k = np.maximum(np.floor(target).astype(int), 1)
    rem = target - np.floor(target)
    while k.sum() < n:
        i = int(np.argmax(rem))
        k[i] += 1
        rem[i] = -np.inf
    while k.sum() > n:
        cand = np.flatnonzero(k > 1)
        i = cand[np.argmin(target[cand] - k[cand])]
        k[i] -= 1

    def size(spec):
        return simple_blow_up_size(G, spec)

    current = size(k)
    while True:
        best_gain, best_move = 0, None
        for u in range(G.n):
            if k[u] <= 1:
                continue
            for v in range(G.n):
                if u == v:
                    continue
                k[u] -= 1
                k[v] += 1
                gain = size(k) - current
                k[u] += 1
                k[v] -= 1
                if gain > best_gain:
                    best_gain, best_move = gain, (u, v)
        if best_move is None:
            break
        u, v = best_move
        k[u] -= 1
        k[v] += 1
        current += best_gain
    spec = tuple(int(x) for x in k)
    return spec, Fraction(current, math.comb(n, G.r))
