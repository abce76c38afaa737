"""Polynomials with nonnegative coefficients, evaluated on the simplex.

A pattern's weight ``w(P)`` is such a polynomial; so are the merged
coordinate forms that appear when symmetric vertices are combined. The
solvers in :mod:`nonjump.lagrangian` accept either.
"""

from __future__ import annotations

import math

import numpy as np

from .pattern import RPattern

# cap on the size of the (batch, ..., terms, vars) power arrays built at once
_CHUNK_ELEMS = 4_000_000


def _monomials(W, M):
    """``prod_i W[b, i] ** M[..., t, i]`` for every row b, broadcasting over M."""
    # a lookup table of powers is much faster than float ** int
    top = int(M.max()) if M.size else 0
    table = np.ones((W.shape[0], top + 1, W.shape[1]))
    for d in range(1, top + 1):
        table[:, d] = table[:, d - 1] * W
    cols = np.arange(W.shape[1])
    return np.prod(table[:, M, cols], axis=-1)


class SimplexPolynomial:
    """``f(w) = sum_j coeffs[j] * prod_i w_i ** exponents[j, i]``."""

    def __init__(self, exponents, coeffs, names=None):
        # an empty polynomial still needs a (0, nvars) exponent array
        M = np.asarray(exponents, dtype=np.int64)
        c = np.asarray(coeffs, dtype=float)
        if M.ndim != 2 or M.shape[0] != c.shape[0]:
            raise ValueError("exponents must be (terms, variables) matching coeffs")
        if np.any(M < 0):
            raise ValueError("exponents must be nonnegative")
        if np.any(c < 0):
            raise ValueError("coefficients must be nonnegative")
        keep = c > 0
        self.exponents = M[keep]
        self.coeffs = c[keep]
        self.nvars = M.shape[1]
        self.names = tuple(names) if names is not None else None
        self._grad_tensors = None
        self._hess_tensors = None
        self._faces = {}

    @classmethod
    def from_pattern(cls, P: RPattern) -> "SimplexPolynomial":
        M = P.exponent_matrix()
        coeffs = [1.0 / math.prod(math.factorial(int(m)) for m in row) for row in M]
        return cls(M, coeffs)

    @classmethod
    def from_terms(cls, nvars: int, terms, names=None) -> "SimplexPolynomial":
        """Build from ``[(coeff, {var_index: exponent}), ...]``."""
        M = np.zeros((len(terms), nvars), dtype=np.int64)
        c = np.zeros(len(terms))
        for j, (coef, powers) in enumerate(terms):
            c[j] = coef
            for i, p in powers.items():
                M[j, i] += p
        return cls(M, c, names)

    def __repr__(self):
        return f"SimplexPolynomial(nvars={self.nvars}, terms={len(self.coeffs)})"

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def degrees(self) -> np.ndarray:
        return self.exponents.sum(axis=1)

    def is_homogeneous(self) -> bool:
        return self.is_zero or bool(np.all(self.degrees == self.degrees[0]))

    def _chunks(self, W, per_row):
        step = max(1, _CHUNK_ELEMS // max(per_row, 1))
        for s in range(0, W.shape[0], step):
            yield W[s:s + step]

    def __call__(self, w) -> float:
        return float(self.evaluate_batch(np.asarray(w, dtype=float)[None, :])[0])

    def evaluate_batch(self, W: np.ndarray) -> np.ndarray:
        """Values at each row of ``W`` (shape ``(batch, nvars)``)."""
        W = np.asarray(W, dtype=float)
        if self.is_zero:
            return np.zeros(W.shape[0])
        return np.concatenate([_monomials(Wc, self.exponents) @ self.coeffs
                               for Wc in self._chunks(W, self.exponents.size)])

    def _build_grad(self):
        # exponent of term t in d/dw_i, with the multiplier m_t(i) * c_t
        M = self.exponents
        n = self.nvars
        E = np.repeat(M[None, :, :], n, axis=0)
        F = M.T * self.coeffs[None, :]
        for i in range(n):
            E[i, :, i] = np.maximum(M[:, i] - 1, 0)
        self._grad_tensors = (E, F)

    def _build_hess(self):
        M = self.exponents
        n = self.nvars
        E = np.repeat(np.repeat(M[None, None, :, :], n, axis=0), n, axis=1)
        F = np.empty((n, n, M.shape[0]))
        for i in range(n):
            for j in range(n):
                if i == j:
                    F[i, j] = M[:, i] * (M[:, i] - 1)
                    E[i, j, :, i] = np.maximum(M[:, i] - 2, 0)
                else:
                    F[i, j] = M[:, i] * M[:, j]
                    E[i, j, :, i] = np.maximum(M[:, i] - 1, 0)
                    E[i, j, :, j] = np.maximum(M[:, j] - 1, 0)
        self._hess_tensors = (E, F * self.coeffs)

    def gradient(self, w) -> np.ndarray:
        return self.gradient_batch(np.asarray(w, dtype=float)[None, :])[0]

    def gradient_batch(self, W: np.ndarray) -> np.ndarray:
        W = np.asarray(W, dtype=float)
        if self.is_zero:
            return np.zeros_like(W)
        if self._grad_tensors is None:
            self._build_grad()
        E, F = self._grad_tensors
        return np.concatenate([np.einsum("bit,it->bi", _monomials(Wc, E), F)
                               for Wc in self._chunks(W, E.size)])

    def hessian(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if self.is_zero:
            return np.zeros((self.nvars, self.nvars))
        if self._hess_tensors is None:
            self._build_hess()
        E, F = self._hess_tensors
        return np.einsum("ijt,ijt->ij", _monomials(w[None, :], E)[0], F)

    def restrict(self, support) -> "SimplexPolynomial":
        """The polynomial on the face where only ``support`` variables are nonzero.

        Results are cached per support, so repeated restriction is cheap.
        """
        key = tuple(sorted(int(i) for i in support))
        if key not in self._faces:
            self._faces[key] = self._restrict(key)
        return self._faces[key]

    def _restrict(self, support) -> "SimplexPolynomial":
        support = np.asarray(support, dtype=int)
        mask = np.ones(self.nvars, dtype=bool)
        mask[support] = False
        rows = ~np.any(self.exponents[:, mask] > 0, axis=1)
        M = self.exponents[rows][:, support]
        names = None if self.names is None else [self.names[i] for i in support]
        return SimplexPolynomial(M, self.coeffs[rows], names)


def as_polynomial(obj) -> SimplexPolynomial:
    if isinstance(obj, SimplexPolynomial):
        return obj
    if isinstance(obj, RPattern):
        return SimplexPolynomial.from_pattern(obj)
    raise TypeError(f"expected an RPattern or SimplexPolynomial, got {type(obj).__name__}")


def merged_polynomial(P: RPattern, groups, names=None) -> SimplexPolynomial:
    """Weight of P when the vertices in each group share their group's total equally.

    ``groups`` is a list of vertex lists covering ``1..n``; variable g of
    the result is the total weight of group g, each member getting
    ``x_g / |group g|``.
    """
    owner = {}
    for g, members in enumerate(groups):
        for v in members:
            if v in owner:
                raise ValueError(f"vertex {v} appears in two groups")
            owner[v] = g
    if sorted(owner) != list(P.vertices):
        raise ValueError("groups must partition the vertex set")
    size = [len(members) for members in groups]
    base = SimplexPolynomial.from_pattern(P)
    M = np.zeros((len(base.coeffs), len(groups)), dtype=np.int64)
    c = base.coeffs.copy()
    for j, row in enumerate(base.exponents):
        for v0, m in enumerate(row):
            if m:
                g = owner[v0 + 1]
                M[j, g] += m
                c[j] /= size[g] ** m
    # identical monomials from different edges are summed
    uniq, inverse = np.unique(M, axis=0, return_inverse=True)
    return SimplexPolynomial(uniq, np.bincount(inverse.ravel(), weights=c, minlength=len(uniq)),
                             names)
