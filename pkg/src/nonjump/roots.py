"""Real root isolation for low-degree polynomials.

Coefficients are converted to exact rationals, the square-free part is
taken, and a Sturm sequence counts distinct roots in any subinterval. The
interval is bisected until each piece holds one root, which is then refined
by further Sturm-count bisection.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

MAX_DEGREE = 8


def _strip(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _to_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def _eval(p, x):
    # p is ascending order
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def _divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = a[-1] / lead
        q[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = _strip(a)
    return _strip(q), a


def _gcd(a, b):
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]


def sturm_sequence(p) -> list[list[Fraction]]:
    seq = [p, _deriv(p)]
    while seq[-1]:
        _, r = _divmod(seq[-2], seq[-1])
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(seq, x) -> int:
    signs = [v for v in (_eval(s, x) for s in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(seq, lo, hi) -> int:
    """Distinct roots in ``(lo, hi]`` of the sequence's leading polynomial."""
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def real_roots(coeffs: Sequence, interval: tuple, tol: float = 1e-12) -> list[float]:
    """All distinct real roots in the open interval ``(lo, hi)``.

    ``coeffs`` are given highest degree first, as in ``numpy.polyval``.
    Floats are taken at their exact binary value.
    """
    lo, hi = (_to_fraction(x) for x in interval)
    if not lo < hi:
        raise ValueError(f"empty interval {interval}")
    p = _strip([_to_fraction(c) for c in reversed(list(coeffs))])
    if not p:
        raise ValueError("the zero polynomial has no isolated roots")
    if len(p) - 1 > MAX_DEGREE:
        raise ValueError(f"degree {len(p) - 1} exceeds the supported maximum {MAX_DEGREE}")
    if len(p) == 1:
        return []
    sqfree, _ = _divmod(p, _gcd(p, _deriv(p)))
    seq = sturm_sequence(sqfree)

    def inside(a, b):
        # roots in (a, b], excluding hi itself so the interval stays open
        k = count_roots(seq, a, b)
        if b == hi and _eval(sqfree, hi) == 0:
            k -= 1
        return k

    tol = Fraction(tol)
    roots = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        k = inside(a, b)
        if k == 0:
            continue
        if k == 1:
            roots.append(_refine(sqfree, inside, a, b, tol))
            continue
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    return sorted(float(x) for x in roots)


def _refine(p, inside, a, b, tol):
    while b - a > tol:
        mid = (a + b) / 2
        if _eval(p, mid) == 0:
            return mid
        if inside(a, mid):
            b = mid
        else:
            a = mid
    return (a + b) / 2
