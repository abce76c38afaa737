"""
Frankl-Rödl certificates
========================

FR_v(P) blows the pivot v up into r copies, lets only the first copy
repeat inside an edge, and adds the edge on all r copies. When
lambda(FR_v(P)) = lambda(P) < 1/r! and some maximal weighting puts weight
on v, the density r! lambda(P) is a non-jump.
"""

import numpy as np

from nonjump import (check_nonjump_certificate, fr_construction, lagrangian_support_enum,
                     make_pattern, merged_polynomial)
from nonjump.lagrangian import reduced_hessian

P = make_pattern(4, 3, ["1233"])
F = fr_construction(P, 3)
print(F)
print("labels:", F.labels)

rep = check_nonjump_certificate(P, 3)
print(rep.verdict, "alpha =", rep.alpha, "gap =", rep.gap)

# The symmetric copies can be merged: a = w1 + w2, b = copies 2..4, c = copy 1.
f = merged_polynomial(F, [[1, 2], [4, 5, 6], [3]], names="abc")
enum = lagrangian_support_enum(f)
for p in enum.stationary_points:
    print(p.support, np.round(p.point, 6), round(p.value, 8), p.kind)

# the interior stationary point is a saddle, so the maximum is on the boundary
saddle = [p for p in enum.stationary_points if len(p.support) == 3][0]
H = reduced_hessian(f, saddle.point, saddle.support, eliminate=1)
print("Hessian in (b, c):")
print(H)
print("det =", np.linalg.det(H))

# A pattern that fails: pivot 2 of {112, 123, 223} lets FR gain weight.
Y = make_pattern(3, 3, ["112", "123", "223"])
for v in (1, 2):
    rep = check_nonjump_certificate(Y, v)
    print(f"pivot {v}: {rep.verdict}", *rep.reasons)
