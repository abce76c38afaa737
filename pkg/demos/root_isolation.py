"""
Exact root counting
===================

Stationarity conditions on a face often reduce to one polynomial in one
variable. Sturm sequences over exact rationals say how many roots lie in
an interval, so "no positive root" is a certain answer.
"""

from fractions import Fraction as F

import numpy as np

from nonjump import real_roots
from nonjump.roots import count_roots, sturm_sequence

cubic = [F(3, 8), F(-11, 8), F(3, 2), 2]
quintic = [F(9, 64), F(-3, 16), F(1, 2), F(-1, 3), F(13, 36), F(-1, 27)]

print("cubic roots in (0, 100):", real_roots(cubic, (0, 100)))
print("quintic roots in (0, 10):", real_roots(quintic, (0, 10)))

# the Sturm sequence itself, lowest degree coefficient first
seq = sturm_sequence(list(reversed(quintic)))
print("sequence length:", len(seq), " roots in (0, 1]:", count_roots(seq, 0, 1))

# floating point agrees here, but gives no guarantee
print("numpy.roots:", np.roots([float(c) for c in quintic]))
