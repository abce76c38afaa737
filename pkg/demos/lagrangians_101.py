"""
Lagrangians of patterns
=======================

A pattern is an r-uniform hypergraph whose edges may repeat vertices.
Its weight polynomial sums prod w(v)^m / m! over the edges, and the
Lagrangian is the maximum of that polynomial on the simplex.
"""

import itertools

import numpy as np

from nonjump import (SolverConfig, lagrangian_grid_oracle, lagrangian_numeric,
                     lagrangian_support_enum, make_graph, make_pattern, pattern_weight)

# a single edge 1233: the maximum sits at w = multiplicity / r
P = make_pattern(4, 3, ["1233"])
res = lagrangian_numeric(P)
print(P)
print("lambda =", res.value, "at", res.witness)

# evaluating the weight at any point of the simplex
print("weight at the barycenter:", pattern_weight(P, np.full(3, 1 / 3)))

# a four-vertex 3-pattern whose maximum is interior and irrational
Q = make_pattern(3, 4, ["122", "123", "133", "134", "144", "234"])
res = lagrangian_numeric(Q)
print()
print(Q)
print("lambda =", res.value, " closed form:", (5 * np.sqrt(5) - 2) / 121)
print("witness", res.witness, res.classification)

# three independent answers: multi-start ascent, face enumeration and a grid
enum = lagrangian_support_enum(Q, seeds=[])
grid = lagrangian_grid_oracle(Q, 40)
print("enumeration:", enum.value, " grid N=40:", grid.value)

# for ordinary graphs the Lagrangian only depends on the clique number
G = make_graph(2, 6, [e for e in itertools.combinations(range(1, 7), 2) if e != (1, 2)])
print()
print("K6 minus an edge has clique number 5;",
      "lambda =", lagrangian_numeric(G, SolverConfig(restarts=50)).value, "= (1 - 1/5)/2")
