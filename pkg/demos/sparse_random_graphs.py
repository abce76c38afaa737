"""
Locally sparse random hypergraphs
=================================

Sample each r-set with probability p = 3 c r!/t, then delete every edge
of every small vertex set S that spans at least |S| - r + 2 edges. What
is left has no dense small pieces but still about c t^(r-1) edges.
"""

from nonjump import make_graph
from nonjump.randgraph import find_bad_sets, sample_sparse_graph, verify_sparse_property

rep = sample_sparse_graph(r=3, m=5, c=0.05, t=60, seed=7)
print(f"p = {rep.p:.4f}")
print("edges sampled:", rep.edges_before)
print("bad vertex sets:", rep.bad_sets_found)
print("edges kept:", rep.edges_after, "target:", rep.target)
print("verified:", rep.verified, " attempt:", rep.attempt)

# the same seed gives the same graph
again = sample_sparse_graph(r=3, m=5, c=0.05, t=60, seed=7)
print("replay identical:", again.graph == rep.graph)

# three edges on four vertices is one too many
G = make_graph(3, 5, ["123", "124", "134"])
print(find_bad_sets(G, 5))
print(verify_sparse_property(G, 5))

# a small t cannot meet the edge target
small = sample_sparse_graph(r=4, m=5, c=0.03, t=8, seed=0, retries=5)
print("t=8:", small.edges_after, "edges, target", small.target, "success", small.success)
