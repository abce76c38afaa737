"""
The composite graph at desk scale
=================================

Blow P up t times into a simple graph and put a sparse random graph on
the t copies of the pivot. Small subgraphs stay below alpha, while the
whole graph gains (roughly) |A| (w(v)/t)^r of weight. At t = 8 the gain
is too small to beat lambda(P): simple blow-ups lose the weight of
repeated vertices, and a 4-graph on 8 vertices with the sparsity
property has few edges.
"""

from nonjump import make_pattern
from nonjump.randgraph import build_theorem_graph, check_small_subgraph_bound

P = make_pattern(4, 3, ["1233"])
tg = build_theorem_graph(P, v=3, m=5, c=0.02, t=8, seed=0)
print("order", tg.graph.n, "edges", tg.graph.num_edges, "sparse edges", tg.sparse.edges_after)
print("w'(blow-up)  =", tg.blowup_value)
print("w'(G)        =", tg.value)
print("lambda(P)    =", tg.base_value)
print("beats lambda(P):", tg.exceeds_base)

bound = check_small_subgraph_bound(tg.graph, P, 3, 5, lambda_P=tg.lambda_P.value)
print(f"max 4! lambda(G[S]) over |S| = 5: {bound.max_scaled_lambda} (alpha = {bound.alpha})")
print("subsets", bound.subsets_checked, "distinct subgraphs", bound.distinct_subgraphs)

# With t = 60 the blow-up alone is within a few percent of lambda(P).
big = build_theorem_graph(P, v=3, m=5, c=0.001, t=60, seed=0, lambda_P=tg.lambda_P)
print("t=60: w'(G) =", big.value, " ratio to lambda(P):", big.value / big.base_value)
