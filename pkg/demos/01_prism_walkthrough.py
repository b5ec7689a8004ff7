"""A guided tour of the solver on the six-node prism.

The prism is the smallest Halin graph with two internal nodes: node 4 holds
leaves 0 and 1, node 5 holds leaves 2 and 3, and the leaf cycle is 0-1-2-3.
This script contracts one fan by hand, prints the penalty table of the new
pseudo-node, solves the resulting wheel and lifts the tour back.

Run with ``python3 demos/01_prism_walkthrough.py``.
"""
from halintsp import (CostModel, build_embedding, contract_fan, find_fans, solve, solve_stepwise,
                      tour_objective)
from halintsp.oracle import enumerate_hamilton_cycles
from halintsp.solver import INF, beta_update, init_penalties

H = build_embedding([(4, 0), (4, 1), (4, 5), (5, 2), (5, 3)], [0, 1, 2, 3])
print(f"prism: {H.n} nodes, {len(H.edges)} edges, internal nodes {sorted(H.internal)}")

# Unit edge costs plus one quadratic pair that punishes taking the two
# cycle edges 0-1 and 2-3 together.
costs = CostModel.from_node_costs(H, {uv: 1 for uv in H.edges.values()}, {((0, 1), (2, 3)): 5})

print("\nall Hamilton cycles and their 3-neighbour objective:")
for cyc in enumerate_hamilton_cycles(H):
    print(f"  {cyc}  ->  {tour_objective(H, cyc, costs, 3).external}")

fans = find_fans(H)
print(f"\nfans: {[(F.centre, F.rim) for F in fans]}")
F = fans[0]
table = beta_update(F, init_penalties(H), costs)
print(f"contracting the fan at {F.centre}; cutset edges {[H.edges[e] for e in F.cutset]}")
for slot, value in table.finite().items():
    print(f"  slot {slot}: penalty {value / 6:g}")

G, rec = contract_fan(H, F)
print(f"\nafter contraction: {G.n} nodes, pseudo-node {rec.pseudo_node}, wheel={len(G.internal) == 1}")

sol = solve(H, costs, 3)
print(f"\noptimal tour {sol.tour} with value {sol.value.external}")
assert sol.tour == solve_stepwise(H, costs, 3).tour
print("the stepwise driver returns the same tour")
