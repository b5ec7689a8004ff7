"""From a 3-CNF formula to a Halin routing instance and back.

Builds the gadget graph for a satisfiable and an unsatisfiable formula,
finds the cheapest quadratic tour by exhaustive search, and decodes the
truth assignment from a zero-cost tour.
"""
from halintsp import CnfFormula, brute_solve, decode_tour_to_assignment, sat_brute, sat_to_rqtsp

formulas = {
    "(x1 | x2 | x3) & (~x1 | ~x2 | x3)": CnfFormula(3, ((1, 2, 3), (-1, -2, 3))),
    "(x | x | x) & (~x | ~x | ~x)": CnfFormula(1, ((1, 1, 1), (-1, -1, -1))),
}
for text, f in formulas.items():
    red = sat_to_rqtsp(f)
    best = brute_solve(red.H, red.instance.costs, "QTSP")
    print(f"{text}")
    print(f"  graph: {red.H.n} nodes, hub {red.w}, gadgets {red.gadget_map}")
    print(f"  cheapest tour costs {best.value.external}; truth table says satisfiable={sat_brute(f)}")
    if best.value.value == 0:
        a = decode_tour_to_assignment(red, best.tour)
        names = ", ".join(f"x{i + 1}={v}" for i, v in enumerate(a.values))
        print(f"  decoded: {names}; satisfies the formula: {a.satisfies(f)}")
    print()
