"""3-SAT to RQTSP on Halin graphs, with decoding and a truth-table checker.

Gadget for clause i (node ids 7i .. 7i+6)::

      l   p1   p2   p3   p4   r        outer path l-p1-p2-p3-p4-r
       \\   \\   |    |   /   /
        '------- v -------'            six spokes from v

The literal edges are mu_1 = (l, p1), mu_2 = (p2, p3), mu_3 = (p4, r): their
end points are pairwise distinct and the two spokes flanking each are not
shared.  A tour crossing the gadget from l to r through v skips exactly one
outer edge; skipping mu_m leaves the edge set ``D_m`` (outer edges except
mu_m plus the spokes at both ends of mu_m).  Within a gadget q = 1 on every
pair of edges except pairs of outer edges and pairs inside one ``D_m``, so
exactly the three literal detours are free.  The spoke mu'_m at the left end
of mu_m represents the literal; q(mu'_m, mu'_q) = 1 for complementary
literals.  Gadgets are strung along the cycle between v_x and v_y, and the
hub w is joined to v_x, v_y and every v_i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .costs import CostModel, qtsp_objective, tour_edges
from .errors import ConflictingLiterals, MalformedCnf, MalformedFormula, NonZeroCostTour, TooManyVariables
from .halin import HalinEmbedding, build_embedding, edge_key
from .instance_io import Instance

MAX_BRUTE_VARS = 24


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF over x_1..x_t; literal +v is x_v, -v its negation."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise MalformedFormula("variable count must be nonnegative")
        for i, c in enumerate(self.clauses):
            if len(c) != 3:
                raise MalformedFormula(f"clause {i + 1} has {len(c)} literals, expected 3")
            for lit in c:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
                    raise MalformedFormula(f"clause {i + 1}: literal {lit!r} out of range")

    @property
    def literals(self) -> list[int]:
        """L_1 .. L_3h in reading order (index 0 is L_1)."""
        return [lit for c in self.clauses for lit in c]

    def evaluate(self, values: Sequence[bool]) -> bool:
        return all(any(values[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(l) for l in c) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """DIMACS CNF with exactly three literals per clause."""
    header = None
    clauses = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise MalformedCnf(f"line {lineno}: bad header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise MalformedCnf(f"line {lineno}: bad header {line!r}") from None
            continue
        if header is None:
            raise MalformedCnf(f"line {lineno}: clause before the 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise MalformedCnf(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                if len(current) != 3:
                    raise MalformedCnf(f"line {lineno}: clause has {len(current)} literals, expected 3")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > header[0]:
                    raise MalformedCnf(f"line {lineno}: variable {abs(lit)} exceeds declared {header[0]}")
                current.append(lit)
    if header is None:
        raise MalformedCnf("line 1: missing 'p cnf' header")
    if current:
        raise MalformedCnf("line {}: last clause is not terminated by 0".format(len(text.splitlines())))
    if len(clauses) != header[1]:
        raise MalformedCnf(f"line 1: header declares {header[1]} clauses, found {len(clauses)}")
    if not clauses:
        raise MalformedCnf("line 1: formula has no clauses")
    return CnfFormula(header[0], tuple(clauses))


@dataclass(frozen=True)
class Assignment:
    values: tuple[bool, ...]  # values[v - 1] is x_v

    def satisfies(self, f: CnfFormula) -> bool:
        return f.evaluate(self.values)


@dataclass(frozen=True)
class LiteralEdges:
    literal: int
    mu: int        # edge id of the literal edge
    mu_prime: int  # spoke at its left end


@dataclass(eq=False)
class ReductionOutput:
    formula: CnfFormula
    instance: Instance
    threshold: int
    literal_edge_map: dict[int, LiteralEdges]      # literal index m (1-based)
    gadget_map: dict[int, tuple[int, int, int]]    # clause index i (1-based) -> (l_i, v_i, r_i)
    v_x: int
    v_y: int
    w: int

    @property
    def H(self) -> HalinEmbedding:
        return self.instance.H

    def to_sidecar(self) -> dict:
        H = self.H
        es = lambda e: "{},{}".format(*H.edges[e])  # noqa: E731
        return {
            "threshold": self.threshold,
            "num_vars": self.formula.num_vars,
            "clauses": [list(c) for c in self.formula.clauses],
            "literal_edge_map": {
                str(m): {"literal": le.literal, "mu": es(le.mu), "mu_prime": es(le.mu_prime)}
                for m, le in sorted(self.literal_edge_map.items())
            },
            "gadget_map": {str(i): {"l": g[0], "v": g[1], "r": g[2]}
                           for i, g in sorted(self.gadget_map.items())},
            "v_x": self.v_x,
            "v_y": self.v_y,
            "w": self.w,
        }

    @classmethod
    def from_sidecar(cls, instance: Instance, doc: Mapping) -> "ReductionOutput":
        H = instance.H
        f = CnfFormula(int(doc["num_vars"]), tuple(tuple(c) for c in doc["clauses"]))

        def eid(s):
            u, v = (int(x) for x in s.split(","))
            return H.edge(u, v)

        lem = {int(m): LiteralEdges(int(d["literal"]), eid(d["mu"]), eid(d["mu_prime"]))
               for m, d in doc["literal_edge_map"].items()}
        gm = {int(i): (int(d["l"]), int(d["v"]), int(d["r"])) for i, d in doc["gadget_map"].items()}
        return cls(f, instance, int(doc["threshold"]), lem, gm,
                   int(doc["v_x"]), int(doc["v_y"]), int(doc["w"]))


def sat_to_rqtsp(f: CnfFormula) -> ReductionOutput:
    """Halin graph with 0/1 quadratic costs whose QTSP optimum is 0 iff ``f``
    is satisfiable (threshold 0, all linear costs 0)."""
    if not isinstance(f, CnfFormula):
        raise MalformedFormula("expected a CnfFormula")
    h = len(f.clauses)
    if h == 0:
        raise MalformedFormula("formula has no clauses")
    vx, vy, w = 7 * h, 7 * h + 1, 7 * h + 2
    tree = [(w, vx), (w, vy)]
    cycle = [vx]
    for i in range(h):
        base = 7 * i
        v = base + 6
        tree.append((w, v))
        tree += [(v, base + s) for s in range(6)]
        cycle += [base + s for s in range(6)]
    cycle.append(vy)
    H = build_embedding(tree, cycle)
    e = H.edge

    quad: dict[tuple[int, int], int] = {}
    lits = f.literals
    lem: dict[int, LiteralEdges] = {}
    gadgets = {}
    for i in range(h):
        base = 7 * i
        v = base + 6
        path = [base + s for s in range(6)]
        spokes = [e(v, u) for u in path]
        outer = [e(path[s], path[s + 1]) for s in range(5)]
        mu_pos = (0, 2, 4)  # outer edge index of mu_1, mu_2, mu_3
        detour_sets = []
        for pos in mu_pos:
            d = set(outer) - {outer[pos]}
            d |= {spokes[pos], spokes[pos + 1]}
            detour_sets.append(d)
        edges = spokes + outer
        outer_set = set(outer)
        for a, b in itertools.combinations(edges, 2):
            if a in outer_set and b in outer_set:
                continue
            if any(a in d and b in d for d in detour_sets):
                continue
            quad[edge_key(a, b)] = 1
        for m, pos in enumerate(mu_pos):
            idx = 3 * i + m + 1
            lem[idx] = LiteralEdges(lits[idx - 1], outer[pos], spokes[pos])
        gadgets[i + 1] = (path[0], v, path[-1])

    for m, q in itertools.combinations(sorted(lem), 2):
        if lem[m].literal == -lem[q].literal:
            quad[edge_key(lem[m].mu_prime, lem[q].mu_prime)] = 1

    costs = CostModel({x: 0 for x in H.edges}, dict(sorted(quad.items())))
    return ReductionOutput(f, Instance(H, costs, 3), 0, lem, gadgets, vx, vy, w)


def decode_tour_to_assignment(out: ReductionOutput, tour: Sequence[int]) -> Assignment:
    """Read the truth assignment off a zero-cost tour: every skipped literal
    edge makes its literal true; unconstrained variables are false."""
    value = qtsp_objective(out.H, tour, out.instance.costs)
    if value.value > out.threshold:
        raise NonZeroCostTour(f"tour costs {value.external}, above the threshold {out.threshold}")
    used = set(tour_edges(out.H, tour))
    values: list[bool | None] = [None] * out.formula.num_vars
    for m in sorted(out.literal_edge_map):
        le = out.literal_edge_map[m]
        if le.mu in used:
            continue
        var, truth = abs(le.literal) - 1, le.literal > 0
        if values[var] is not None and values[var] != truth:
            raise ConflictingLiterals(f"x{var + 1} is forced both ways")
        values[var] = truth
    return Assignment(tuple(bool(v) for v in values))


def sat_brute(f: CnfFormula) -> bool:
    """Truth-table satisfiability check (t <= 24)."""
    t = f.num_vars
    if t > MAX_BRUTE_VARS:
        raise TooManyVariables(f"{t} variables exceeds the limit {MAX_BRUTE_VARS}")
    # each clause as (positive mask, negative mask) over assignment bitmasks
    masks = []
    for c in f.clauses:
        pos = neg = 0
        for lit in c:
            if lit > 0:
                pos |= 1 << (lit - 1)
            else:
                neg |= 1 << (-lit - 1)
        masks.append((pos, neg))
    full = (1 << t) - 1
    for a in range(1 << t):
        na = full & ~a
        if all(a & p or na & q for p, q in masks):
            return True
    return False


def random_cnf(num_vars: int, num_clauses: int, rng) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        clauses.append(tuple(rng.choice((1, -1)) * rng.randint(1, num_vars) for _ in range(3)))
    return CnfFormula(num_vars, tuple(clauses))
