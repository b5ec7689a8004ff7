"""Linear and quadratic edge costs and the tour objectives built from them.

All objective values are integers in an internal scale six times the
external one.  The triple cost ``q(e,g) + (q(e,f)+q(f,g))/2 + (c(e)+c(f)+c(g))/3``
then stays integral, so every comparison the solver makes is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Sequence

from .errors import NotAPath, NotHamiltonian, TooSmall, UnsupportedK
from .halin import HalinEmbedding, edge_key

SCALE = 6


class Kind(str, Enum):
    TSP1 = "TSP1"
    TSP2 = "TSP2"
    TSP3 = "TSP3"
    QTSP = "QTSP"
    MTSP3 = "MTSP3"

    @classmethod
    def for_k(cls, k: int) -> "Kind":
        try:
            return {1: cls.TSP1, 2: cls.TSP2, 3: cls.TSP3}[k]
        except KeyError:
            raise UnsupportedK(f"k must be 1, 2 or 3, got {k}") from None


@dataclass(frozen=True)
class Objective:
    value: int  # internal scale
    kind: Kind

    @property
    def external(self) -> int:
        if self.value % SCALE:
            raise ValueError(f"internal value {self.value} is not a multiple of {SCALE}")
        return self.value // SCALE


@dataclass(frozen=True, eq=False)
class CostModel:
    """Costs keyed by edge id.  ``quadratic`` keys are ``(min id, max id)``;
    missing pairs cost 0.  Values are external (unscaled) integers."""

    linear: Mapping[int, int]
    quadratic: Mapping[tuple[int, int], int]

    def __post_init__(self):
        for e, c in self.linear.items():
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"linear cost of edge {e} must be a nonnegative integer")
        for (e, f), q in self.quadratic.items():
            if e >= f:
                raise ValueError(f"quadratic key {(e, f)} is not canonical")
            if not isinstance(q, int) or q < 0:
                raise ValueError(f"quadratic cost of {(e, f)} must be a nonnegative integer")

    @classmethod
    def from_node_costs(cls, H: HalinEmbedding,
                        linear: Mapping[tuple[int, int], int] | None = None,
                        quadratic: Mapping[tuple[tuple[int, int], tuple[int, int]], int] | None = None,
                        ) -> "CostModel":
        lin = {e: 0 for e in H.edges}
        for (u, v), c in (linear or {}).items():
            lin[H.edge(u, v)] = int(c)
        quad = {}
        for (a, b), q in (quadratic or {}).items():
            e, f = H.edge(*a), H.edge(*b)
            if e == f:
                raise ValueError(f"quadratic cost on a single edge {a}")
            if q:
                quad[edge_key(e, f)] = int(q)
        return cls(lin, quad)

    @classmethod
    def zero(cls, H: HalinEmbedding) -> "CostModel":
        return cls({e: 0 for e in H.edges}, {})

    def c(self, e: int) -> int:
        return self.linear.get(e, 0)

    def q(self, e: int, f: int) -> int:
        return self.quadratic.get((e, f) if e < f else (f, e), 0)

    def node_costs(self, H: HalinEmbedding):
        """Inverse of :meth:`from_node_costs` (zero entries dropped from q)."""
        lin = {H.edges[e]: c for e, c in self.linear.items()}
        quad = {}
        for (e, f), q in self.quadratic.items():
            a, b = H.edges[e], H.edges[f]
            quad[(a, b) if a < b else (b, a)] = q
        return lin, quad


def make_triple(costs: CostModel, k: int = 3, size: int = 0) -> Callable[[int, int, int], int]:
    """Return ``(e, f, g) -> 6 * q(e,f,g)`` for the TSP(k) objective.

    k = 2 drops the q(e,g) term and k = 1 additionally drops the adjacent
    pairs, leaving only the linear part.  Edge ids must be below ``size``
    or appear in ``costs``.
    """
    if k not in (1, 2, 3):
        raise UnsupportedK(f"k must be 1, 2 or 3, got {k}")
    size = max(size, 1 + max([*costs.linear, *(e for pair in costs.quadratic for e in pair), 0]))
    lin2 = [0] * size
    for e, c in costs.linear.items():
        lin2[e] = 2 * c
    # per-edge partner maps avoid building tuple keys in the hot loop
    adj3 = [None] * size
    adj6 = [None] * size
    for (e, f), q in costs.quadratic.items():
        for a, b in ((e, f), (f, e)):
            if adj3[a] is None:
                adj3[a], adj6[a] = {}, {}
            adj3[a][b] = 3 * q
            adj6[a][b] = 6 * q
    empty: dict = {}
    adj3 = [d if d is not None else empty for d in adj3]
    adj6 = [d if d is not None else empty for d in adj6]

    if k == 1:
        def triple(e, f, g):
            return lin2[e] + lin2[f] + lin2[g]
    elif k == 2:
        def triple(e, f, g):
            a = adj3[f]
            return a.get(e, 0) + a.get(g, 0) + lin2[e] + lin2[f] + lin2[g]
    else:
        def triple(e, f, g):
            a = adj3[f]
            return (adj6[e].get(g, 0) + a.get(e, 0) + a.get(g, 0)
                    + lin2[e] + lin2[f] + lin2[g])
    return triple


def _check_path(H: HalinEmbedding, edges: Sequence[int]) -> tuple[int, ...]:
    """Node sequence of the path formed by ``edges``; NotAPath otherwise."""
    try:
        ends = [H.edges[e] for e in edges]
    except KeyError as exc:
        raise NotAPath(f"unknown edge {exc.args[0]}") from None
    if len(ends) == 1:
        return ends[0]
    a, b = ends[0]
    shared = set(ends[0]) & set(ends[1])
    if len(shared) != 1:
        raise NotAPath("first two edges do not share exactly one node")
    nodes = [b if a in shared else a, shared.pop()]
    for uv in ends[1:]:
        if nodes[-1] not in uv:
            raise NotAPath("edges are not consecutive")
        nodes.append(uv[0] if uv[1] == nodes[-1] else uv[1])
    if len(set(nodes)) != len(nodes):
        raise NotAPath("path is not simple")
    return tuple(nodes)


def triple_cost(e: int, f: int, g: int, costs: CostModel,
                H: HalinEmbedding | None = None, k: int = 3) -> int:
    """Internal-scale triple cost; if ``H`` is given the triple must be a path."""
    if H is not None:
        _check_path(H, (e, f, g))
    return make_triple(costs, k, 1 + max(e, f, g))(e, f, g)


@dataclass(frozen=True)
class CandidatePath:
    edges: tuple[int, ...]
    nodes: tuple[int, ...]


def enumerate_candidate_paths(H: HalinEmbedding, k: int) -> list[CandidatePath]:
    """Simple k-edge paths whose every pair of consecutive edges is
    consecutive in the embedding, each listed once."""
    if k not in (1, 2, 3):
        raise UnsupportedK(f"k must be 1, 2 or 3, got {k}")
    def extend(path):
        x, prev = path[-1], path[-2]
        if x in H.internal:
            rot = H.rotation[x]
            i = H.rotation_pos[x][prev]
            options = (rot[i - 1], rot[(i + 1) % len(rot)])
        else:
            options = H.neighbours(x)
        for y in options:
            if y not in path and y != prev:
                yield path + (y,)

    paths = [uv for uv in H.edges.values()]
    paths = [p for uv in paths for p in (uv, uv[::-1])]
    for _ in range(k - 1):
        paths = [q for p in paths for q in extend(p)]
    out = {}
    for p in paths:
        canon = min(p, p[::-1])
        if canon not in out:
            es = tuple(H.edge(canon[i], canon[i + 1]) for i in range(k))
            out[canon] = CandidatePath(es, canon)
    return [out[key] for key in sorted(out)]


# ----------------------------------------------------------------------
# tour objectives


def tour_edges(H: HalinEmbedding, tour: Sequence[int]) -> list[int]:
    """Edge ids of a Hamilton cycle given as a node sequence (closed or open)."""
    tour = list(tour)
    if len(tour) > 1 and tour[0] == tour[-1]:
        tour.pop()
    n = H.n
    if len(tour) != n or len(set(tour)) != n or set(tour) != set(H.nodes):
        raise NotHamiltonian("tour must visit every node exactly once")
    idx = H.edge_index
    out = []
    for i in range(n):
        key = edge_key(tour[i], tour[(i + 1) % n])
        e = idx.get(key)
        if e is None:
            raise NotHamiltonian(f"{key} is not an edge")
        out.append(e)
    return out


def tour_objective(H: HalinEmbedding, tour: Sequence[int], costs: CostModel, k: int) -> Objective:
    """TSP(k) value: quadratic costs over pairs of p-neighbours, 2 <= p <= k,
    each unordered pair once, plus linear costs."""
    if k < 1:
        raise UnsupportedK("k must be positive")
    E = tour_edges(H, tour)
    n = len(E)
    total = sum(costs.c(e) for e in E)
    seen = set()
    for i in range(n):
        for d in range(1, min(k - 1, n // 2) + 1):
            j = (i + d) % n
            key = (i, j) if i < j else (j, i)
            if key not in seen:
                seen.add(key)
                total += costs.q(E[i], E[j])
    kind = {1: Kind.TSP1, 2: Kind.TSP2, 3: Kind.TSP3}.get(k, Kind.QTSP)
    return Objective(SCALE * total, kind)


def stsp3_objective(H: HalinEmbedding, tour: Sequence[int], costs: CostModel) -> Objective:
    """Sum of triple costs over the n windows of three consecutive tour edges."""
    E = tour_edges(H, tour)
    n = len(E)
    if n < 7:
        raise TooSmall("the triple form is only checked for n >= 7")
    t = make_triple(costs, 3, len(H.edges))
    return Objective(sum(t(E[i - 1], E[i], E[(i + 1) % n]) for i in range(n)), Kind.TSP3)


def qtsp_objective(H: HalinEmbedding, tour: Sequence[int], costs: CostModel) -> Objective:
    """Quadratic costs over all unordered pairs of distinct tour edges."""
    E = tour_edges(H, tour)
    on = set(E)
    total = sum(costs.c(e) for e in E)
    total += sum(q for (e, f), q in costs.quadratic.items() if e in on and f in on)
    return Objective(SCALE * total, Kind.QTSP)


def objective(H: HalinEmbedding, tour: Sequence[int], costs: CostModel, kind) -> Objective:
    kind = Kind(kind)
    if kind == Kind.QTSP:
        return qtsp_objective(H, tour, costs)
    return tour_objective(H, tour, costs, int(kind.value[-1]))
