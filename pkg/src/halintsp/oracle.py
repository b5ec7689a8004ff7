"""Brute-force ground truth for small instances."""
from __future__ import annotations

from typing import Iterator, Sequence

from .costs import CostModel, Kind, objective, tour_edges
from .errors import TooLarge
from .halin import HalinEmbedding
from .solver import Solution

DEFAULT_CAP = 20


def _adjacency(H: HalinEmbedding) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {u: [] for u in H.nodes}
    for u, v in H.edges.values():
        adj[u].append(v)
        adj[v].append(u)
    for nbrs in adj.values():
        nbrs.sort()
    return adj


def enumerate_hamilton_cycles(H: HalinEmbedding, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    """Yield every Hamilton cycle once, as a node tuple starting at the
    smallest node and continuing to its smaller tour neighbour.  Cycles come
    out in lexicographic order."""
    n = H.n
    if n > cap:
        raise TooLarge(f"n = {n} exceeds the enumeration cap {cap}")
    adj = _adjacency(H)
    start = min(adj)
    path = [start]
    on = {start}
    # explicit stack of neighbour iterators keeps the generator flat
    stack = [iter(adj[start])]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on.discard(path.pop())
            continue
        if nxt in on:
            continue
        if len(path) == n - 1:
            if start in adj[nxt] and path[1] < nxt if n > 2 else True:
                yield tuple(path) + (nxt,)
            continue
        path.append(nxt)
        on.add(nxt)
        stack.append(iter(adj[nxt]))


def brute_solve(H: HalinEmbedding, costs: CostModel, kind="TSP3", cap: int = DEFAULT_CAP) -> Solution:
    """Minimum over all Hamilton cycles; ties go to the lexicographically
    first canonical cycle."""
    kind = Kind(kind)
    best = None
    for tour in enumerate_hamilton_cycles(H, cap):
        val = objective(H, tour, costs, kind)
        if best is None or val.value < best[1].value:
            best = (tour, val)
    return Solution(list(best[0]), best[1])


def check_consecutiveness(H: HalinEmbedding, tour: Sequence[int]) -> bool:
    """True iff at every internal node the two tour edges bound a common face."""
    tour_edges(H, tour)
    tour = list(tour)
    if tour[0] == tour[-1]:
        tour.pop()
    n = len(tour)
    for i, x in enumerate(tour):
        if x in H.internal and not H.consecutive(x, tour[i - 1], tour[(i + 1) % n]):
            return False
    return True
