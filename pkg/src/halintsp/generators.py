"""Seeded instance generators: wheels and random Halin graphs."""
from __future__ import annotations

import random
from typing import Sequence

from .costs import CostModel, enumerate_candidate_paths
from .errors import InvalidParams, TooSmall
from .halin import HalinEmbedding, build_embedding, edge_key
from .instance_io import Instance

DEFAULT_COST_RANGE = (0, 9)


def candidate_pairs(H: HalinEmbedding) -> list[tuple[int, int]]:
    """Edge pairs that can be 2- or 3-neighbours on some tour (both edges on
    a common candidate 3-path), sorted."""
    pairs = set()
    for p in enumerate_candidate_paths(H, 3):
        e, f, g = p.edges
        pairs.add(edge_key(e, f))
        pairs.add(edge_key(f, g))
        pairs.add(edge_key(e, g))
    return sorted(pairs)


def random_costs(H: HalinEmbedding, rng: random.Random, cost_range=DEFAULT_COST_RANGE,
                 q_density: float = 1.0, extra_fraction: float = 0.0) -> CostModel:
    """Linear cost on every edge; quadratic costs on a ``q_density`` share of
    the candidate pairs plus ``extra_fraction * |E|`` arbitrary pairs."""
    lo, hi = cost_range
    if lo < 0 or hi < lo:
        raise InvalidParams(f"bad cost range {cost_range}")
    linear = {e: rng.randint(lo, hi) for e in sorted(H.edges)}
    quad = {}
    for key in candidate_pairs(H):
        if q_density >= 1.0 or rng.random() < q_density:
            v = rng.randint(lo, hi)
            if v:
                quad[key] = v
    m = len(H.edges)
    for _ in range(int(extra_fraction * m)):
        e, f = rng.sample(range(m), 2)
        v = rng.randint(lo, hi)
        if v:
            quad[edge_key(e, f)] = v
    return CostModel(linear, quad)


def gen_wheel(r: int, seed=0, cost_range=DEFAULT_COST_RANGE, k: int = 3) -> Instance:
    """Hub 0 and rim 1..r; every edge and every candidate pair gets a cost."""
    if r < 3:
        raise TooSmall("a wheel needs at least 3 rim nodes")
    tree = [(0, i) for i in range(1, r + 1)]
    H = build_embedding(tree, list(range(1, r + 1)))
    return Instance(H, random_costs(H, random.Random(seed), cost_range), k)


def random_halin_graph(internal: int, max_fanout: int, rng: random.Random,
                       min_fanout: int = 2) -> HalinEmbedding:
    """Random tree shape: internal node i > 0 hangs below a uniformly chosen
    earlier internal node; each internal node gets ``min_fanout..max_fanout``
    leaves (more if needed to avoid degree 2); children are shuffled and the
    leaves are numbered 0.. in depth-first order, internal nodes after them."""
    if internal < 1 or max_fanout < 2 or min_fanout < 1 or min_fanout > max_fanout:
        raise InvalidParams("need internal >= 1 and 1 <= min_fanout <= max_fanout, max_fanout >= 2")
    parent = [None] + [rng.randrange(i) for i in range(1, internal)]
    kids: list[list] = [[] for _ in range(internal)]
    for i in range(1, internal):
        kids[parent[i]].append(("int", i))
    for i in range(internal):
        tree_deg = len(kids[i]) + (parent[i] is not None)
        nleaf = max(rng.randint(min_fanout, max_fanout), 3 - tree_deg)
        kids[i].extend([("leaf", None)] * nleaf)
        rng.shuffle(kids[i])

    n_leaves = sum(1 for ks in kids for t, _ in ks if t == "leaf")
    ident = [n_leaves + i for i in range(internal)]
    tree = []
    next_leaf = 0
    stack = [iter(kids[0])]
    owner = [0]
    while stack:
        item = next(stack[-1], None)
        if item is None:
            stack.pop()
            owner.pop()
            continue
        kind, i = item
        w = ident[owner[-1]]
        if kind == "leaf":
            tree.append((w, next_leaf))
            next_leaf += 1
        else:
            tree.append((w, ident[i]))
            stack.append(iter(kids[i]))
            owner.append(i)
    return build_embedding(tree, list(range(n_leaves)))


def gen_random_halin(internal: int, max_fanout: int = 4, seed=0, cost_range=DEFAULT_COST_RANGE,
                     q_density: float = 0.5, extra_fraction: float = 0.1, k: int = 3,
                     min_fanout: int = 2) -> Instance:
    """Random Halin graph with random integer costs (see :func:`random_costs`)."""
    rng = random.Random(seed)
    H = random_halin_graph(internal, max_fanout, rng, min_fanout)
    return Instance(H, random_costs(H, rng, cost_range, q_density, extra_fraction), k)


def gen_halin_of_size(n: int, seed=0, max_fanout: int = 4, cost_range=DEFAULT_COST_RANGE,
                      q_density: float = 0.5, k: int = 3) -> Instance:
    """Random Halin graph with about ``n`` nodes (used for timing runs).

    Average node count per internal node is 1 + (2 + max_fanout) / 2, so the
    internal count is chosen from that; the exact size is reported by
    ``Instance.n``.
    """
    if n < 4:
        raise InvalidParams("n must be at least 4")
    per = 1 + (2 + max_fanout) / 2
    internal = max(1, round(n / per))
    return gen_random_halin(internal, max_fanout, seed, cost_range, q_density, 0.0, k)


def sizes_in_range(lo: int, hi: int, count: int, seed=0, max_fanout: int = 3,
                   k: int = 3) -> list[Instance]:
    """``count`` seeded random instances with lo <= n <= hi (rejection sampling)."""
    rng = random.Random(seed)
    out = []
    attempt = 0
    while len(out) < count:
        attempt += 1
        internal = rng.randint(1, max(1, hi // 3))
        inst = gen_random_halin(internal, max_fanout, seed=seed * 100003 + attempt,
                                k=k, extra_fraction=0.1)
        if lo <= inst.n <= hi:
            out.append(inst)
    return out
