"""Halin graphs: embedding, validation, fans, contraction and tour expansion.

A Halin graph is stored as its outer cycle (the leaves of the tree, in cyclic
order) plus a rotation system: for every internal node the cyclic order of
its neighbours.  Rotations are oriented so that walking around an internal
node visits its branches in the same order as walking along the cycle, which
is exactly the planarity condition for ``T + C``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .errors import (
    CycleMismatch,
    Degree2Internal,
    InfeasibleSlot,
    IsWheel,
    NonPlanar,
    NotAFan,
    NotATree,
    TourMissingPseudoNode,
    ValidationError,
)
from .slots import Slot, Traversal, as_slot


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class HalinEmbedding:
    """The graph ``H = T + C`` with a fixed planar embedding.

    ``rotation`` maps each internal node to its neighbours in cyclic order;
    ``edges`` maps stable edge ids to their (current) endpoints.  Instances
    are immutable; contraction builds a new one.
    """

    cycle: tuple[int, ...]
    internal: frozenset[int]
    rotation: Mapping[int, tuple[int, ...]]
    edges: Mapping[int, tuple[int, int]]
    next_id: int
    edge_index: dict = field(init=False, repr=False)
    cycle_pos: dict = field(init=False, repr=False)
    leaf_parent: dict = field(init=False, repr=False)
    rotation_pos: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "edge_index", {uv: e for e, uv in self.edges.items()})
        object.__setattr__(self, "cycle_pos", {u: i for i, u in enumerate(self.cycle)})
        parent = {}
        for w, nbrs in self.rotation.items():
            for u in nbrs:
                if u not in self.internal:
                    parent[u] = w
        object.__setattr__(self, "leaf_parent", parent)
        object.__setattr__(self, "rotation_pos",
                           {w: {u: i for i, u in enumerate(r)} for w, r in self.rotation.items()})

    # -- basic queries -------------------------------------------------
    @property
    def nodes(self) -> list[int]:
        return sorted(self.internal | set(self.cycle))

    @property
    def n(self) -> int:
        return len(self.internal) + len(self.cycle)

    def edge(self, u: int, v: int) -> int:
        try:
            return self.edge_index[edge_key(u, v)]
        except KeyError:
            raise KeyError(f"no edge between {u} and {v}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_index

    def is_leaf(self, u: int) -> bool:
        return u in self.cycle_pos

    def cycle_next(self, u: int) -> int:
        return self.cycle[(self.cycle_pos[u] + 1) % len(self.cycle)]

    def cycle_prev(self, u: int) -> int:
        return self.cycle[self.cycle_pos[u] - 1]

    def neighbours(self, u: int) -> tuple[int, ...]:
        """Neighbours in embedding order (rotation for internal nodes;
        (previous, next, tree) for cycle nodes)."""
        if u in self.internal:
            return self.rotation[u]
        return (self.cycle_prev(u), self.cycle_next(u), self.leaf_parent[u])

    def tree_edges(self) -> list[tuple[int, int]]:
        out = []
        for w in sorted(self.internal):
            for u in self.rotation[w]:
                if u not in self.internal or u > w:
                    out.append(edge_key(w, u))
        return sorted(out)

    def cycle_edges(self) -> list[tuple[int, int]]:
        c = self.cycle
        return [edge_key(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]

    def consecutive(self, x: int, a: int, b: int) -> bool:
        """True iff edges (x, a) and (x, b) bound a common face at x."""
        if x not in self.internal:
            return a != b
        pos = self.rotation_pos[x]
        d = (pos[a] - pos[b]) % len(pos)
        return d == 1 or d == len(pos) - 1


# ----------------------------------------------------------------------
# construction and validation


def _analyse(tree_edges: Sequence[tuple[int, int]], cycle: Sequence[int],
             require_dense: bool) -> tuple[frozenset[int], dict[int, tuple[int, ...]]]:
    """Check the Halin invariants for ``tree_edges`` + ``cycle`` (taken in the
    given orientation) and return (internal nodes, rotation system)."""
    if not tree_edges or not cycle:
        raise ValidationError("tree and cycle must be nonempty")
    adj: dict[int, list[int]] = {}
    seen_edges = set()
    for u, v in tree_edges:
        if u == v:
            raise NotATree(f"self-loop at node {u}")
        key = edge_key(u, v)
        if key in seen_edges:
            raise NotATree(f"duplicate tree edge {key}")
        seen_edges.add(key)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    nodes = set(adj)
    if require_dense and nodes != set(range(len(nodes))):
        raise ValidationError("node ids must be dense in [0, n)")
    if len(seen_edges) != len(nodes) - 1:
        raise NotATree(f"{len(seen_edges)} edges on {len(nodes)} nodes")

    leaves = {u for u, nb in adj.items() if len(nb) == 1}
    internal = frozenset(u for u, nb in adj.items() if len(nb) > 1)
    bad = sorted(u for u in internal if len(adj[u]) == 2)
    if bad:
        raise Degree2Internal(f"internal node {bad[0]} has tree degree 2")
    if not internal:
        raise NotATree("tree has no internal node")

    if len(cycle) != len(set(cycle)):
        raise CycleMismatch("cycle repeats a node")
    if set(cycle) != leaves:
        extra = sorted(set(cycle) - leaves)
        missing = sorted(leaves - set(cycle))
        raise CycleMismatch(f"cycle does not match the leaf set "
                            f"(non-leaves {extra}, missing leaves {missing})")
    if len(cycle) < 3:
        raise CycleMismatch("cycle needs at least three leaves")

    pos = {u: i for i, u in enumerate(cycle)}
    root = cycle[0]
    parent = {root: -1}
    order = [root]
    stack = [root]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
                stack.append(v)
    if len(order) != len(nodes):
        raise NotATree("tree is disconnected")

    lo = {}
    hi = {}
    cnt = {}
    for u in reversed(order):
        if u in leaves and u != root:
            lo[u] = hi[u] = pos[u]
            cnt[u] = 1
        p = parent[u]
        if p >= 0 and u != root and p != root:
            if p in lo:
                lo[p] = min(lo[p], lo[u])
                hi[p] = max(hi[p], hi[u])
                cnt[p] += cnt[u]
            else:
                lo[p], hi[p], cnt[p] = lo[u], hi[u], cnt[u]
    for u in internal:
        if hi[u] - lo[u] + 1 != cnt[u]:
            raise NonPlanar(f"leaves below node {u} are not consecutive on the cycle")

    rotation = {}
    for u in internal:
        kids = sorted((v for v in adj[u] if v != parent[u]), key=lo.__getitem__)
        rotation[u] = tuple(kids) + (parent[u],)
    return internal, rotation


def _canonical_cycle(cycle: Sequence[int], flip: bool) -> tuple[int, ...]:
    i = min(range(len(cycle)), key=cycle.__getitem__)
    c = tuple(cycle[i:]) + tuple(cycle[:i])
    if flip and len(c) > 2 and c[-1] < c[1]:
        c = (c[0],) + tuple(reversed(c[1:]))
    return c


def build_embedding(tree_edges: Iterable[Sequence[int]], cycle: Sequence[int]) -> HalinEmbedding:
    """Validate ``T + C`` and return its embedding.

    The cycle is canonicalised (start at the smallest leaf, second element the
    smaller neighbour); edge ids are the positions of the sorted endpoint
    pairs, so they do not depend on input order.
    """
    tree_edges = [tuple(int(x) for x in e) for e in tree_edges]
    cycle = [int(x) for x in cycle]
    if not cycle:
        raise ValidationError("cycle must be nonempty")
    canon = _canonical_cycle(cycle, flip=True)
    internal, rotation = _analyse(tree_edges, canon, require_dense=True)
    keys = {edge_key(u, v) for u, v in tree_edges}
    keys.update(edge_key(canon[i], canon[(i + 1) % len(canon)]) for i in range(len(canon)))
    edges = {e: uv for e, uv in enumerate(sorted(keys))}
    n = len(internal) + len(canon)
    return HalinEmbedding(canon, internal, rotation, edges, n)


def validate(H: HalinEmbedding) -> None:
    """Re-check every invariant of ``H``; raises a ValidationError subclass."""
    tree = H.tree_edges()
    internal, rotation = _analyse(tree, H.cycle, require_dense=False)
    if internal != H.internal:
        raise ValidationError("internal node set is inconsistent")
    for w, rot in rotation.items():
        have = H.rotation[w]
        if len(have) != len(rot):
            raise NonPlanar(f"rotation at {w} has the wrong length")
        i = have.index(rot[0])
        if have[i:] + have[:i] != rot:
            raise NonPlanar(f"rotation at {w} disagrees with the cycle order")
    want = set(tree) | set(H.cycle_edges())
    if want != set(H.edges.values()) or len(H.edges) != len(want):
        raise ValidationError("edge index does not match T + C")


def is_wheel(H: HalinEmbedding) -> bool:
    return len(H.internal) == 1


def hub(H: HalinEmbedding) -> int:
    if not is_wheel(H):
        raise ValueError("graph is not a wheel")
    return next(iter(H.internal))


# ----------------------------------------------------------------------
# fans


@dataclass(frozen=True)
class Fan:
    """Fan centred at ``centre`` with rim ``u_1 .. u_r`` in cycle order.

    ``cutset`` is (j, k, l): j joins u_0 to u_1, k joins the centre to its
    internal neighbour x, l joins u_r to u_{r+1}.  ``context`` holds
    alpha_1..alpha_6: the cycle and tree edge at u_0, the cycle and tree edge
    at u_{r+1}, then the two edges beside k at x (j side first).
    """

    centre: int
    rim: tuple[int, ...]
    cutset: tuple[int, int, int]
    context: tuple[int, int, int, int, int, int]
    spokes: tuple[int, ...]
    rim_edges: tuple[int, ...]
    neighbour: int
    outer: tuple[int, int]

    @property
    def r(self) -> int:
        return len(self.rim)


def _fan_at(H: HalinEmbedding, w: int) -> Fan | None:
    rot = H.rotation[w]
    inner = [u for u in rot if u in H.internal]
    if len(inner) != 1:
        return None
    x = inner[0]
    p = rot.index(x)
    rim = rot[p + 1:] + rot[:p]
    u0 = H.cycle_prev(rim[0])
    ur1 = H.cycle_next(rim[-1])
    e = H.edge
    j, k, l = e(u0, rim[0]), e(w, x), e(rim[-1], ur1)
    rx = H.rotation[x]
    q = rx.index(w)
    alpha = (
        e(H.cycle_prev(u0), u0), e(u0, H.leaf_parent[u0]),
        e(ur1, H.cycle_next(ur1)), e(ur1, H.leaf_parent[ur1]),
        e(x, rx[q - 1]), e(x, rx[(q + 1) % len(rx)]),
    )
    spokes = tuple(e(w, u) for u in rim)
    rim_edges = tuple(e(rim[i], rim[i + 1]) for i in range(len(rim) - 1))
    return Fan(w, tuple(rim), (j, k, l), alpha, spokes, rim_edges, x, (u0, ur1))


def find_fans(H: HalinEmbedding) -> list[Fan]:
    """Every fan of ``H``, by ascending centre id."""
    if is_wheel(H):
        raise IsWheel("a wheel has no fans; use the wheel procedure")
    fans = []
    for w in sorted(H.internal):
        f = _fan_at(H, w)
        if f is not None:
            fans.append(f)
    return fans


# ----------------------------------------------------------------------
# contraction


@dataclass(frozen=True)
class FanPath:
    """Optimal route through a fan for one slot.

    ``nodes`` runs in the slot's forward direction (j to l, j to k or k to l)
    and ``rim_slots`` gives the slot each rim node is crossed in.
    """

    nodes: tuple[int, ...]
    rim_slots: tuple[tuple[int, Slot], ...]
    value: int


@dataclass(frozen=True)
class ContractionRecord:
    fan: Fan
    pseudo_node: int
    replaced_edges: Mapping[int, int]
    deleted_edges: tuple[int, ...]
    traversal_argmins: Mapping[Slot, FanPath] = field(default_factory=dict)

    def with_argmins(self, argmins: Mapping[Slot, FanPath]) -> "ContractionRecord":
        return replace(self, traversal_argmins=dict(argmins))


def contract_fan(H: HalinEmbedding, F: Fan) -> tuple[HalinEmbedding, ContractionRecord]:
    """Replace fan ``F`` by a fresh pseudo-node; cutset edges keep their ids.

    The cycle keeps its orientation and is rotated to start at its smallest
    node.  The result is fully re-validated.
    """
    if F.centre not in H.internal or _fan_at(H, F.centre) != F:
        raise NotAFan(f"node {F.centre} does not centre this fan in H")
    vf = H.next_id
    j, k, l = F.cutset
    u0, ur1 = F.outer
    x = F.neighbour
    deleted = F.spokes + F.rim_edges

    edges = dict(H.edges)
    for e in deleted:
        del edges[e]
    edges[j] = edge_key(u0, vf)
    edges[k] = edge_key(x, vf)
    edges[l] = edge_key(vf, ur1)

    rim = set(F.rim)
    cyc = list(H.cycle)
    start = cyc.index(F.rim[0])
    cyc = cyc[start:] + cyc[:start]
    cyc = [vf] + [u for u in cyc if u not in rim]
    cycle = _canonical_cycle(cyc, flip=False)

    rotation = {w: r for w, r in H.rotation.items() if w != F.centre}
    rotation[x] = tuple(vf if u == F.centre else u for u in rotation[x])
    H2 = HalinEmbedding(cycle, H.internal - {F.centre}, rotation, edges, vf + 1)
    validate(H2)
    record = ContractionRecord(F, vf, {j: j, k: k, l: l}, deleted)
    return H2, record


def _as_cycle(tour: Sequence[int]) -> list[int]:
    tour = list(tour)
    if len(tour) > 1 and tour[0] == tour[-1]:
        tour.pop()
    return tour


def expand_tour(record: ContractionRecord, tour: Sequence[int], slot) -> list[int]:
    """Replace the pseudo-node in ``tour`` by the stored route for ``slot``."""
    slot = as_slot(slot)
    tour = _as_cycle(tour)
    vf = record.pseudo_node
    if vf not in tour:
        raise TourMissingPseudoNode(f"pseudo-node {vf} is not on the tour")
    path = record.traversal_argmins.get(slot)
    if path is None:
        raise InfeasibleSlot(f"slot {slot} has infinite penalty")
    i = tour.index(vf)
    prev, nxt = tour[i - 1], tour[(i + 1) % len(tour)]
    F = record.fan
    port = {F.outer[0]: "j", F.neighbour: "k", F.outer[1]: "l"}
    used = (port.get(prev), port.get(nxt))
    want = slot.traversal.ports
    if used == want:
        seg = list(path.nodes)
    elif used == want[::-1]:
        seg = list(reversed(path.nodes))
    else:
        raise InfeasibleSlot(f"tour crosses the pseudo-node via {used}, slot {slot} needs {want}")
    return tour[:i] + seg + tour[i + 1:]


def fan_traversal_type(F: Fan, tour: Sequence[int]) -> Traversal:
    """Which pair of cutset edges a tour of the uncontracted graph uses."""
    tour = _as_cycle(tour)
    n = len(tour)
    pairs = {edge_key(tour[i], tour[(i + 1) % n]) for i in range(n)}
    u0, ur1 = F.outer
    uses_j = edge_key(u0, F.rim[0]) in pairs
    uses_l = edge_key(F.rim[-1], ur1) in pairs
    uses_k = edge_key(F.centre, F.neighbour) in pairs
    if uses_j and uses_l and not uses_k:
        return Traversal.CENTRE
    if uses_j and uses_k and not uses_l:
        return Traversal.LEFT
    if uses_k and uses_l and not uses_j:
        return Traversal.RIGHT
    raise ValueError("tour does not cross the fan cutset in exactly two edges")
