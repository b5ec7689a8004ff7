"""Exact TSP(k), k <= 3, on Halin graphs by repeated fan contraction.

Costs are charged per tour edge: every edge pays the triple cost of the
window (previous edge, edge, next edge).  When a fan is contracted its
pseudo-node stores, for every slot (see :mod:`halintsp.slots`), the cheapest
route through the fan counting exactly the windows centred on edges inside
the fan.  Windows centred on the three cutset edges stay outside; they only
need to know which edge sits just inside each port, and that is what the
inner structure of a slot pins down.  Consequently the penalty of a
pseudo-node never depends on edges outside its fan, and neighbouring
pseudo-nodes interact only through the cost of the cycle edge between them.
"""
from __future__ import annotations

import gc
import heapq
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .costs import SCALE, CostModel, Kind, Objective, make_triple, tour_edges, tour_objective
from .errors import InfeasibleTables, InvalidK
from .halin import Fan, FanPath, HalinEmbedding, hub, is_wheel
from .slots import LEFT_BASE, N_SLOTS, RIGHT_BASE, SLOTS, Slot, as_slot

INF = 1 << 62

# plain cycle node: CENTRE with both cycle edges, LEFT with (left, tree),
# RIGHT with (tree, right); the edge inside a port is then forced
PLAIN_BETA = (0, INF, INF, INF, INF, 0, INF, 0)


@dataclass(frozen=True)
class Ports:
    """Original edges adjacent to the boundary of a cycle node.

    ``left[b]`` is the tour edge just inside the left cycle port when the
    inner bit there is ``b`` (0: cycle edge, 1: tree edge); ``right``
    likewise.  ``k_left``/``k_right`` are the edges just inside the tree port
    for LEFT and RIGHT crossings.
    """

    left: tuple[int, int]
    right: tuple[int, int]
    k_left: int
    k_right: int


@dataclass(eq=False)
class PenaltyTable:
    """Penalties of one cycle node of the current (contracted) graph.

    ``boundary`` = (j, k, l): its left cycle edge, tree edge and right cycle
    edge in the current graph.  ``trace`` is None for original cycle nodes.
    """

    beta: list[int]
    ports: Ports
    boundary: tuple[int, int, int]
    trace: "FanTrace | None" = None

    def __getitem__(self, slot) -> int:
        return self.beta[as_slot(slot).index]

    @property
    def is_pseudo(self) -> bool:
        return self.trace is not None

    def finite(self) -> dict[Slot, int]:
        return {SLOTS[i]: v for i, v in enumerate(self.beta) if v < INF}


def plain_table(H: HalinEmbedding, u: int) -> PenaltyTable:
    jl = H.edge(H.cycle_prev(u), u)
    jr = H.edge(u, H.cycle_next(u))
    t = H.edge(u, H.leaf_parent[u])
    return PenaltyTable(list(PLAIN_BETA), Ports((jr, t), (jl, t), jl, jr), (jl, t, jr))


def _edge_bound(costs: CostModel, H: HalinEmbedding | None = None) -> int:
    bound = 1 + max(costs.linear, default=-1)
    if H is not None:
        bound = max(bound, 1 + max(H.edges))
    return bound


def init_penalties(H: HalinEmbedding) -> dict[int, PenaltyTable]:
    """Tables for every cycle node of an uncontracted graph."""
    return {u: plain_table(H, u) for u in H.cycle}


# ----------------------------------------------------------------------
# chains over consecutive rim nodes


def _ytrips(tabs, triple):
    """ytrip[i][b][c]: window centred on the cycle edge u_i -> u_{i+1}."""
    out = []
    for i in range(len(tabs) - 1):
        right = tabs[i].ports.right
        left = tabs[i + 1].ports.left
        y = tabs[i].boundary[2]
        out.append(((triple(right[0], y, left[0]), triple(right[0], y, left[1])),
                    (triple(right[1], y, left[0]), triple(right[1], y, left[1]))))
    return out


def _best2(x0, y0, x1, y1):
    """min(x0 + y0, x1 + y1) with INF saturation; returns (value, 0|1)."""
    v0 = x0 + y0 if x0 < INF and y0 < INF else INF
    v1 = x1 + y1 if x1 < INF and y1 < INF else INF
    return (v1, 1) if v1 < v0 else (v0, 0)


def _forward(tabs, ytrip, start):
    """Prefix chain.  ``start[tag]`` = (cost with bitR 0, cost with bitR 1)
    for the first node; every later node is crossed CENTRE until the node at
    which the chain stops (crossed LEFT).

    Returns P[i][tag][b] (u_i CENTRE with right bit b), E[i][tag] (u_i LEFT)
    and back pointers.  Back pointers are small ints ``c + 2 * b_prev``
    (left bit of u_i, right bit of u_{i-1}), -1 when infeasible;
    ``Pb[i][2 * tag + b]`` and ``Eb[i][tag]``.
    """
    r = len(tabs)
    P = [None] * r
    Pb = [None] * r
    E = [None] * r
    Eb = [None] * r
    P[0] = [tuple(x) for x in start]
    for i in range(1, r):
        bt = tabs[i].beta
        (y00, y01), (y10, y11) = ytrip[i - 1]
        Pi = []
        Pbi = []
        Ei = []
        Ebi = []
        for p0, p1 in P[i - 1]:
            # cheapest arrival at u_i with left bit 0 / 1
            m0, k0 = _best2(p0, y00, p1, y10)
            m1, k1 = _best2(p0, y01, p1, y11)
            v, c = _best2(m0, bt[0], m1, bt[1])
            w, d = _best2(m0, bt[2], m1, bt[3])
            Pi.append((v, w))
            Pbi.append(-1 if v >= INF else c + 2 * (k1 if c else k0))
            Pbi.append(-1 if w >= INF else d + 2 * (k1 if d else k0))
            e, c = _best2(m0, bt[LEFT_BASE], m1, bt[LEFT_BASE + 1])
            Ei.append(e)
            Ebi.append(-1 if e >= INF else c + 2 * (k1 if c else k0))
        P[i], Pb[i], E[i], Eb[i] = Pi, Pbi, Ei, Ebi
    return P, Pb, E, Eb


def _backward(tabs, ytrip):
    """Suffix chain, mirror of :func:`_forward` with the tag being the right
    bit of the last node.  S[i][a2][c]: u_i CENTRE with left bit c;
    X[i][a2]: u_i crossed RIGHT.  Back pointers ``b + 2 * c_next``:
    ``Sb[i][2 * a2 + c]`` and ``Xb[i][a2]``."""
    r = len(tabs)
    S = [None] * r
    Sb = [None] * r
    X = [None] * r
    Xb = [None] * r
    bt = tabs[-1].beta
    S[r - 1] = [(bt[0], bt[1]), (bt[2], bt[3])]
    X[r - 1] = [bt[RIGHT_BASE], bt[RIGHT_BASE + 1]]
    for i in range(r - 2, -1, -1):
        bt = tabs[i].beta
        (y00, y01), (y10, y11) = ytrip[i]
        Si = []
        Sbi = []
        Xi = []
        Xbi = []
        for s0, s1 in S[i + 1]:
            # cheapest continuation from u_i with right bit 0 / 1
            m0, k0 = _best2(s0, y00, s1, y01)
            m1, k1 = _best2(s0, y10, s1, y11)
            v, b = _best2(m0, bt[0], m1, bt[2])
            w, d = _best2(m0, bt[1], m1, bt[3])
            Si.append((v, w))
            Sbi.append(-1 if v >= INF else b + 2 * (k1 if b else k0))
            Sbi.append(-1 if w >= INF else d + 2 * (k1 if d else k0))
            x, b = _best2(m0, bt[RIGHT_BASE], m1, bt[RIGHT_BASE + 1])
            Xi.append(x)
            Xbi.append(-1 if x >= INF else b + 2 * (k1 if b else k0))
        S[i], Sb[i], X[i], Xb[i] = Si, Sbi, Xi, Xbi
    return S, Sb, X, Xb


def _walk_forward(Pb, Eb, start_slots, i, tag, kind, b=None):
    """Rim slot indices for u_0..u_i of a forward chain ending at u_i
    (``kind`` 'E': u_i LEFT; 'P': u_i CENTRE with right bit ``b``)."""
    out = [None] * (i + 1)
    if kind == "E":
        if i == 0:
            out[0] = start_slots[tag][None]
            return out
        code = Eb[i][tag]
        out[i] = LEFT_BASE + (code & 1)
        b = code >> 1
        i -= 1
    while i > 0:
        code = Pb[i][2 * tag + b]
        out[i] = (code & 1) + 2 * b
        i, b = i - 1, code >> 1
    out[0] = start_slots[tag][b]
    return out


def _walk_backward(Sb, Xb, i, a2, r):
    """Rim slot indices for u_i..u_{r-1}, u_i crossed RIGHT."""
    out = [None] * (r - i)
    if i == r - 1:
        out[0] = RIGHT_BASE + a2
        return out
    code = Xb[i][a2]
    out[0] = RIGHT_BASE + (code & 1)
    c = code >> 1
    j = i + 1
    while j < r - 1:
        code = Sb[j][2 * a2 + c]
        out[j - i] = c + 2 * (code & 1)
        j, c = j + 1, code >> 1
    out[j - i] = c + 2 * a2
    return out


# starting slots of a forward chain that begins CENTRE with left bit a1:
# {right bit: slot}, plus None -> LEFT slot when the chain stops at u_0
_CENTRE_START = ({0: 0, 1: 2, None: LEFT_BASE}, {0: 1, 1: 3, None: LEFT_BASE + 1})


@dataclass(frozen=True)
class PseudoFanValue:
    """Prefix and suffix chain values over a fan rim (internal scale).

    ``prefix[i][(a1, b)]``: rim nodes 0..i all crossed CENTRE, first left bit
    a1, last right bit b.  ``prefix_stop[i][a1]``: same but node i crossed
    LEFT (towards the centre).  ``suffix`` / ``suffix_stop`` mirror these
    from the right end, keyed by (a2, left bit of node i) and a2.
    """

    prefix: list[dict]
    prefix_stop: list[dict]
    suffix: list[dict]
    suffix_stop: list[dict]


@dataclass(eq=False)
class FanTrace:
    """Back pointers of one fan contraction; routes are rebuilt on demand."""

    centre: int
    rim: tuple[int, ...]
    Pb: list
    Eb: list
    Sb: list
    Xb: list
    centre_g: list  # centre_g[a1][a2]: detour position of the best CENTRE route
    values: list

    def rim_slot_indices(self, idx: int) -> list[int]:
        r = len(self.rim)
        slot = SLOTS[idx]
        a1, a2 = slot.inner.a1, slot.inner.a2
        if slot.traversal == 0:
            g = self.centre_g[a1][a2]
            left = _walk_forward(self.Pb, self.Eb, _CENTRE_START, g, a1, "E")
            right = _walk_backward(self.Sb, self.Xb, g + 1, a2, r)
            return left + right
        if slot.traversal == 1:
            return _walk_forward(self.Pb, self.Eb, _CENTRE_START, r - 1, a1, "E")
        return _walk_backward(self.Sb, self.Xb, 0, a2, r)

    def route(self, idx: int) -> list[tuple[int, int | None]]:
        """(node, slot index or None for the centre) in forward order."""
        if self.values[idx] >= INF:
            raise KeyError(idx)
        slots = self.rim_slot_indices(idx)
        items = list(zip(self.rim, slots))
        trav = SLOTS[idx].traversal
        if trav == 0:
            g = self.centre_g[SLOTS[idx].inner.a1][SLOTS[idx].inner.a2]
            return items[:g + 1] + [(self.centre, None)] + items[g + 1:]
        if trav == 1:
            return items + [(self.centre, None)]
        return [(self.centre, None)] + items


def _fan_dp(centre: int, tabs: Sequence[PenaltyTable], k_edge: int, triple):
    r = len(tabs)
    ytrip = _ytrips(tabs, triple)
    b0 = tabs[0].beta
    start = [(b0[0], b0[2]), (b0[1], b0[3])]
    P, Pb, E, Eb = _forward(tabs, ytrip, start)
    E[0] = [b0[LEFT_BASE], b0[LEFT_BASE + 1]]
    S, Sb, X, Xb = _backward(tabs, ytrip)
    spokes = [t.boundary[1] for t in tabs]

    beta = [INF] * N_SLOTS
    centre_g = [[None, None], [None, None]]
    for g in range(r - 1):
        hubc = (triple(tabs[g].ports.k_left, spokes[g], spokes[g + 1])
                + triple(spokes[g], spokes[g + 1], tabs[g + 1].ports.k_right))
        for a1 in (0, 1):
            e = E[g][a1]
            if e >= INF:
                continue
            for a2 in (0, 1):
                x = X[g + 1][a2]
                if x >= INF:
                    continue
                v = e + x + hubc
                if v < beta[a1 + 2 * a2]:
                    beta[a1 + 2 * a2] = v
                    centre_g[a1][a2] = g
    last = tabs[-1]
    kcost = triple(last.ports.k_left, spokes[-1], k_edge)
    for a1 in (0, 1):
        if E[r - 1][a1] < INF:
            beta[LEFT_BASE + a1] = E[r - 1][a1] + kcost
    kcost = triple(k_edge, spokes[0], tabs[0].ports.k_right)
    for a2 in (0, 1):
        if X[0][a2] < INF:
            beta[RIGHT_BASE + a2] = X[0][a2] + kcost

    ports = Ports(tabs[0].ports.left, last.ports.right, spokes[-1], spokes[0])
    boundary = (tabs[0].boundary[0], k_edge, last.boundary[2])
    trace = FanTrace(centre, tuple(), Pb, Eb, Sb, Xb, centre_g, beta)
    chains = (P, E, S, X)
    return PenaltyTable(beta, ports, boundary, trace), chains


def _fan_tables(F: Fan, tables: Mapping[int, PenaltyTable]) -> list[PenaltyTable]:
    tabs = [tables[u] for u in F.rim]
    for i, t in enumerate(tabs):
        if t.boundary[1] != F.spokes[i]:
            raise ValueError(f"table of rim node {F.rim[i]} does not match spoke {F.spokes[i]}")
        if i + 1 < len(tabs) and t.boundary[2] != F.rim_edges[i]:
            raise ValueError(f"table of rim node {F.rim[i]} does not match rim edge {F.rim_edges[i]}")
    return tabs


def beta_update(F: Fan, tables: Mapping[int, PenaltyTable], costs: CostModel, k: int = 3) -> PenaltyTable:
    """Penalty table of the pseudo-node replacing fan ``F``."""
    table, _ = _fan_dp(F.centre, _fan_tables(F, tables), F.cutset[1], make_triple(costs, k, _edge_bound(costs)))
    table.trace.rim = F.rim
    return table


def chain_pseudo_fan(F: Fan, tables: Mapping[int, PenaltyTable], costs: CostModel,
                     k: int = 3) -> PseudoFanValue:
    """Prefix/suffix chain values over the rim of ``F``."""
    _, (P, E, S, X) = _fan_dp(F.centre, _fan_tables(F, tables), F.cutset[1], make_triple(costs, k, _edge_bound(costs)))
    r = F.r
    prefix = [{(a1, b): P[i][a1][b] for a1 in (0, 1) for b in (0, 1)} for i in range(r)]
    prefix_stop = [{a1: E[i][a1] for a1 in (0, 1)} for i in range(r)]
    suffix = [{(a2, c): S[i][a2][c] for a2 in (0, 1) for c in (0, 1)} for i in range(r)]
    suffix_stop = [{a2: X[i][a2] for a2 in (0, 1)} for i in range(r)]
    return PseudoFanValue(prefix, prefix_stop, suffix, suffix_stop)


def traversal_argmins(table: PenaltyTable) -> dict[Slot, FanPath]:
    """Route through the fan (one level, rim pseudo-nodes kept) per finite slot."""
    out = {}
    for idx, v in enumerate(table.beta):
        if v >= INF:
            continue
        items = table.trace.route(idx)
        nodes = tuple(u for u, _ in items)
        rim_slots = tuple((u, SLOTS[s]) for u, s in items if s is not None)
        out[SLOTS[idx]] = FanPath(nodes, rim_slots, v)
    return out


# ----------------------------------------------------------------------
# base path costs (closed forms for fans whose rim holds only plain nodes)


def base_path_costs(F: Fan, costs: CostModel, k: int = 3) -> dict:
    """Costs of the all-rim route K and the single-detour routes K(y_p).

    Only windows centred on edges inside the fan are counted.  Returns
    ``{"K": q(K), 1: q(K(y_1)), ..., r-1: q(K(y_{r-1}))}`` in internal scale.
    r >= 4 uses the incremental formulas; smaller fans are summed directly.
    """
    t = make_triple(costs, k, _edge_bound(costs))
    r = F.r
    j, _, l = F.cutset
    y = (j,) + F.rim_edges + (l,)  # y[0] = j, y[r] = l
    ts = (None,) + F.spokes  # ts[i] = t_i, 1-based
    qK = sum(t(y[i - 1], y[i], y[i + 1]) for i in range(1, r))
    out = {"K": qK}
    if r < 4:
        for p in range(1, r):
            path = list(y[:p]) + [ts[p], ts[p + 1]] + list(y[p + 1:])
            out[p] = sum(t(path[i - 1], path[i], path[i + 1]) for i in range(1, len(path) - 1))
        return out
    out[1] = (qK + t(j, ts[1], ts[2]) + t(ts[1], ts[2], y[2]) + t(ts[2], y[2], y[3])
              - t(j, y[1], y[2]) - t(y[1], y[2], y[3]))
    for p in range(2, r - 1):
        out[p] = (qK + t(y[p - 2], y[p - 1], ts[p]) + t(y[p - 1], ts[p], ts[p + 1])
                  + t(ts[p], ts[p + 1], y[p + 1]) + t(ts[p + 1], y[p + 1], y[p + 2])
                  - t(y[p - 2], y[p - 1], y[p]) - t(y[p - 1], y[p], y[p + 1])
                  - t(y[p], y[p + 1], y[p + 2]))
    out[r - 1] = (qK + t(y[r - 3], y[r - 2], ts[r - 1]) + t(y[r - 2], ts[r - 1], ts[r])
                  + t(ts[r - 1], ts[r], l)
                  - t(y[r - 3], y[r - 2], y[r - 1]) - t(y[r - 2], y[r - 1], l))
    return out


def plain_fan_penalties(F: Fan, costs: CostModel, k: int = 3) -> list[int]:
    """Penalty table of a fan with an all-plain rim, from the closed forms."""
    t = make_triple(costs, k, _edge_bound(costs))
    base = base_path_costs(F, costs, k)
    r = F.r
    j, kk, l = F.cutset
    y = (j,) + F.rim_edges + (l,)
    ts = (None,) + F.spokes
    beta = [INF] * N_SLOTS
    if r == 2:
        beta[3] = base[1]  # both end rim edges skipped
    else:
        beta[1] = base[1]
        beta[2] = base[r - 1]
        mids = [base[p] for p in range(2, r - 1)]
        if mids:
            beta[0] = min(mids)
    # LEFT: j, y_1..y_{r-1}, t_r, k
    beta[LEFT_BASE] = (base["K"] - t(y[r - 2], y[r - 1], l) + t(y[r - 2], y[r - 1], ts[r])
                       + t(y[r - 1], ts[r], kk))
    # RIGHT: k, t_1, y_1..y_{r-1}, l
    beta[RIGHT_BASE] = (t(kk, ts[1], y[1]) + t(ts[1], y[1], y[2]) + base["K"]
                        - t(j, y[1], y[2]))
    return beta


# ----------------------------------------------------------------------
# wheel


@dataclass
class _WheelChoice:
    value: int
    skipped: int  # index g of the skipped rim edge (u_g, u_{g+1})
    rim_slots: list[int]


def _wheel_dp(tabs: Sequence[PenaltyTable], triple, edge_rank) -> _WheelChoice:
    r = len(tabs)
    ytrip = _ytrips(tabs, triple)
    b0 = tabs[0].beta
    start = [(b0[0], b0[2]), (b0[1], b0[3])]
    P, Pb, E, Eb = _forward(tabs, ytrip, start)
    E[0] = [b0[LEFT_BASE], b0[LEFT_BASE + 1]]
    S, Sb, X, Xb = _backward(tabs, ytrip)
    spokes = [t.boundary[1] for t in tabs]
    rim_edge = [t.boundary[2] for t in tabs]
    right, left = tabs[-1].ports.right, tabs[0].ports.left
    close = [[triple(right[a2], rim_edge[-1], left[a1]) for a1 in (0, 1)] for a2 in (0, 1)]

    best = None  # (value, rank, g, a1, a2)
    for g in range(r - 1):
        hubc = (triple(tabs[g].ports.k_left, spokes[g], spokes[g + 1])
                + triple(spokes[g], spokes[g + 1], tabs[g + 1].ports.k_right))
        for a1 in (0, 1):
            e = E[g][a1]
            if e >= INF:
                continue
            for a2 in (0, 1):
                x = X[g + 1][a2]
                if x >= INF:
                    continue
                key = (e + x + hubc + close[a2][a1], edge_rank(rim_edge[g]))
                if best is None or key < best[:2]:
                    best = key + (g, a1, a2)

    # skip the closing edge: u_0 RIGHT, u_1..u_{r-2} CENTRE, u_{r-1} LEFT
    qstart = [(b0[RIGHT_BASE], b0[RIGHT_BASE + 1])]
    Q, Qb, QE, QEb = _forward(tabs, ytrip, qstart)
    hubc = (triple(tabs[-1].ports.k_left, spokes[-1], spokes[0])
            + triple(spokes[-1], spokes[0], tabs[0].ports.k_right))
    if QE[r - 1][0] < INF:
        key = (QE[r - 1][0] + hubc, edge_rank(rim_edge[-1]))
        if best is None or key < best[:2]:
            best = key + (r - 1, 0, 0)
    if best is None:
        raise InfeasibleTables("no finite tour through the wheel")

    value, _, g, a1, a2 = best
    if g == r - 1:
        slots = _walk_forward(Qb, QEb, ({0: RIGHT_BASE, 1: RIGHT_BASE + 1},), r - 1, 0, "E")
    else:
        slots = (_walk_forward(Pb, Eb, _CENTRE_START, g, a1, "E")
                 + _walk_backward(Sb, Xb, g + 1, a2, r))
    return _WheelChoice(value, g, slots)


def _wheel_items(h: int, rim: Sequence[int], choice: _WheelChoice):
    r = len(rim)
    g = choice.skipped
    order = list(range(g + 1, r)) + list(range(0, g + 1))
    return [(h, None)] + [(rim[i], choice.rim_slots[i]) for i in order]


def solve_wheel(W: HalinEmbedding, tables: Mapping[int, PenaltyTable], costs: CostModel,
                k: int = 3) -> tuple[list[int], dict[int, Slot], Objective]:
    """Best tour of a wheel whose rim may carry pseudo-nodes.

    Returns the tour in ``W`` (hub first), the slot chosen at every rim
    node, and the penalised objective.
    """
    h = hub(W)
    rim = W.cycle
    tabs = [tables[u] for u in rim]
    choice = _wheel_dp(tabs, make_triple(costs, k, _edge_bound(costs, W)), lambda e: e)
    items = _wheel_items(h, rim, choice)
    rho = {u: SLOTS[s] for u, s in items if s is not None}
    return [u for u, _ in items], rho, Objective(choice.value, Kind.MTSP3)


# ----------------------------------------------------------------------
# driver


@dataclass
class Solution:
    tour: list[int]
    value: Objective
    rho: dict[int, Slot] = field(default_factory=dict)
    contraction_order: list[int] = field(default_factory=list)


def _expand(items, tables):
    """Flatten (node, slot) items, expanding pseudo-nodes iteratively."""
    out = []
    rho = {}
    stack = [iter([(u, s, True) for u, s in items])]
    while stack:
        item = next(stack[-1], None)
        if item is None:
            stack.pop()
            continue
        u, s, fwd = item
        tab = tables.get(u)
        if s is None or tab is None or tab.trace is None:
            out.append(u)
            continue
        rho[u] = SLOTS[s]
        seq = tab.trace.route(s)
        if fwd:
            stack.append(iter([(v, t, True) for v, t in seq]))
        else:
            stack.append(iter([(v, t, False) for v, t in reversed(seq)]))
    return out, rho


def _solve_tiny(H: HalinEmbedding, costs: CostModel, k: int) -> Solution:
    # K4: windows of three edges wrap onto themselves, so evaluate directly
    h = hub(H)
    rim = H.cycle
    r = len(rim)
    best = None
    for g in range(r):
        tour = [h] + [rim[(g + 1 + i) % r] for i in range(r)]
        val = tour_objective(H, tour, costs, k).value
        key = (val, H.edge(rim[g], rim[(g + 1) % r]))
        if best is None or key < best[0]:
            best = (key, tour)
    return Solution(best[1], Objective(best[0][0], Kind.for_k(k)))


def solve(H: HalinEmbedding, costs: CostModel, k: int = 3) -> Solution:
    """Optimal TSP(k) tour of ``H`` for k in {1, 2, 3}.

    Fans are contracted smallest centre first until a wheel remains; the
    wheel is solved and the pseudo-nodes are expanded again.  Linear in n.
    """
    # the DP allocates many small acyclic containers; full cyclic-GC passes
    # over that growing heap would make the run superlinear
    enabled = gc.isenabled()
    gc.disable()
    try:
        return _solve(H, costs, k)
    finally:
        if enabled:
            gc.enable()


def _solve(H: HalinEmbedding, costs: CostModel, k: int) -> Solution:
    if k not in (1, 2, 3):
        raise InvalidK(f"k must be 1, 2 or 3, got {k}")
    if H.n < 5:
        return _solve_tiny(H, costs, k)
    triple = make_triple(costs, k, _edge_bound(costs, H))
    internal = H.internal
    tables: dict[int, PenaltyTable] = {}  # pseudo-nodes only; leaves built on use
    rot = {w: list(r) for w, r in H.rotation.items()}
    where = {w: {u: i for i, u in enumerate(r)} for w, r in rot.items()}
    ideg = {w: sum(1 for u in r if u in internal) for w, r in rot.items()}
    heap = [w for w, d in ideg.items() if d == 1]
    heapq.heapify(heap)
    alive = len(internal)
    next_id = H.next_id
    order = []

    while alive > 1:
        w = heapq.heappop(heap)
        rw = rot[w]
        p = next(i for i, u in enumerate(rw) if u in internal and ideg.get(u, 0) > 0)
        x = rw[p]
        rim = rw[p + 1:] + rw[:p]
        tabs = [tables[u] if u in tables else plain_table(H, u) for u in rim]
        table, _ = _fan_dp(w, tabs, H.edge(w, x), triple)
        table.trace.rim = tuple(rim)
        vf = next_id
        next_id += 1
        tables[vf] = table
        i = where[x].pop(w)
        rot[x][i] = vf
        where[x][vf] = i
        ideg[w] = 0
        ideg[x] -= 1
        alive -= 1
        order.append(w)
        if ideg[x] == 1 and alive > 1:
            heapq.heappush(heap, x)

    done = set(order)
    h = next(w for w in internal if w not in done)
    rh = rot[h]
    s = min(range(len(rh)), key=rh.__getitem__)
    rim = rh[s:] + rh[:s]
    tabs = [tables[u] if u in tables else plain_table(H, u) for u in rim]
    choice = _wheel_dp(tabs, triple, lambda e: e)
    tour, rho = _expand(_wheel_items(h, rim, choice), tables)
    if choice.value % SCALE:
        raise AssertionError(f"objective {choice.value} not divisible by {SCALE}")
    return Solution(tour, Objective(choice.value, Kind.for_k(k)), rho, order)


def solve_stepwise(H: HalinEmbedding, costs: CostModel, k: int = 3) -> Solution:
    """Same algorithm driven through the public, immutable operations
    (find_fans / beta_update / contract_fan / solve_wheel / expand_tour).

    Quadratic in n because every contraction copies the graph; meant for
    cross-checking :func:`solve` and for inspecting intermediate graphs.
    """
    from .halin import contract_fan, expand_tour, find_fans

    if k not in (1, 2, 3):
        raise InvalidK(f"k must be 1, 2 or 3, got {k}")
    if H.n < 5:
        return _solve_tiny(H, costs, k)
    tables = init_penalties(H)
    records = []
    G = H
    while not is_wheel(G):
        F = find_fans(G)[0]
        table = beta_update(F, tables, costs, k)
        G, rec = contract_fan(G, F)
        records.append(rec.with_argmins(traversal_argmins(table)))
        tables[rec.pseudo_node] = table
    tour, rho, value = solve_wheel(G, tables, costs, k)
    rho = dict(rho)
    for rec in reversed(records):
        slot = rho[rec.pseudo_node]
        tour = expand_tour(rec, tour, slot)
        for u, s in rec.traversal_argmins[slot].rim_slots:
            rho[u] = s
    rho = {u: s for u, s in rho.items() if u >= H.next_id}
    return Solution(tour, Objective(value.value, Kind.for_k(k)), rho,
                    [rec.fan.centre for rec in records])


def check_solution(H: HalinEmbedding, costs: CostModel, k: int, sol: Solution) -> None:
    """Raise AssertionError unless the tour is Hamiltonian and re-evaluates
    to the reported value."""
    tour_edges(H, sol.tour)
    got = tour_objective(H, sol.tour, costs, k).value
    if got != sol.value.value:
        raise AssertionError(f"tour re-evaluates to {got}, solver reported {sol.value.value}")
