import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from halintsp.costs import CostModel, make_triple, tour_objective
from halintsp.errors import InfeasibleTables, InvalidK
from halintsp.generators import gen_random_halin, gen_wheel
from halintsp.halin import contract_fan, find_fans, is_wheel
from halintsp.oracle import brute_solve, enumerate_hamilton_cycles
from halintsp.slots import SLOTS, Inner, Slot, Traversal
from halintsp import solver as S
from halintsp.solver import (INF, PenaltyTable, base_path_costs, beta_update, chain_pseudo_fan,
                             init_penalties, plain_fan_penalties, solve, solve_stepwise, solve_wheel)

from _util import k4, mtsp_value, oracle_instances, prism, unit_linear, wheel


def _window_sum(triple, edges):
    return sum(triple(edges[i - 1], edges[i], edges[i + 1]) for i in range(1, len(edges) - 1))


# ---------------------------------------------------------------- tables

def test_init_penalties_prism():
    tabs = init_penalties(prism())
    assert sorted(tabs) == [0, 1, 2, 3]
    for t in tabs.values():
        assert t.finite() == {Slot(Inner.M, Traversal.CENTRE): 0,
                              Slot(Inner.L, Traversal.LEFT): 0,
                              Slot(Inner.R, Traversal.RIGHT): 0}
        assert not t.is_pseudo


def test_init_penalties_k4():
    assert len(init_penalties(k4())) == 3


def test_contraction_produces_nonzero_table():
    inst = gen_random_halin(4, 3, seed=5)
    F = find_fans(inst.H)[0]
    t = beta_update(F, init_penalties(inst.H), inst.costs)
    assert t.is_pseudo
    assert any(0 < v < INF for v in t.beta)


def test_table_indexing():
    t = init_penalties(prism())[0]
    assert t[Slot(Inner.M, Traversal.CENTRE)] == 0
    assert t[("L", "LEFT")] == 0
    assert t[("B", "CENTRE")] == INF


# ---------------------------------------------------------------- base paths

def _fans_with_rims(seed_count=40):
    out = []
    for seed in range(seed_count):
        inst = gen_random_halin(3 + seed % 5, 2 + seed % 6, seed=seed)
        for F in find_fans(inst.H):
            out.append((inst, F))
    return out


def _direct_routes(F):
    """slot index -> edge list (cutset edges at both ends) for an all-plain fan."""
    r = F.r
    j, k, l = F.cutset
    y = list(F.rim_edges)
    t = list(F.spokes)
    routes = {}
    for g in range(1, r):
        edges = [j] + y[:g - 1] + [t[g - 1], t[g]] + y[g:] + [l]
        a1, a2 = int(g == 1), int(g == r - 1)
        routes.setdefault(a1 + 2 * a2, []).append(edges)
    routes[4] = [[j] + y + [t[-1], k]]
    routes[6] = [[k, t[0]] + y + [l]]
    return routes


def test_base_path_costs_zero():
    inst, F = next((i, f) for i, f in _fans_with_rims() if f.r >= 4)
    vals = base_path_costs(F, CostModel.zero(inst.H))
    assert set(vals.values()) == {0}


def test_base_path_costs_r4_unit_linear():
    inst, F = next((i, f) for i, f in _fans_with_rims() if f.r == 4)
    costs = unit_linear(inst.H)
    vals = base_path_costs(F, costs)
    # K = j, y1, y2, y3, l: three interior windows of three unit edges
    assert vals["K"] == 3 * 6


@pytest.mark.parametrize("k", [1, 2, 3])
def test_base_path_costs_match_direct_sums(k):
    seen = set()
    for inst, F in _fans_with_rims():
        seen.add(F.r)
        triple = make_triple(inst.costs, k)
        vals = base_path_costs(F, inst.costs, k)
        j, _, l = F.cutset
        y, t = list(F.rim_edges), list(F.spokes)
        assert vals["K"] == _window_sum(triple, [j] + y + [l])
        for p in range(1, F.r):
            path = [j] + y[:p - 1] + [t[p - 1], t[p]] + y[p:] + [l]
            assert vals[p] == _window_sum(triple, path)
    assert {2, 3, 4, 5} <= seen


def test_k_y1_difference_formula():
    inst, F = next((i, f) for i, f in _fans_with_rims() if f.r >= 5)
    t = make_triple(inst.costs, 3)
    vals = base_path_costs(F, inst.costs)
    j = F.cutset[0]
    y, s = F.rim_edges, F.spokes
    added = t(j, s[0], s[1]) + t(s[0], s[1], y[1]) + t(s[1], y[1], y[2])
    removed = t(j, y[0], y[1]) + t(y[0], y[1], y[2])
    assert vals[1] - vals["K"] == added - removed


@pytest.mark.parametrize("k", [1, 2, 3])
def test_beta_update_matches_direct_route_enumeration(k):
    for inst, F in _fans_with_rims():
        triple = make_triple(inst.costs, k)
        table = beta_update(F, init_penalties(inst.H), inst.costs, k)
        want = [INF] * 8
        for idx, routes in _direct_routes(F).items():
            want[idx] = min(_window_sum(triple, e) for e in routes)
        assert table.beta == want
        assert plain_fan_penalties(F, inst.costs, k) == want


def test_beta_update_prism_unit_linear():
    H = prism()
    F = find_fans(H)[0]
    table = beta_update(F, init_penalties(H), unit_linear(H))
    # r = 2: one centre route (j, t1, t2, l), one left, one right, 2 windows each
    assert table.finite() == {Slot(Inner.B, Traversal.CENTRE): 12,
                              Slot(Inner.M, Traversal.LEFT): 12,
                              Slot(Inner.M, Traversal.RIGHT): 12}


def test_beta_update_with_single_slot_pseudo_rim_node():
    # contract one fan, then give its pseudo-node a single finite slot and
    # check the next fan's table against brute force over that rim
    for seed in range(60):
        inst = gen_random_halin(3, 3, seed=seed)
        H = inst.H
        tables = init_penalties(H)
        F = find_fans(H)[0]
        tables[H.next_id] = beta_update(F, tables, inst.costs)
        G, rec = contract_fan(H, F)
        if is_wheel(G):
            continue
        F2 = next((f for f in find_fans(G) if rec.pseudo_node in f.rim), None)
        if F2 is None or F2.r != 3:
            continue
        break
    else:
        pytest.skip("no suitable fan found")
    vf = rec.pseudo_node
    base = tables[vf]
    keep = min(i for i, v in enumerate(base.beta) if v < INF and SLOTS[i].traversal == Traversal.CENTRE)
    tables[vf] = PenaltyTable([v if i == keep else INF for i, v in enumerate(base.beta)],
                              base.ports, base.boundary, base.trace)
    got = beta_update(F2, tables, inst.costs)
    want = _brute_fan_table(F2, tables, make_triple(inst.costs, 3))
    assert got.beta == want


def _brute_fan_table(F, tables, triple):
    """Enumerate every (route shape, rim slot choice) of fan F."""
    r = F.r
    j, k, l = F.cutset
    t = F.spokes
    rim = [tables[u] for u in F.rim]
    y = [rim[i].boundary[2] for i in range(r - 1)]
    out = [INF] * 8

    def chain_cost(slots, first, last):
        total = 0
        for i, s in enumerate(slots):
            b = rim[first + i].beta[s.index]
            if b >= INF:
                return INF
            total += b
        for i in range(len(slots) - 1):
            u, v = first + i, first + i + 1
            total += triple(rim[u].ports.right[slots[i].inner.a2], y[u], rim[v].ports.left[slots[i + 1].inner.a1])
        return total

    centre = [s for s in SLOTS if s.traversal == Traversal.CENTRE]
    lefts = [s for s in SLOTS if s.traversal == Traversal.LEFT]
    rights = [s for s in SLOTS if s.traversal == Traversal.RIGHT]
    for g in range(r - 1):  # detour between u_g and u_{g+1} (0-based)
        for left_part in itertools.product(*([centre] * g + [lefts])):
            for right_part in itertools.product(*([rights] + [centre] * (r - g - 2))):
                a = chain_cost(left_part, 0, g)
                b = chain_cost(right_part, g + 1, r - 1)
                if a >= INF or b >= INF:
                    continue
                hub = (triple(rim[g].ports.k_left, t[g], t[g + 1])
                       + triple(t[g], t[g + 1], rim[g + 1].ports.k_right))
                idx = left_part[0].inner.a1 + 2 * right_part[-1].inner.a2
                out[idx] = min(out[idx], a + b + hub)
    for combo in itertools.product(*([centre] * (r - 1) + [lefts])):
        a = chain_cost(combo, 0, r - 1)
        if a < INF:
            idx = 4 + combo[0].inner.a1
            out[idx] = min(out[idx], a + triple(rim[-1].ports.k_left, t[-1], k))
    for combo in itertools.product(*([rights] + [centre] * (r - 1))):
        a = chain_cost(combo, 0, r - 1)
        if a < INF:
            idx = 6 + combo[-1].inner.a2
            out[idx] = min(out[idx], a + triple(k, t[0], rim[0].ports.k_right))
    return out


@pytest.mark.parametrize("seed", range(12))
def test_beta_update_random_tables_against_brute_force(seed):
    rng = random.Random(seed)
    inst = gen_random_halin(3 + seed % 3, 5, seed=seed, min_fanout=3)
    F = max(find_fans(inst.H), key=lambda f: f.r)
    tables = init_penalties(inst.H)
    for u in F.rim:
        t = tables[u]
        beta = [rng.choice([INF, rng.randint(0, 60)]) for _ in range(8)]
        tables[u] = PenaltyTable(beta, t.ports, t.boundary)
    triple = make_triple(inst.costs, 3)
    try:
        got = beta_update(F, tables, inst.costs).beta
    except InfeasibleTables:
        got = None
    assert got == _brute_fan_table(F, tables, triple)


@pytest.mark.parametrize("seed", range(12))
def test_chain_values_against_exhaustive_chains(seed):
    rng = random.Random(100 + seed)
    inst = gen_random_halin(2 + seed % 3, 5, seed=seed, min_fanout=5)
    F = find_fans(inst.H)[0]
    assert F.r == 5 or F.r >= 5
    tables = init_penalties(inst.H)
    for u in F.rim:
        t = tables[u]
        tables[u] = PenaltyTable([rng.choice([INF, rng.randint(0, 40)]) for _ in range(8)],
                                 t.ports, t.boundary)
    pf = chain_pseudo_fan(F, tables, inst.costs)
    triple = make_triple(inst.costs, 3)
    rim = [tables[u] for u in F.rim]
    y = F.rim_edges
    centre = [s for s in SLOTS if s.traversal == Traversal.CENTRE]

    def cost(slots, first):
        total = 0
        for i, s in enumerate(slots):
            b = rim[first + i].beta[s.index]
            if b >= INF:
                return INF
            total += b
        for i in range(len(slots) - 1):
            u = first + i
            total += triple(rim[u].ports.right[slots[i].inner.a2], y[u], rim[u + 1].ports.left[slots[i + 1].inner.a1])
        return total

    r = F.r
    for i in range(r):
        want = {}
        for combo in itertools.product(centre, repeat=i + 1):
            key = (combo[0].inner.a1, combo[-1].inner.a2)
            want[key] = min(want.get(key, INF), cost(combo, 0))
        for key in itertools.product((0, 1), repeat=2):
            assert pf.prefix[i][key] == want.get(key, INF)
        want = {}
        for combo in itertools.product(centre, repeat=r - i):
            key = (combo[-1].inner.a2, combo[0].inner.a1)
            want[key] = min(want.get(key, INF), cost(combo, i))
        for key in itertools.product((0, 1), repeat=2):
            assert pf.suffix[i][key] == want.get(key, INF)
    # single node: the prefix is the node's own CENTRE slots
    for a1, b in itertools.product((0, 1), repeat=2):
        assert pf.prefix[0][(a1, b)] == rim[0].beta[a1 + 2 * b]


# ---------------------------------------------------------------- exactness of stored routes

@pytest.mark.parametrize("seed", range(15))
def test_every_finite_slot_expands_to_a_route_of_that_cost(seed):
    inst = gen_random_halin(4 + seed % 6, 4, seed=seed)
    H, costs = inst.H, inst.costs
    triple = make_triple(costs, 3)
    tables = init_penalties(H)
    G = H
    while not is_wheel(G):
        F = find_fans(G)[0]
        table = beta_update(F, tables, costs)
        G, rec = contract_fan(G, F)
        vf = rec.pseudo_node
        tables[vf] = table
        for idx, val in enumerate(table.beta):
            if val >= INF:
                continue
            nodes, _ = S._expand([(vf, idx)], tables)
            ports = SLOTS[idx].traversal.ports
            bmap = dict(zip("jkl", table.boundary))
            first, last = bmap[ports[0]], bmap[ports[1]]
            assert nodes[0] in H.edges[first] and nodes[-1] in H.edges[last]
            inner = [H.edge(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1)]
            assert _window_sum(triple, [first] + inner + [last]) == val


# ---------------------------------------------------------------- conservation

@pytest.mark.parametrize("seed", range(10))
def test_penalised_minimum_is_conserved_by_contraction(seed):
    inst = gen_random_halin(3 + seed % 3, 3, seed=seed)
    H, costs = inst.H, inst.costs
    if H.n < 5:
        pytest.skip("triple form needs n >= 5")
    target = brute_solve(H, costs, "TSP3").value.value
    tables = init_penalties(H)
    G = H
    levels = 0
    while True:
        got = min(mtsp_value(G, list(c), tables, costs) for c in enumerate_hamilton_cycles(G))
        assert got == target
        if is_wheel(G):
            break
        F = find_fans(G)[0]
        tables[G.next_id] = beta_update(F, tables, costs)
        for u in F.rim:
            tables.pop(u, None)
        G, _ = contract_fan(G, F)
        levels += 1
    assert levels == len(H.internal) - 1


# ---------------------------------------------------------------- wheel

def test_wheel_zero_costs_picks_smallest_edge():
    W = wheel(8)
    tour, rho, val = solve_wheel(W, init_penalties(W), CostModel.zero(W))
    assert val.value == 0
    skipped = {W.edge(a, b) for a, b in W.cycle_edges()} - {
        W.edge(tour[i], tour[(i + 1) % len(tour)]) for i in range(len(tour))}
    assert skipped == {min(W.edge(a, b) for a, b in W.cycle_edges())}


@pytest.mark.parametrize("seed", range(10))
def test_wheel_matches_brute_force(seed):
    inst = gen_wheel(6, seed)
    tour, rho, val = solve_wheel(inst.H, init_penalties(inst.H), inst.costs)
    assert val.value == brute_solve(inst.H, inst.costs, "TSP3").value.value
    assert tour_objective(inst.H, tour, inst.costs, 3).value == val.value


@pytest.mark.parametrize("seed", range(10))
def test_wheel_with_pseudo_rim_nodes(seed):
    inst = gen_random_halin(3, 3, seed=seed)
    H, costs = inst.H, inst.costs
    tables = init_penalties(H)
    G = H
    while not is_wheel(G):
        F = find_fans(G)[0]
        tables[G.next_id] = beta_update(F, tables, costs)
        G, _ = contract_fan(G, F)
    tour, rho, val = solve_wheel(G, tables, costs)
    want = min(mtsp_value(G, list(c), tables, costs) for c in enumerate_hamilton_cycles(G))
    assert val.value == want
    assert all(s.index in range(8) and tables[u].beta[s.index] < INF for u, s in rho.items())


# ---------------------------------------------------------------- driver

def test_solve_zero_costs():
    inst = gen_random_halin(6, 4, seed=1)
    assert solve(inst.H, CostModel.zero(inst.H), 3).value.value == 0


def test_solve_prism_unit_linear_k1():
    H = prism()
    assert solve(H, unit_linear(H), 1).value.external == 6


@pytest.mark.parametrize("k", [1, 2, 3])
def test_solve_k4(k):
    for seed in range(10):
        inst = gen_wheel(3, seed)
        sol = solve(inst.H, inst.costs, k)
        assert sol.value.value == brute_solve(inst.H, inst.costs, f"TSP{k}").value.value


def test_solve_rejects_bad_k():
    with pytest.raises(InvalidK):
        solve(prism(), CostModel.zero(prism()), 4)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_solve_matches_oracle(k):
    for inst in oracle_instances()[:100]:
        sol = solve(inst.H, inst.costs, k)
        ref = brute_solve(inst.H, inst.costs, f"TSP{k}")
        assert sol.value == ref.value
        assert tour_objective(inst.H, sol.tour, inst.costs, k) == sol.value


def test_solution_diagnostics():
    inst = gen_random_halin(6, 3, seed=4)
    sol = solve(inst.H, inst.costs, 3)
    assert len(sol.contraction_order) == len(inst.H.internal) - 1
    assert all(u >= inst.H.next_id for u in sol.rho)
    assert len(sol.rho) == len(inst.H.internal) - 1


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000), internal=st.integers(1, 12), k=st.sampled_from([1, 2, 3]))
def test_fast_and_stepwise_drivers_agree(seed, internal, k):
    inst = gen_random_halin(internal, 4, seed=seed)
    a = solve(inst.H, inst.costs, k)
    b = solve_stepwise(inst.H, inst.costs, k)
    assert a.tour == b.tour and a.value == b.value and a.rho == b.rho
    S.check_solution(inst.H, inst.costs, k, a)


def test_solve_is_deterministic():
    inst = gen_random_halin(30, 4, seed=9)
    assert solve(inst.H, inst.costs, 3).tour == solve(inst.H, inst.costs, 3).tour


def test_solve_large_wheel_without_recursion_limits():
    inst = gen_wheel(3000, 1)
    sol = solve(inst.H, inst.costs, 3)
    assert tour_objective(inst.H, sol.tour, inst.costs, 3) == sol.value


def test_solve_deep_caterpillar():
    # a path of internal nodes: contractions nest thousands of levels deep
    from halintsp.halin import build_embedding
    m = 3000
    tree, cycle, leaf = [], [], 0
    spine = list(range(10**6, 10**6 + m))
    for i, w in enumerate(spine):
        if i:
            tree.append((spine[i - 1], w))
    # leaves: first and last spine nodes get two, others one, in DFS order
    order = []
    for i, w in enumerate(spine):
        cnt = 2 if i in (0, m - 1) else 1
        order.append((w, cnt))
    tops = []
    for w, cnt in order:
        for _ in range(cnt):
            tops.append(w)
    # cycle: one side of the caterpillar then back along the other is not
    # needed; every node hangs its leaves on the same side
    ids = {}
    for w in tops:
        tree.append((w, leaf))
        cycle.append(leaf)
        leaf += 1
    relabel = {w: leaf + i for i, w in enumerate(spine)}
    tree = [(relabel.get(a, a), relabel.get(b, b)) for a, b in tree]
    H = build_embedding(tree, cycle)
    rng = random.Random(3)
    costs = CostModel({e: rng.randint(0, 9) for e in H.edges}, {})
    sol = solve(H, costs, 3)
    assert tour_objective(H, sol.tour, costs, 3) == sol.value
