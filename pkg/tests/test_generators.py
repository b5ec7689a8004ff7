import random

import pytest

from halintsp.errors import InvalidParams, TooSmall
from halintsp.generators import (candidate_pairs, gen_halin_of_size, gen_random_halin, gen_wheel,
                                 random_costs, sizes_in_range)
from halintsp.halin import find_fans, is_wheel, validate
from halintsp.instance_io import dumps

from _util import k4


def test_wheel_r3_is_k4():
    inst = gen_wheel(3, seed=0)
    assert inst.n == 4 and len(inst.H.edges) == 6
    assert inst.H.tree_edges() == k4().tree_edges()
    assert is_wheel(inst.H)


def test_wheel_too_small():
    with pytest.raises(TooSmall):
        gen_wheel(2)


def test_wheel_costs_every_candidate_pair():
    inst = gen_wheel(8, seed=1)
    assert set(inst.costs.linear) == set(inst.H.edges)
    assert dumps(inst) == dumps(gen_wheel(8, seed=1))
    assert dumps(inst) != dumps(gen_wheel(8, seed=2))


def test_wheel_large_builds():
    inst = gen_wheel(20000, seed=1)
    assert inst.n == 20001
    validate(inst.H)


def test_internal_one_is_a_wheel():
    for seed in range(10):
        assert is_wheel(gen_random_halin(1, 5, seed=seed).H)


def test_two_internal_nodes_fanout_two_give_the_prism():
    for seed in range(10):
        H = gen_random_halin(2, 2, seed=seed).H
        assert H.n == 6 and len(H.edges) == 9
        assert sorted(len(H.neighbours(u)) for u in H.nodes) == [3] * 6
        assert len(H.internal) == 2


def test_internal_five_seed_seven():
    inst = gen_random_halin(5, seed=7)
    validate(inst.H)
    assert len(find_fans(inst.H)) >= 2


def test_generator_validity_sweep():
    for seed in range(150):
        inst = gen_random_halin(1 + seed % 20, 2 + seed % 5, seed=seed)
        validate(inst.H)
        if not is_wheel(inst.H):
            assert len(find_fans(inst.H)) >= 2
        assert all(0 <= c <= 9 for c in inst.costs.linear.values())


def test_random_halin_is_deterministic():
    assert dumps(gen_random_halin(5, seed=7)) == dumps(gen_random_halin(5, seed=7))


@pytest.mark.parametrize("args", [(0, 3), (3, 1), (3, 4, 0, (0, 9), 0.5, 0.1, 3, 5)])
def test_invalid_params(args):
    with pytest.raises(InvalidParams):
        gen_random_halin(*args)


def test_invalid_cost_range():
    with pytest.raises(InvalidParams):
        gen_random_halin(3, cost_range=(5, 2))


def test_candidate_pairs_exclude_far_pairs():
    H = gen_random_halin(6, 3, seed=3).H
    pairs = set(candidate_pairs(H))
    m = len(H.edges)
    assert 0 < len(pairs) < m * (m - 1) // 2


def test_random_costs_respect_density_zero():
    H = gen_wheel(6).H
    c = random_costs(H, random.Random(0), (1, 9), q_density=0.0, extra_fraction=0.0)
    assert c.quadratic == {}


def test_sizes_in_range_bounds():
    insts = sizes_in_range(6, 14, 30, seed=3)
    assert len(insts) == 30 and all(6 <= i.n <= 14 for i in insts)


def test_gen_halin_of_size_is_close():
    inst = gen_halin_of_size(2000, seed=1)
    assert 1500 <= inst.n <= 2500
