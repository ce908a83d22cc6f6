import itertools
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jamsched.errors import ParameterError
from jamsched.geometry import Point
from jamsched.oracles import reliable_subsets
from jamsched.sinr import (
    NetworkConfig,
    active_count_bounds,
    constraint_field,
    interference_at,
    is_reliable,
)
from jamsched.world import deploy_jammers, desk_world, jammers_at

from worlds import ORACLE_CFG, oracle_world, toy_world


def test_interference_examples():
    world = desk_world().with_jammers(jammers_at([[10.0, 20.0], [11.0, 20.0]], capacity=10))
    cfg = NetworkConfig(p_j=1.0, gamma=2.0)
    assert interference_at(Point(11.0, 20.0), [], world, cfg) == 0
    assert interference_at(Point(10.0, 21.0), [0], world, cfg) == 1
    assert interference_at(Point(9.0, 20.0), [0, 1], world, cfg) == pytest.approx(1.25)
    with pytest.raises(KeyError):
        interference_at(Point(0, 0), [7], world, cfg)


@given(st.integers(0, 2**10 - 1), st.integers(0, 2**10 - 1))
@settings(max_examples=40, deadline=None)
def test_interference_is_additive(m1, m2):
    world = deploy_jammers(desk_world(), 10, 3)
    a = {k for k in range(10) if m1 >> k & 1}
    b = {k for k in range(10) if m2 >> k & 1} - a
    p = Point(0.0, 7.0)
    cfg = NetworkConfig()
    total = interference_at(p, a | b, world, cfg)
    assert total == pytest.approx(interference_at(p, a, world, cfg) + interference_at(p, b, world, cfg))


def test_empty_set_is_unreliable():
    world = deploy_jammers(desk_world(), 5, 0)
    rep = is_reliable(set(), world, NetworkConfig())
    assert not rep.reliable
    assert rep.worst_fence_margin < 0
    assert rep.violating_point is not None


def test_toy_sets_are_reliable():
    world, cfg = toy_world()
    for s in ({0, 1, 2, 4}, {0, 2, 3}, {1, 5}):
        assert is_reliable(s, world, cfg).reliable


@given(st.integers(0, 2**8 - 1), st.integers(0, 2**8 - 1))
@settings(max_examples=60, deadline=None)
def test_subset_direction(m1, m2):
    world = oracle_world(4, n=8)
    f = constraint_field(world, ORACLE_CFG)
    small = {k for k in range(8) if m1 >> k & 1}
    big = small | {k for k in range(8) if m2 >> k & 1}
    s_small, f_small = f.sums(small)
    s_big, f_big = f.sums(big)
    # every storage row met by the superset is met by the subset, and vice versa for fence rows
    assert np.all(s_small <= s_big + 1e-12)
    assert np.all(f_big >= f_small - 1e-12)
    if not f.storage_ok(small):
        assert not f.storage_ok(big)


@pytest.mark.parametrize("seed", range(6))
def test_joint_power_scaling(seed):
    world = oracle_world(seed, n=8)
    cfg = ORACLE_CFG
    scaled = replace(cfg, p_t=cfg.p_t * 3.7, p_j=cfg.p_j * 3.7)
    assert reliable_subsets(world, cfg) == reliable_subsets(world, scaled)


@pytest.mark.parametrize("seed", range(8))
def test_bounds_contain_every_reliable_cardinality(seed):
    n = 10 + seed % 3
    world = oracle_world(seed, n=n)
    lower, upper = active_count_bounds(world, ORACLE_CFG)
    for s in reliable_subsets(world, ORACLE_CFG):
        assert lower <= len(s) <= upper


def test_bounds_formula_by_hand():
    world = deploy_jammers(desk_world(), 7, 11)
    cfg = NetworkConfig(p_t=1.0, delta1=0.2)
    pos = world.positions()
    upper = min(
        (cfg.p_t / (cfg.p_j * cfg.delta1)) * max(math.dist(j, s) for j in pos) ** cfg.gamma
        for s in world.storage_boundary.points
    )
    lower = max(
        cfg.p_t
        * world.storage.distance_to_boundary(p) ** -cfg.gamma
        / (cfg.p_j * cfg.delta2)
        * min(math.dist(j, p) for j in pos) ** cfg.gamma
        for p in world.fence_boundary.points
    )
    assert active_count_bounds(world, cfg) == (math.ceil(lower), math.floor(upper))


def test_bounds_edge_cases():
    world = deploy_jammers(desk_world(), 5, 0)
    lo, _ = active_count_bounds(world, NetworkConfig(delta2=1e9))
    assert lo in (0, 1)
    single = desk_world().with_jammers(jammers_at([[2.0, 2.0]], capacity=10))
    cfg = NetworkConfig()
    f = constraint_field(single, cfg)
    lo, hi = active_count_bounds(single, cfg)
    # both bounds carry the same tolerance as the reliability test
    assert hi == math.floor(np.min((cfg.storage_cap + f.storage_tol) / f.storage_gain[:, 0]))
    assert lo == math.ceil(np.max((f.fence_demand - f.fence_tol) / f.fence_gain[:, 0]))
    with pytest.raises(ParameterError):
        active_count_bounds(desk_world(), cfg)


def test_report_matches_predicate():
    world = deploy_jammers(desk_world(), 8, 2)
    cfg = ORACLE_CFG
    f = constraint_field(world, cfg)
    for r in range(0, 9):
        for s in itertools.combinations(world.ids, r):
            assert f.report(s).reliable == f.reliable(s)


def test_config_validation():
    with pytest.raises(ParameterError):
        NetworkConfig(p_t=0)
    with pytest.raises(ParameterError):
        NetworkConfig(c=0)
    with pytest.raises(ParameterError):
        NetworkConfig(gamma=float("nan"))
