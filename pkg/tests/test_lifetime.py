from dataclasses import replace

import pytest

from jamsched.errors import NoReliableSetError
from jamsched.lifetime import (
    Verdict,
    baseline_lifetime,
    baseline_slots,
    find_disjoint_reliable_subsets,
    infinite_lifetime_certificate,
    min_active_jammers,
    min_reliable_set,
    round_robin_slots,
)
from jamsched.oracles import reliable_subsets
from jamsched.schedule import batteries, replay
from jamsched.sinr import active_count_bounds, constraint_field

from worlds import ORACLE_CFG, oracle_world, phase_batteries, replicated_world, toy_world


@pytest.mark.parametrize("seed", range(10))
def test_l_jam_matches_enumeration(seed):
    world = oracle_world(seed, n=10)
    subsets = reliable_subsets(world, ORACLE_CFG)
    if not subsets:
        with pytest.raises(NoReliableSetError):
            min_active_jammers(world, ORACLE_CFG)
        return
    assert min_active_jammers(world, ORACLE_CFG) == min(len(s) for s in subsets)
    best = min_reliable_set(world, ORACLE_CFG)
    assert constraint_field(world, ORACLE_CFG).reliable(best)


@pytest.mark.parametrize("seed", range(6))
def test_l_jam_shrinks_with_more_jammers(seed):
    world = oracle_world(seed, n=10)
    fewer = world.with_jammers(world.jammers[:7])
    if min_reliable_set(fewer, ORACLE_CFG) is None:
        return
    assert min_active_jammers(world, ORACLE_CFG) <= min_active_jammers(fewer, ORACLE_CFG)


def test_infinite_certificate_and_replay():
    world, cfg = replicated_world(11, 2)
    cert = infinite_lifetime_certificate(world, cfg)
    assert cert.verdict is Verdict.INFINITE
    assert cert.l_jam == 2 and cert.required == 2 * (cfg.c + 1) == cert.rechargeable
    assert len(cert.plan) == cfg.c + 1
    f = constraint_field(world, cfg)
    seen = set()
    for s in cert.plan:
        assert f.reliable(s) and not seen & s
        seen |= s
    # from full batteries the run settles after one period and is periodic from then on
    period = cfg.c + 1
    one = replay(world, cfg, round_robin_slots(cert.plan, period)).world
    three = replay(world, cfg, round_robin_slots(cert.plan, 3 * period)).world
    assert batteries(one) == batteries(three)
    # started on that orbit, three periods restore every battery exactly
    phased = phase_batteries(world, cert.plan, cfg.c)
    assert infinite_lifetime_certificate(phased, cfg).plan == cert.plan
    run = replay(phased, cfg, round_robin_slots(cert.plan, 3 * period))
    assert batteries(run.world) == batteries(phased)
    assert all(j.battery >= cfg.c for j in run.world.jammers)


def test_necessary_fail():
    world, cfg = replicated_world(3, 2)
    cert = infinite_lifetime_certificate(world, cfg)
    assert cert.verdict is Verdict.NECESSARY_FAIL
    assert cert.rechargeable == 6 and cert.required == 22 and cert.l_jam == 2


def test_no_reliable_set_certificate():
    world = oracle_world(4)
    cfg = replace(ORACLE_CFG, delta2=0.1)
    cert = infinite_lifetime_certificate(world, cfg)
    assert cert.verdict is Verdict.NECESSARY_FAIL
    assert cert.required is None and cert.l_jam is None


def test_not_found_when_one_spot_is_scarce():
    world, cfg = replicated_world(11, 2, west=1)
    cert = infinite_lifetime_certificate(world, cfg)
    assert cert.verdict is Verdict.NOT_FOUND
    assert cert.plan == ()
    assert len(cert.found) < cfg.c + 1


def test_peeling_returns_disjoint_sets():
    world, cfg = replicated_world(5, 2)
    found = find_disjoint_reliable_subsets(world, cfg, 99)
    assert len(found) == 5
    assert len(frozenset().union(*found)) == sum(len(s) for s in found)
    with pytest.raises(ValueError):
        find_disjoint_reliable_subsets(world, cfg, 0)


def test_unrechargeable_world_never_infinite():
    world = oracle_world(1)
    cert = infinite_lifetime_certificate(world, ORACLE_CFG)
    assert cert.verdict is Verdict.NECESSARY_FAIL and cert.rechargeable == 0


def test_baseline_examples():
    world, cfg = toy_world()
    assert baseline_lifetime(world, cfg) == 2
    slots = baseline_slots(world, cfg)
    assert slots[0] == frozenset(world.ids)
    replay(world, cfg, slots)
    assert baseline_lifetime(oracle_world(4), replace(ORACLE_CFG, delta2=0.1)) == 0
    assert baseline_lifetime(world, cfg, max_slots=1) == 1


@pytest.mark.parametrize("seed", range(8))
def test_baseline_is_min_life_span_when_all_reliable(seed):
    # all jammers on every slot: the run ends when the shortest-lived jammer runs out,
    # unless the survivors are still reliable
    world = oracle_world(seed)
    f = constraint_field(world, ORACLE_CFG)
    life = baseline_lifetime(world, ORACLE_CFG)
    if f.reliable(world.ids):
        assert life >= min(j.battery // ORACLE_CFG.c for j in world.jammers)
    else:
        assert life == 0


@pytest.mark.parametrize("seed", range(6))
def test_l_jam_respects_lower_bound(seed):
    world = oracle_world(seed, n=10)
    lower, upper = active_count_bounds(world, ORACLE_CFG)
    if min_reliable_set(world, ORACLE_CFG) is not None:
        assert lower <= min_active_jammers(world, ORACLE_CFG) <= upper
