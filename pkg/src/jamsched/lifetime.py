"""Minimum active count, disjoint rechargeable covers, and the all-active baseline.

If ``c+1`` pairwise disjoint reliable sets of rechargeable jammers exist,
activating them in turn spends ``c`` per jammer per period and charges ``c``
back, so batteries never drop and the network lives forever. Finding such
sets is a disjoint-set-cover question; greedy peeling is used and only its
positive answers are conclusive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from jamsched.energy import apply_slot, classify
from jamsched.errors import NoReliableSetError
from jamsched.ilp import LinearModel, Relation, Status, solve_ilp
from jamsched.sinr import NetworkConfig, constraint_field
from jamsched.world import WorldModel


class Verdict(str, enum.Enum):
    INFINITE = "Infinite"
    NECESSARY_FAIL = "FiniteNecessaryFail"
    NOT_FOUND = "FiniteNotFound"


@dataclass(frozen=True)
class LifetimeCertificate:
    verdict: Verdict
    plan: tuple[frozenset[int], ...] = ()
    rechargeable: int = 0
    required: int | None = None  # (c+1) * L_jam, None when no reliable set exists
    found: tuple[frozenset[int], ...] = field(default=(), compare=False)
    l_jam: int | None = None  # size of the smallest reliable set


def min_cardinality_model(world: WorldModel, cfg: NetworkConfig, ids: Iterable[int]):
    """``min sum x`` over ``ids`` subject to both constraint families."""
    ids = tuple(sorted(ids))
    f = constraint_field(world, cfg)
    cols = [f.column[j] for j in ids]
    model = LinearModel()
    for j in ids:
        model.add_binary(f"c[{j}]", cost=1.0)
    for k in range(f.storage_gain.shape[0]):
        model.add_constraint(f.storage_gain[k, cols], Relation.LE, f.storage_cap, name=f"s{k}")
    for k in range(f.fence_gain.shape[0]):
        model.add_constraint(
            f.fence_gain[k, cols], Relation.GE, float(f.fence_demand[k]), name=f"f{k}"
        )
    return model, ids


def min_reliable_set(
    world: WorldModel, cfg: NetworkConfig, ids: Iterable[int] | None = None
) -> frozenset[int] | None:
    """A smallest reliable subset of ``ids`` (default: all jammers), or ``None``."""
    model, ids = min_cardinality_model(world, cfg, world.ids if ids is None else ids)
    sol = solve_ilp(model)
    if sol.status is not Status.OPTIMAL:
        return None
    return frozenset(j for j, v in zip(ids, sol.assignment) if v > 0.5)


def min_active_jammers(world: WorldModel, cfg: NetworkConfig) -> int:
    """``L_jam``: the size of the smallest reliable set."""
    best = min_reliable_set(world, cfg)
    if best is None:
        raise NoReliableSetError("no subset of the deployed jammers is reliable")
    return len(best)


def find_disjoint_reliable_subsets(
    world: WorldModel, cfg: NetworkConfig, target: int
) -> list[frozenset[int]]:
    """Peel smallest reliable sets off the rechargeable jammers, up to ``target`` of them.

    A short list means peeling got stuck, not that ``target`` sets are impossible.
    """
    if target < 1:
        raise ValueError("target must be >= 1")
    remaining = {j.id for j in world.jammers if j.rechargeable}
    found: list[frozenset[int]] = []
    while remaining and len(found) < target:
        best = min_reliable_set(world, cfg, remaining)
        if best is None:
            break
        found.append(best)
        remaining -= best
    return found


def infinite_lifetime_certificate(world: WorldModel, cfg: NetworkConfig) -> LifetimeCertificate:
    n_r = sum(1 for j in world.jammers if j.rechargeable)
    smallest = min_reliable_set(world, cfg)
    if smallest is None:
        return LifetimeCertificate(Verdict.NECESSARY_FAIL, rechargeable=n_r, required=None)
    required = (cfg.c + 1) * len(smallest)
    if n_r < required:
        return LifetimeCertificate(
            Verdict.NECESSARY_FAIL, rechargeable=n_r, required=required, l_jam=len(smallest)
        )
    found = find_disjoint_reliable_subsets(world, cfg, cfg.c + 1)
    if len(found) == cfg.c + 1:
        return LifetimeCertificate(
            Verdict.INFINITE, tuple(found), n_r, required, tuple(found), len(smallest)
        )
    return LifetimeCertificate(Verdict.NOT_FOUND, (), n_r, required, tuple(found), len(smallest))


def round_robin_slots(plan, slots: int) -> list[frozenset[int]]:
    return [plan[t % len(plan)] for t in range(slots)]


def baseline_slots(
    world: WorldModel, cfg: NetworkConfig, max_slots: int = 100_000
) -> list[frozenset[int]]:
    """Slots of the all-active run: every alive jammer, every slot.

    Stops at the first slot whose all-alive set is unreliable, or at ``max_slots``.
    """
    f = constraint_field(world, cfg)
    jammers = world.jammers
    slots: list[frozenset[int]] = []
    while len(slots) < max_slots:
        alive = classify(jammers, cfg).alive
        if not f.reliable(alive):
            break
        jammers = apply_slot(jammers, alive, cfg)
        slots.append(frozenset(alive))
    return slots


def baseline_lifetime(world: WorldModel, cfg: NetworkConfig, max_slots: int = 100_000) -> int:
    """Slots survived by switching on every alive jammer each slot."""
    return len(baseline_slots(world, cfg, max_slots))
