"""Scheduling unrechargeable networks through their minimal reliable sets.

A reliable set is minimal when no proper subset is reliable. The storage
constraints only get easier as jammers are removed and the fence
constraints only get harder, so a reliable set is minimal exactly when each
single deletion breaks some fence constraint. Any schedule can swap each
slot for a minimal subset without losing lifetime, so the optimum is a
multiset of minimal sets: choose a count ``n_k`` for each one, subject to
every jammer's life span.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from jamsched.errors import ModelError, ResourceError, UnsupportedModeError
from jamsched.ilp import LinearModel, Sense, Status, solve_ilp
from jamsched.schedule import Schedule, Termination, batteries, replay
from jamsched.sinr import ConstraintField, NetworkConfig, active_count_bounds, constraint_field
from jamsched.world import WorldModel

ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class MinimumReliableSet:
    solutions: tuple[frozenset[int], ...]
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.solutions)


@dataclass(frozen=True)
class MrsSolution:
    family: MinimumReliableSet
    multiplicities: tuple[int, ...]

    @property
    def lifetime(self) -> int:
        return sum(self.multiplicities)


def is_minimal(field: ConstraintField, members) -> bool:
    """Reliable, and every single deletion breaks a fence constraint."""
    members = frozenset(members)
    if not field.reliable(members):
        return False
    return all(not field.fence_ok(members - {j}) for j in members)


def enumerate_minimum_reliable_sets(
    world: WorldModel,
    cfg: NetworkConfig,
    size_cap: int | None = None,
    limit: int = ENUMERATION_LIMIT,
) -> MinimumReliableSet:
    """All minimal reliable sets, in increasing cardinality.

    Cardinalities outside :func:`active_count_bounds` are never visited.
    Within one cardinality a depth-first walk over ids in increasing order
    stops descending as soon as the storage constraints fail (they cannot
    recover) or the fence constraints are met (any extension is not
    minimal), and also when the remaining jammers cannot close the fence
    deficit. With ``size_cap`` the walk stops after that many sets and the
    result is marked truncated.

    Solutions are returned sorted by their sorted id tuples.
    """
    n = len(world.jammers)
    if n == 0:
        return MinimumReliableSet(())
    if n > limit and size_cap is None:
        raise ResourceError(f"{n} jammers exceed the enumeration limit {limit}; pass size_cap")
    field = constraint_field(world, cfg)
    lower, upper = active_count_bounds(world, cfg)
    lower, upper = max(lower, 1), min(upper, n)
    ids = sorted(world.ids)
    cols = [field.column[j] for j in ids]
    sg = field.storage_gain[:, cols]
    fg = field.fence_gain[:, cols]
    # suffix sums: the most the jammers from position i onward can add
    fence_rest = np.vstack([np.cumsum(fg[:, ::-1], axis=1)[:, ::-1].T, np.zeros(fg.shape[0])])
    cap = field.storage_cap + field.storage_tol
    demand = field.fence_demand - field.fence_tol

    found: list[frozenset[int]] = []
    truncated = False

    def walk(start, chosen, s_sum, f_sum, k):
        nonlocal truncated
        if truncated:
            return
        if len(chosen) == k:
            if np.all(f_sum >= demand):
                members = frozenset(ids[i] for i in chosen)
                if all(not field.fence_ok(members - {j}) for j in members):
                    found.append(members)
                    if size_cap is not None and len(found) >= size_cap:
                        truncated = True
            return
        need = k - len(chosen)
        for i in range(start, len(ids) - need + 1):
            s_next = s_sum + sg[:, i]
            if np.any(s_next > cap):
                continue
            f_next = f_sum + fg[:, i]
            if np.any(f_next + fence_rest[i + 1] < demand):
                # later candidates have even less left to add
                break
            if len(chosen) + 1 < k and np.all(f_next >= demand):
                continue  # already reliable below size k: supersets are not minimal
            walk(i + 1, chosen + [i], s_next, f_next, k)
            if truncated:
                return

    for k in range(lower, upper + 1):
        walk(0, [], np.zeros(sg.shape[0]), np.zeros(fg.shape[0]), k)
        if truncated:
            break
    found.sort(key=lambda s: sorted(s))
    return MinimumReliableSet(tuple(found), truncated)


def build_lifespan_ilp(family: MinimumReliableSet, lifespans: Mapping[int, int]) -> LinearModel:
    """``max sum n_k`` with one row ``sum_{k: j in M_k} n_k <= w_j`` per covered jammer."""
    if not family.solutions:
        raise ModelError("the minimal reliable family is empty")
    top = max(lifespans[j] for s in family.solutions for j in s)
    model = LinearModel(sense=Sense.MAX)
    for k in range(len(family.solutions)):
        model.add_variable(f"n{k + 1}", 0, max(top, 0), integral=True, cost=1.0)
    covered = sorted({j for s in family.solutions for j in s})
    for j in covered:
        row = [1.0 if j in s else 0.0 for s in family.solutions]
        model.add_constraint(row, "<=", lifespans[j], name=f"w{j}")
    return model


def solve_mrs(
    world: WorldModel,
    cfg: NetworkConfig,
    size_cap: int | None = None,
    limit: int = ENUMERATION_LIMIT,
    node_limit: int | None = None,
) -> MrsSolution:
    family = enumerate_minimum_reliable_sets(world, cfg, size_cap, limit)
    if not family.solutions:
        return MrsSolution(family, ())
    model = build_lifespan_ilp(family, {j.id: j.lifespan(cfg.c) for j in world.jammers})
    kwargs = {} if node_limit is None else {"node_limit": node_limit}
    sol = solve_ilp(model, **kwargs)
    if sol.status is not Status.OPTIMAL:  # pragma: no cover - n = 0 is always feasible
        raise ModelError(f"life-span model returned {sol.status.value}")
    return MrsSolution(family, tuple(int(round(v)) for v in sol.assignment))


def mrs_schedule(
    world: WorldModel,
    cfg: NetworkConfig,
    size_cap: int | None = None,
    limit: int = ENUMERATION_LIMIT,
) -> Schedule:
    """Optimal schedule for an unrechargeable network.

    Minimal set ``k`` is repeated ``n_k`` times, sets in family order. The
    schedule is replayed through the ledger before it is returned.
    """
    if any(j.rechargeable for j in world.jammers):
        raise UnsupportedModeError("the minimal-set scheduler handles unrechargeable jammers only")
    sol = solve_mrs(world, cfg, size_cap, limit)
    slots = tuple(s for s, count in zip(sol.family.solutions, sol.multiplicities) for _ in range(count))
    run = replay(world, cfg, slots)
    return Schedule(slots, Termination.DEAD, batteries(run.world), run.deltas)
