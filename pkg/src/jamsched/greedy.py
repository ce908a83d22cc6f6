"""Slot-by-slot scheduling: each slot activates the reliable set of least net energy use."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from jamsched.energy import Classification, charging_credit, classify, energy_delta, apply_slot
from jamsched.errors import ResourceError, SelectionError
from jamsched.ilp import LinearModel, Relation, Sense, Status, solve_ilp
from jamsched.schedule import Schedule, Termination, batteries
from jamsched.sinr import NetworkConfig, constraint_field
from jamsched.world import WorldModel

DEFAULT_MAX_SLOTS = 100_000


@dataclass(frozen=True)
class SlotModel:
    model: LinearModel
    ids: tuple[int, ...]  # jammer id of each variable, in order

    def selection(self, assignment) -> frozenset[int]:
        return frozenset(j for j, v in zip(self.ids, assignment) if v > 0.5)


def slot_costs(cls: Classification, cfg: NetworkConfig) -> dict[int, int]:
    """Objective coefficient of each alive jammer: ``c+1`` for normal rechargeable, else ``c``."""
    c = cfg.c
    return {
        j: c + 1 if (j in cls.rechargeable and j in cls.normal) else c
        for j in sorted(cls.alive)
    }


def build_slot_ilp(
    world: WorldModel, cfg: NetworkConfig, cls: Classification | None = None
) -> SlotModel:
    """Binary ``c[id]`` per alive jammer; one ``<=`` row per storage point, one ``>=`` per fence point.

    The objective constant is minus the charging credit of idle rechargeable
    jammers, so the optimum equals the slot's energy delta.
    """
    cls = classify(world.jammers, cfg) if cls is None else cls
    field = constraint_field(world, cfg)
    costs = slot_costs(cls, cfg)
    ids = tuple(costs)
    cols = [field.column[j] for j in ids]
    model = LinearModel()
    for j in ids:
        model.add_binary(f"c[{j}]", cost=costs[j])
    sg = field.storage_gain[:, cols]
    fg = field.fence_gain[:, cols]
    for k in range(sg.shape[0]):
        model.add_constraint(sg[k], Relation.LE, field.storage_cap, name=f"s{k}")
    for k in range(fg.shape[0]):
        model.add_constraint(fg[k], Relation.GE, float(field.fence_demand[k]), name=f"f{k}")
    rn = cls.rechargeable & cls.normal
    model.constant = -float(len(rn) + charging_credit(cls))
    return SlotModel(model, ids)


def _lowest_ids(slot: SlotModel, value: float, start, node_limit: int):
    """Among selections with objective ``value``, the one with the smallest id sum."""
    model = LinearModel(
        Sense.MIN,
        list(slot.model.variables),
        [float(j) for j in slot.ids],
        0.0,
        list(slot.model.constraints),
    )
    model.add_constraint(slot.model.objective, Relation.LE, value - slot.model.constant, name="delta")
    return solve_ilp(model, node_limit=node_limit, start=start)


def greedy_schedule(
    world: WorldModel,
    cfg: NetworkConfig,
    max_slots: int = DEFAULT_MAX_SLOTS,
    *,
    method: str = "exact",
    prefer_low_ids: bool = False,
    node_limit: int = 200_000,
) -> Schedule:
    """Repeat: classify, solve the slot model, activate the optimum; stop when infeasible.

    Ties between optimal selections follow the solver's branching order; with
    ``prefer_low_ids`` a second model picks the optimum with the smallest id
    sum instead. ``method="rounding"`` swaps in the approximate solver.
    A solver budget overrun raises ``ResourceError`` whose ``partial`` is the
    schedule so far.
    """
    if max_slots < 1:
        raise ValueError("max_slots must be >= 1")
    field = constraint_field(world, cfg)
    slots: list[frozenset[int]] = []
    deltas: list[int] = []
    previous: frozenset[int] = frozenset()
    termination = Termination.SLOT_CAP
    for _ in range(max_slots):
        cls = classify(world.jammers, cfg)
        slot = build_slot_ilp(world, cfg, cls)
        # last slot's set, if still alive, is a cheap first incumbent
        start = None
        if previous and previous <= cls.alive:
            start = np.array([1.0 if j in previous else 0.0 for j in slot.ids])
        try:
            sol = solve_ilp(slot.model, node_limit=node_limit, method=method, start=start)
            if prefer_low_ids and sol.status is Status.OPTIMAL:
                sol = _lowest_ids(slot, sol.objective_value, sol.assignment, node_limit)
        except ResourceError as exc:
            partial = Schedule(tuple(slots), Termination.SLOT_CAP, batteries(world), tuple(deltas))
            raise ResourceError(f"slot {len(slots)}: {exc}", partial=partial) from exc
        if sol.status is not Status.OPTIMAL:
            termination = Termination.DEAD
            break
        chosen = slot.selection(sol.assignment)
        if not field.reliable(chosen):  # pragma: no cover - the rows are the constraints
            raise SelectionError(f"solver picked an unreliable set {sorted(chosen)}")
        delta = energy_delta(chosen, cls, cfg)
        world = world.with_jammers(apply_slot(world.jammers, chosen, cfg))
        slots.append(chosen)
        deltas.append(delta)
        previous = chosen
    return Schedule(tuple(slots), termination, batteries(world), tuple(deltas))
