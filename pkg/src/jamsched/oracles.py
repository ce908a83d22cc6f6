"""Brute-force references used to check the schedulers.

Everything here enumerates; sizes are capped and overruns raise
``ResourceError``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from jamsched.errors import ResourceError
from jamsched.sinr import NetworkConfig, constraint_field
from jamsched.world import WorldModel

MIS_LIMIT = 20


def reliable_subsets(
    world: WorldModel, cfg: NetworkConfig, max_jammers: int = 16
) -> list[frozenset[int]]:
    """Every reliable subset, by testing all ``2^n`` masks at once."""
    n = len(world.jammers)
    if n > max_jammers:
        raise ResourceError(f"{n} jammers exceed the subset enumeration limit {max_jammers}")
    f = constraint_field(world, cfg)
    masks = np.array(list(itertools.product((0.0, 1.0), repeat=n))).reshape(-1, n)
    ok = np.all(masks @ f.storage_gain.T <= f.storage_cap + f.storage_tol, axis=1)
    ok &= np.all(masks @ f.fence_gain.T >= f.fence_demand - f.fence_tol, axis=1)
    ids = world.ids
    out = [frozenset(ids[i] for i in np.flatnonzero(m)) for m in masks[ok]]
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


def exhaustive_optimal_lifetime(
    world: WorldModel,
    cfg: NetworkConfig,
    state_cap: int = 500_000,
    max_jammers: int = 8,
    max_lifespan: int = 3,
) -> float:
    """Longest possible schedule, by memoised search over battery vectors.

    ``value(state)`` is 0 when no reliable set of alive jammers exists and
    otherwise 1 plus the best value over the states reachable in one slot.
    Rechargeable jammers can bring a state back; reaching a state that is
    still being expanded means a cycle, and the result is ``inf``.
    """
    n = len(world.jammers)
    if n > max_jammers:
        raise ResourceError(f"{n} jammers exceed the oracle limit {max_jammers}")
    c = cfg.c
    if any(j.capacity // c > max_lifespan for j in world.jammers):
        raise ResourceError(f"a jammer's life span exceeds the oracle limit {max_lifespan}")
    idx = {jid: k for k, jid in enumerate(world.ids)}
    masks = [sum(1 << idx[j] for j in s) for s in reliable_subsets(world, cfg, max_jammers)]
    rech = [j.rechargeable for j in world.jammers]
    cap = [j.capacity for j in world.jammers]

    memo: dict[tuple[int, ...], float] = {}
    ON_STACK = -1.0

    def step(state, mask):
        out = list(state)
        for k in range(n):
            if mask >> k & 1:
                out[k] -= c
            elif rech[k] and out[k] < cap[k]:
                out[k] += 1
        return tuple(out)

    # explicit stack: (state, successor iterator, best so far)
    def value(root):
        stack = []

        def push(state):
            if len(memo) >= state_cap:
                raise ResourceError(f"more than {state_cap} battery states")
            memo[state] = ON_STACK
            alive = sum(1 << k for k in range(n) if state[k] >= c)
            succ = iter([m for m in masks if m & alive == m])
            stack.append([state, succ, 0.0])

        push(root)
        result = 0.0
        while stack:
            frame = stack[-1]
            state, succ, best = frame
            nxt = next(succ, None)
            if nxt is None:
                stack.pop()
                memo[state] = best
                result = best
                if stack:
                    stack[-1][2] = max(stack[-1][2], 1.0 + best)
                continue
            child = step(state, nxt)
            known = memo.get(child)
            if known is None:
                push(child)
            elif known == ON_STACK:
                frame[2] = math.inf
            else:
                frame[2] = max(best, 1.0 + known)
        return result

    start = tuple(j.battery for j in world.jammers)
    return value(start)


@dataclass(frozen=True)
class ConflictGraph:
    vertices: tuple[frozenset[int], ...]
    edges: frozenset[tuple[int, int]]  # index pairs (i, j) with i < j

    def neighbours(self) -> list[int]:
        """Adjacency as bitmasks over vertex indices."""
        adj = [0] * len(self.vertices)
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj


def build_conflict_graph(sets) -> ConflictGraph:
    """One vertex per set, an edge wherever two sets share a jammer."""
    vertices = tuple(frozenset(s) for s in sets)
    edges = frozenset(
        (i, j)
        for i, j in itertools.combinations(range(len(vertices)), 2)
        if vertices[i] & vertices[j]
    )
    return ConflictGraph(vertices, edges)


def max_independent_set(graph: ConflictGraph, limit: int = MIS_LIMIT) -> int:
    """Exact maximum independent set size.

    Vertices of degree 0 or 1 are always taken (some optimum contains
    them); otherwise branch on a highest-degree vertex, dropping it or
    taking it with its neighbourhood.
    """
    m = len(graph.vertices)
    if m > limit:
        raise ResourceError(f"{m} vertices exceed the independent-set limit {limit}")
    adj = graph.neighbours()

    def solve(alive: int) -> int:
        taken = 0
        while alive:
            best_v, best_deg = -1, -1
            low = -1
            rest = alive
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                deg = bin(adj[v] & alive).count("1")
                if deg <= 1:
                    low = v
                    break
                if deg > best_deg:
                    best_v, best_deg = v, deg
            if low >= 0:
                taken += 1
                alive &= ~(adj[low] | (1 << low))
                continue
            v = best_v
            without = solve(alive & ~(1 << v))
            with_v = 1 + solve(alive & ~(adj[v] | (1 << v)))
            return taken + max(without, with_v)
        return taken

    return solve((1 << m) - 1)
