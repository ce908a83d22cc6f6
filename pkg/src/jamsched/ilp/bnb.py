"""Best-bound branch-and-bound on top of the dense simplex."""

from __future__ import annotations

import heapq
import itertools
import math

import numpy as np

from jamsched.errors import ResourceError
from jamsched.ilp.lp import AT_LOWER, AT_UPPER, BoundedSimplex, minimize, relation_codes
from jamsched.ilp.model import TAU, IlpSolution, LinearModel, Sense, Status

INT_TOL = 1e-6
DEFAULT_NODE_LIMIT = 200_000


class _Rows:
    """Vectorised feasibility test against the original rows."""

    def __init__(self, A, codes, b, lo, hi):
        self.A, self.b, self.lo, self.hi = A, b, lo, hi
        self.le = codes == 0
        self.ge = codes == 1
        self.eq = codes == 2
        self.tol = TAU * (1.0 + np.abs(b))

    def violation(self, x) -> float:
        lhs = self.A @ x
        v = np.zeros_like(lhs)
        v[self.le] = np.maximum(lhs[self.le] - self.b[self.le] - self.tol[self.le], 0.0)
        v[self.ge] = np.maximum(self.b[self.ge] - lhs[self.ge] - self.tol[self.ge], 0.0)
        v[self.eq] = np.maximum(np.abs(lhs[self.eq] - self.b[self.eq]) - self.tol[self.eq], 0.0)
        return float(v.sum())

    def feasible(self, x) -> bool:
        if np.any(x < self.lo - TAU) or np.any(x > self.hi + TAU):
            return False
        return self.violation(x) == 0.0


def solve_ilp(
    model: LinearModel,
    node_limit: int = DEFAULT_NODE_LIMIT,
    method: str = "exact",
    heuristics: bool = True,
    start=None,
) -> IlpSolution:
    """Solve ``model`` honouring integrality flags.

    ``method="exact"`` runs best-bound branch-and-bound (branch on the most
    fractional variable, lowest index on ties; down child before up child)
    and returns a provably optimal solution. Child relaxations are
    re-optimised with the dual simplex from the parent's basis, and
    nonbasic integer variables whose reduced cost alone lifts the bound past
    the incumbent are fixed. ``start`` is an optional assignment tried as
    the first incumbent.

    ``method="rounding"`` solves the relaxation once, rounds it down and
    repairs greedily; its result carries ``exact=False`` and may be
    suboptimal or report Infeasible on feasible models.

    Raises ``ResourceError`` when more than ``node_limit`` relaxations are
    solved; ``error.partial`` holds the incumbent (or ``None``).
    """
    model.validate()
    c, A, rel, b, lo, hi, integral = model.arrays()
    codes = relation_codes(rel)
    sign = -1.0 if model.sense is Sense.MAX else 1.0
    cmin = sign * c
    names = tuple(v.name for v in model.variables)
    rows = _Rows(A, codes, b, lo, hi)

    def result(x, nodes, exact=True):
        if x is None:
            return IlpSolution(Status.INFEASIBLE, names=names, nodes=nodes, exact=exact)
        return IlpSolution(
            Status.OPTIMAL, tuple(float(v) for v in x), model.evaluate(x), names, nodes, exact
        )

    if method == "rounding":
        return _rounding(cmin, A, codes, b, lo, hi, integral, rows, result)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")

    int_idx = np.flatnonzero(integral)
    used = np.flatnonzero(cmin != 0)
    integer_objective = bool(
        np.all(integral[used]) and np.all(cmin[used] == np.round(cmin[used]))
    )
    # integral solutions then take objective values on a grid of spacing g
    g = math.gcd(*(int(abs(v)) for v in cmin[used])) if integer_objective and used.size else 1

    def key(value: float) -> float:
        if integer_objective:
            return g * math.ceil(value / g - INT_TOL * (1.0 + abs(value / g)))
        return value

    def improves(bound: float, incumbent: float) -> bool:
        if integer_objective:
            return bound <= incumbent - 0.5 * g
        return bound < incumbent - TAU * (1.0 + abs(incumbent))

    lp = BoundedSimplex(cmin, A, codes, b)
    root = lp.solve(lo, hi)
    nodes = 1
    if root.status is not Status.OPTIMAL:
        return IlpSolution(root.status, names=names, nodes=nodes)

    best_x, best_val = None, math.inf

    def consider(candidate):
        nonlocal best_x, best_val
        if rows.feasible(candidate):
            val = float(cmin @ candidate)
            if best_x is None or improves(val, best_val):
                best_x, best_val = candidate, val

    if start is not None:
        cand = np.asarray(start, dtype=float)
        if cand.shape == lo.shape and np.all(cand[int_idx] == np.round(cand[int_idx])):
            consider(cand)

    seq = itertools.count()
    heap = [(key(root.objective), next(seq), lo.copy(), hi.copy(), root)]
    all_integral = len(int_idx) == len(lo)

    while heap:
        bound, _, nlo, nhi, res = heapq.heappop(heap)
        if best_x is not None and not improves(bound, best_val):
            break
        x = res.x
        xi = x[int_idx]
        dist = np.abs(xi - np.round(xi))
        frac = dist > INT_TOL
        if not frac.any():
            cand = x.copy()
            cand[int_idx] = np.round(xi)
            consider(cand)
            continue
        if heuristics and all_integral:
            for rounded in (np.round(x), np.ceil(x - INT_TOL), np.floor(x + INT_TOL)):
                consider(np.clip(rounded, nlo, nhi))
        if best_x is not None:
            nlo, nhi = _fix_by_reduced_cost(res, int_idx, nlo, nhi, key, improves, best_val)
        # most fractional; argmax keeps the lowest index on ties
        score = np.where(frac, np.minimum(xi - np.floor(xi), np.ceil(xi) - xi), -1.0)
        j = int(int_idx[int(np.argmax(score))])
        down_hi = nhi.copy()
        down_hi[j] = math.floor(x[j])
        up_lo = nlo.copy()
        up_lo[j] = math.ceil(x[j])
        T = lp.factor(res.basis)
        for clo, chi in ((nlo, down_hi), (up_lo, nhi)):
            nodes += 1
            if nodes > node_limit:
                raise ResourceError(
                    f"branch-and-bound exceeded {node_limit} nodes",
                    partial=result(best_x, nodes) if best_x is not None else None,
                )
            child = lp.solve(clo, chi, res.basis, res.state, T)
            if child.status is not Status.OPTIMAL:
                continue
            k = key(child.objective)
            if best_x is None or improves(k, best_val):
                heapq.heappush(heap, (k, next(seq), clo, chi, child))
    return result(best_x, nodes)


def _fix_by_reduced_cost(res, int_idx, lo, hi, key, improves, incumbent):
    """Fix nonbasic integer variables that cannot move without losing to the incumbent.

    Moving variable ``j`` one unit off its bound raises the relaxation value
    by at least ``|d_j|``.
    """
    d = res.reduced[int_idx]
    st = res.state[int_idx]
    lo, hi = lo.copy(), hi.copy()
    for j, dj, sj in zip(int_idx, d, st):
        if lo[j] == hi[j]:
            continue
        if sj == AT_LOWER and dj > 0 and not improves(key(res.objective + dj), incumbent):
            hi[j] = lo[j]
        elif sj == AT_UPPER and dj < 0 and not improves(key(res.objective - dj), incumbent):
            lo[j] = hi[j]
    return lo, hi


def _rounding(cmin, A, codes, b, lo, hi, integral, rows, result):
    status, x = minimize(cmin, A, codes, b, lo, hi)
    if status is not Status.OPTIMAL:
        return IlpSolution(status, names=result(None, 1).names, nodes=1, exact=False)
    x = x.copy()
    idx = np.flatnonzero(integral)
    x[idx] = np.floor(x[idx] + INT_TOL)
    current = rows.violation(x)
    while current > 0:
        best = None
        for j in idx:
            for step in (1.0, -1.0):
                v = x[j] + step
                if v < lo[j] or v > hi[j]:
                    continue
                x[j] = v
                viol = rows.violation(x)
                x[j] -= step
                if viol < current:
                    cand = (viol, step * cmin[j], int(j), step)
                    if best is None or cand < best:
                        best = cand
        if best is None:
            return result(None, 1, exact=False)
        current = best[0]
        x[best[2]] += best[3]
    return result(x, 1, exact=False)
