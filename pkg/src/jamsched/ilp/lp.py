"""Bounded-variable simplex on a dense tableau.

Each row gets its own slack so the system reads ``A x + s = b``; the slack
bounds encode the relation (``<=``: s >= 0, ``>=``: s <= 0, ``=``: s = 0).
Nonbasic columns rest at a bound, or at zero when free.

Pricing is Dantzig's largest reduced cost, switching to Bland's lowest-index
rule right after any degenerate pivot. A cycle can only consist of
degenerate pivots, and within such a run every pivot but the first follows
Bland's rule, so the method terminates. The dual method (used to re-optimise
after a bound change) applies the same switch to the leaving row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from jamsched.errors import ResourceError
from jamsched.ilp.model import IlpSolution, LinearModel, Relation, Sense, Status

PIVOT_TOL = 1e-9
COST_TOL = 1e-9
FEAS_TOL = 1e-9
DEGENERATE = 1e-12
MAX_PIVOTS = 200_000

_LE, _GE, _EQ = 0, 1, 2
_CODES = {Relation.LE: _LE, Relation.GE: _GE, Relation.EQ: _EQ}

BASIC, AT_LOWER, AT_UPPER, FREE = 0, 1, 2, 3


def relation_codes(relations) -> np.ndarray:
    return np.array([_CODES[Relation(r)] for r in relations], dtype=np.int8)


@dataclass
class LpResult:
    status: Status
    x: np.ndarray | None = None  # structural values
    objective: float = math.nan
    basis: np.ndarray | None = None
    state: np.ndarray | None = None  # per-column BASIC / AT_LOWER / ...
    reduced: np.ndarray | None = None  # structural reduced costs
    pivots: int = 0


class _Tableau:
    """``T = B^-1 [A | I | b]`` plus basis bookkeeping."""

    def __init__(self, T, basis, state, lo, hi):
        self.T, self.basis, self.state, self.lo, self.hi = T, basis, state, lo, hi
        self.pivots = 0

    @property
    def ncols(self) -> int:
        return self.T.shape[1] - 1

    def values(self) -> np.ndarray:
        st = self.state
        x = np.where(st == AT_LOWER, self.lo, np.where(st == AT_UPPER, self.hi, 0.0))
        x[st == BASIC] = 0.0
        x[self.basis] = self.T[:, -1] - self.T[:, :-1] @ x
        return x

    def reduced_costs(self, cost) -> np.ndarray:
        return cost - cost[self.basis] @ self.T[:, :-1]

    def pivot(self, r: int, q: int) -> None:
        T = self.T
        T[r] /= T[r, q]
        col = T[:, q].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, q] = 0.0
        T[r, q] = 1.0
        self.basis[r] = q
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise ResourceError(f"simplex exceeded {MAX_PIVOTS} pivots")

    def primal(self, cost) -> Status:
        m = len(self.basis)
        movable = self.hi > self.lo
        bland = False
        while True:
            x = self.values()
            d = self.reduced_costs(cost)
            st = self.state
            inc = movable & ((st == AT_LOWER) | (st == FREE)) & (d < -COST_TOL)
            dec = movable & ((st == AT_UPPER) | (st == FREE)) & (d > COST_TOL)
            cand = np.flatnonzero(inc | dec)
            if cand.size == 0:
                return Status.OPTIMAL
            q = int(cand[0]) if bland else int(cand[np.argmax(np.abs(d[cand]))])
            sign = 1.0 if inc[q] else -1.0
            alpha = sign * self.T[:, q]  # basic values move by -theta * alpha
            xb = x[self.basis]
            lob, hib = self.lo[self.basis], self.hi[self.basis]
            ratio = np.full(m, math.inf)
            down = alpha > PIVOT_TOL
            up = alpha < -PIVOT_TOL
            ratio[down] = (xb[down] - lob[down]) / alpha[down]
            ratio[up] = (hib[up] - xb[up]) / -alpha[up]
            ratio = np.maximum(ratio, 0.0)
            best = ratio.min() if m else math.inf
            flip = self.hi[q] - self.lo[q]
            if flip <= best:
                if math.isinf(flip):
                    return Status.UNBOUNDED
                self.state[q] = AT_UPPER if inc[q] else AT_LOWER
                bland = flip <= DEGENERATE
                continue
            tied = np.flatnonzero(ratio <= best + DEGENERATE * (1.0 + best))
            r = int(tied[np.argmin(self.basis[tied])])
            leaving = int(self.basis[r])
            self.pivot(r, q)
            self.state[q] = BASIC
            self.state[leaving] = AT_LOWER if down[r] else AT_UPPER
            bland = best <= DEGENERATE

    def dual_feasible(self, cost) -> bool:
        d = self.reduced_costs(cost)
        st = self.state
        movable = self.hi > self.lo
        bad = movable & (
            (((st == AT_LOWER) | (st == FREE)) & (d < -COST_TOL))
            | (((st == AT_UPPER) | (st == FREE)) & (d > COST_TOL))
        )
        return not bad.any()

    def dual(self, cost) -> Status:
        """Dual simplex from a dual-feasible basis: OPTIMAL or INFEASIBLE."""
        movable = self.hi > self.lo
        bland = False
        while True:
            x = self.values()
            xb = x[self.basis]
            lob, hib = self.lo[self.basis], self.hi[self.basis]
            below = lob - xb
            above = xb - hib
            gap = np.maximum(below, above)
            tol = FEAS_TOL * (1.0 + np.minimum(np.abs(lob), np.abs(hib)))
            cand = np.flatnonzero(gap > tol)
            if cand.size == 0:
                return Status.OPTIMAL
            if bland:
                r = int(cand[np.argmin(self.basis[cand])])
            else:
                r = int(cand[np.argmax(gap[cand])])
            raise_it = below[r] > above[r]
            row = self.T[r, :-1]
            st = self.state
            if raise_it:
                ok = ((st == AT_LOWER) & (row < -PIVOT_TOL)) | ((st == AT_UPPER) & (row > PIVOT_TOL))
            else:
                ok = ((st == AT_LOWER) & (row > PIVOT_TOL)) | ((st == AT_UPPER) & (row < -PIVOT_TOL))
            ok |= (st == FREE) & (np.abs(row) > PIVOT_TOL)
            ok &= movable
            enter = np.flatnonzero(ok)
            if enter.size == 0:
                return Status.INFEASIBLE
            d = self.reduced_costs(cost)
            ratios = np.abs(d[enter]) / np.abs(row[enter])
            best = ratios.min()
            q = int(enter[np.flatnonzero(ratios <= best + DEGENERATE * (1.0 + best))[0]])
            leaving = int(self.basis[r])
            self.pivot(r, q)
            self.state[q] = BASIC
            self.state[leaving] = AT_LOWER if raise_it else AT_UPPER
            bland = best <= DEGENERATE


class BoundedSimplex:
    """Row-scaled LP ``min c.x  s.t.  A x (rel) b,  lo <= x <= hi``.

    The constraint data is fixed at construction; :meth:`solve` takes the
    variable bounds so branch-and-bound can re-solve with tightened bounds,
    optionally warm-started from an earlier basis.
    """

    def __init__(self, c, A, rel, b):
        self.c = np.asarray(c, dtype=float)
        n = self.n = self.c.size
        b = np.asarray(b, dtype=float)
        self.m = m = b.size
        A = np.asarray(A, dtype=float).reshape(m, n)
        scale = np.abs(A).max(axis=1) if n else np.zeros(m)
        scale[scale <= 0] = 1.0
        self.A = np.hstack([A / scale[:, None], np.eye(m)])
        self.b = b / scale
        rel = np.asarray(rel, dtype=np.int8)
        self.slack_lo = np.where(rel == _GE, -math.inf, 0.0)
        self.slack_hi = np.where(rel == _LE, math.inf, 0.0)
        self.cost = np.concatenate([self.c, np.zeros(m)])

    def _bounds(self, lo, hi):
        return (
            np.concatenate([np.asarray(lo, dtype=float), self.slack_lo]),
            np.concatenate([np.asarray(hi, dtype=float), self.slack_hi]),
        )

    def _result(self, tab: _Tableau, status: Status) -> LpResult:
        if status is not Status.OPTIMAL:
            return LpResult(status, pivots=tab.pivots)
        x = tab.values()
        d = tab.reduced_costs(self.cost)
        xs = x[: self.n].copy()
        return LpResult(
            Status.OPTIMAL,
            xs,
            float(self.c @ xs),
            tab.basis.copy(),
            tab.state.copy(),
            d[: self.n].copy(),
            tab.pivots,
        )

    def factor(self, basis):
        """Tableau ``B^-1 [A | I | b]`` for ``basis``, or ``None`` if singular."""
        try:
            T = np.linalg.solve(self.A[:, basis], np.hstack([self.A, self.b[:, None]]))
        except np.linalg.LinAlgError:
            return None
        return T if np.all(np.isfinite(T)) else None

    def solve(self, lo, hi, basis=None, state=None, tableau=None) -> LpResult:
        """Optimise under bounds ``lo``/``hi``.

        With ``basis`` and ``state`` from an earlier result the solve starts
        from that basis (``tableau`` may pass its :meth:`factor` to skip the
        refactorisation); a cold start is used when that basis is unusable.
        """
        lo_all, hi_all = self._bounds(lo, hi)
        if np.any(lo_all > hi_all):
            return LpResult(Status.INFEASIBLE)
        if basis is not None:
            T = self.factor(basis) if tableau is None else tableau.copy()
            warm = None if T is None else self._warm(T, lo_all, hi_all, basis, state)
            if warm is not None:
                return warm
        return self._cold(lo_all, hi_all)

    def _warm(self, T, lo, hi, basis, state):
        state = state.copy()
        nb = state != BASIC
        # a nonbasic column keeps its side unless that bound went infinite
        state[nb & (state == AT_UPPER) & ~np.isfinite(hi)] = AT_LOWER
        state[nb & (state == AT_LOWER) & ~np.isfinite(lo)] = AT_UPPER
        state[nb & ~np.isfinite(lo) & ~np.isfinite(hi)] = FREE
        tab = _Tableau(T, np.array(basis, dtype=np.int64), state, lo, hi)
        if not tab.dual_feasible(self.cost):
            return None
        status = tab.dual(self.cost)
        if status is Status.OPTIMAL:
            status = tab.primal(self.cost)
        return self._result(tab, status)

    def _cold(self, lo, hi) -> LpResult:
        m, n = self.m, self.n
        N = n + m
        state = np.full(N, AT_LOWER, dtype=np.int8)
        state[np.isinf(lo) & np.isfinite(hi)] = AT_UPPER
        state[np.isinf(lo) & np.isinf(hi)] = FREE
        xn = np.where(state == AT_LOWER, lo, np.where(state == AT_UPPER, hi, 0.0))[:n]
        resid = self.b - self.A[:, :n] @ xn
        slo, shi = lo[n:], hi[n:]
        tol = FEAS_TOL * (1.0 + np.abs(resid))
        inside = (resid >= slo - tol) & (resid <= shi + tol)
        target = np.clip(resid, slo, shi)
        art_rows = np.flatnonzero(~inside)
        k = art_rows.size
        # artificial columns absorb the residual of rows the slack cannot
        art = np.zeros((m, k))
        art[art_rows, np.arange(k)] = np.sign(resid[art_rows] - target[art_rows])
        A_ext = np.hstack([self.A, art])
        lo_ext = np.concatenate([lo, np.zeros(k)])
        hi_ext = np.concatenate([hi, np.full(k, math.inf)])
        state = np.concatenate([state, np.full(k, BASIC, dtype=np.int8)])
        basis = n + np.arange(m)
        basis[art_rows] = N + np.arange(k)
        state[n + np.arange(m)] = BASIC
        state[n + art_rows] = np.where(resid[art_rows] < slo[art_rows], AT_LOWER, AT_UPPER)
        T = np.hstack([A_ext, self.b[:, None]])
        # the starting basis matrix is diagonal with entries +-1
        diag = A_ext[np.arange(m), basis]
        T = T / diag[:, None]
        tab = _Tableau(T, basis, state, lo_ext, hi_ext)
        if k:
            cost1 = np.concatenate([np.zeros(N), np.ones(k)])
            tab.primal(cost1)
            infeas = tab.values()[N:].sum()
            if infeas > FEAS_TOL * (1.0 + np.abs(self.b).sum()):
                return LpResult(Status.INFEASIBLE, pivots=tab.pivots)
            # drive artificials out; [A | I] has full row rank so a pivot exists
            for r in range(m):
                if tab.basis[r] >= N:
                    row = np.abs(tab.T[r, :N])
                    row[tab.state[:N] == BASIC] = 0.0
                    q = int(np.argmax(row))
                    leaving = int(tab.basis[r])
                    tab.pivot(r, q)
                    tab.state[q] = BASIC
                    tab.state[leaving] = AT_LOWER
            keep = np.r_[np.arange(N), tab.T.shape[1] - 1]
            pivots = tab.pivots
            tab = _Tableau(tab.T[:, keep], tab.basis, tab.state[:N], lo, hi)
            tab.pivots = pivots
        status = tab.primal(self.cost)
        return self._result(tab, status)


def minimize(c, A, rel, b, lo, hi):
    """Minimise ``c.x`` subject to ``A x (rel) b`` and ``lo <= x <= hi``.

    ``rel`` holds codes 0 (<=), 1 (>=), 2 (=). Returns ``(status, x)`` with
    ``x`` ``None`` unless the status is optimal.
    """
    res = BoundedSimplex(c, A, rel, b).solve(lo, hi)
    return res.status, res.x


def solve_lp(model: LinearModel) -> IlpSolution:
    """Optimum of the continuous relaxation (integrality flags are ignored)."""
    model.validate()
    c, A, rel, b, lo, hi, _ = model.arrays()
    sign = -1.0 if model.sense is Sense.MAX else 1.0
    status, x = minimize(sign * c, A, relation_codes(rel), b, lo, hi)
    names = tuple(v.name for v in model.variables)
    if status is not Status.OPTIMAL:
        return IlpSolution(status, names=names)
    return IlpSolution(status, tuple(float(v) for v in x), model.evaluate(x), names)
