"""Container for small linear / integer programs."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from jamsched.errors import ModelError

TAU = 1e-9
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\[\]]*$")


class Relation(str, enum.Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Sense(str, enum.Enum):
    MIN = "minimize"
    MAX = "maximize"


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class Variable:
    name: str
    lower: float = 0.0
    upper: float = math.inf
    integral: bool = False


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[float, ...]
    relation: Relation
    rhs: float
    name: str


@dataclass
class LinearModel:
    """Dense linear model: ``sense  objective . x + constant`` subject to rows.

    Variables are referenced by position; names exist for export and for
    reading assignments back.
    """

    sense: Sense = Sense.MIN
    variables: list[Variable] = field(default_factory=list)
    objective: list[float] = field(default_factory=list)
    constant: float = 0.0
    constraints: list[Constraint] = field(default_factory=list)

    def add_variable(
        self,
        name: str,
        lower: float = 0.0,
        upper: float = math.inf,
        integral: bool = False,
        cost: float = 0.0,
    ) -> int:
        if any(v.name == name for v in self.variables):
            raise ModelError(f"duplicate variable {name!r}")
        self.variables.append(Variable(name, float(lower), float(upper), bool(integral)))
        self.objective.append(float(cost))
        # widen already-present rows with a zero column
        self.constraints = [
            Constraint(c.coefficients + (0.0,), c.relation, c.rhs, c.name)
            for c in self.constraints
        ]
        return len(self.variables) - 1

    def add_binary(self, name: str, cost: float = 0.0) -> int:
        return self.add_variable(name, 0.0, 1.0, True, cost)

    def add_constraint(
        self,
        coefficients: Sequence[float] | Mapping[int | str, float],
        relation: Relation | str,
        rhs: float,
        name: str | None = None,
    ) -> None:
        n = len(self.variables)
        if isinstance(coefficients, Mapping):
            row = [0.0] * n
            index = {v.name: k for k, v in enumerate(self.variables)}
            for key, val in coefficients.items():
                k = index[key] if isinstance(key, str) else key
                if not 0 <= k < n:
                    raise ModelError(f"constraint references undeclared variable {key!r}")
                row[k] += float(val)
        else:
            row = [float(v) for v in coefficients]
            if len(row) != n:
                raise ModelError(f"constraint has {len(row)} coefficients for {n} variables")
        name = name or f"c{len(self.constraints) + 1}"
        self.constraints.append(Constraint(tuple(row), Relation(relation), float(rhs), name))

    def set_objective(
        self,
        coefficients: Sequence[float] | Mapping[int | str, float],
        sense: Sense | str = Sense.MIN,
        constant: float = 0.0,
    ) -> None:
        n = len(self.variables)
        if isinstance(coefficients, Mapping):
            index = {v.name: k for k, v in enumerate(self.variables)}
            obj = [0.0] * n
            for key, val in coefficients.items():
                obj[index[key] if isinstance(key, str) else key] += float(val)
        else:
            obj = [float(v) for v in coefficients]
        if len(obj) != n:
            raise ModelError("objective length does not match variable count")
        self.objective = obj
        self.sense = Sense(sense)
        self.constant = float(constant)

    def validate(self) -> None:
        n = len(self.variables)
        names = set()
        for v in self.variables:
            if not _NAME.match(v.name):
                raise ModelError(f"invalid variable name {v.name!r}")
            if v.name in names:
                raise ModelError(f"duplicate variable {v.name!r}")
            names.add(v.name)
            if math.isnan(v.lower) or math.isnan(v.upper) or v.lower > v.upper:
                raise ModelError(f"variable {v.name!r} has empty bounds")
            if v.integral and not (math.isfinite(v.lower) and math.isfinite(v.upper)):
                raise ModelError(f"integral variable {v.name!r} needs finite bounds")
        if len(self.objective) != n:
            raise ModelError("objective length does not match variable count")
        for c in self.constraints:
            if len(c.coefficients) != n:
                raise ModelError(f"constraint {c.name!r} has wrong width")
            if not all(math.isfinite(a) for a in c.coefficients) or not math.isfinite(c.rhs):
                raise ModelError(f"constraint {c.name!r} has non-finite data")

    def arrays(self):
        """``(c, A, relations, b, lower, upper, integral)`` as numpy arrays."""
        n = len(self.variables)
        A = np.array([c.coefficients for c in self.constraints], dtype=float)
        A = A.reshape(len(self.constraints), n)
        b = np.array([c.rhs for c in self.constraints], dtype=float)
        rel = [c.relation for c in self.constraints]
        lo = np.array([v.lower for v in self.variables], dtype=float)
        hi = np.array([v.upper for v in self.variables], dtype=float)
        integral = np.array([v.integral for v in self.variables], dtype=bool)
        return np.array(self.objective, dtype=float), A, rel, b, lo, hi, integral

    def evaluate(self, x: Sequence[float]) -> float:
        return float(np.dot(self.objective, x)) + self.constant

    def violations(self, x: Sequence[float]) -> list[str]:
        """Names of rows or bounds that ``x`` violates beyond ``TAU * (1 + |rhs|)``."""
        bad = []
        x = np.asarray(x, dtype=float)
        for v, xv in zip(self.variables, x):
            if xv < v.lower - TAU * (1 + abs(v.lower)) or xv > v.upper + TAU * (1 + abs(v.upper)):
                bad.append(v.name)
        for c in self.constraints:
            lhs = float(np.dot(c.coefficients, x))
            tol = TAU * (1 + abs(c.rhs))
            if (
                (c.relation is Relation.LE and lhs > c.rhs + tol)
                or (c.relation is Relation.GE and lhs < c.rhs - tol)
                or (c.relation is Relation.EQ and abs(lhs - c.rhs) > tol)
            ):
                bad.append(c.name)
        return bad


@dataclass(frozen=True)
class IlpSolution:
    status: Status
    assignment: tuple[float, ...] = ()
    objective_value: float = math.nan
    names: tuple[str, ...] = ()
    nodes: int = 0
    exact: bool = True

    def value(self, name: str) -> float:
        return self.assignment[self.names.index(name)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.assignment))
