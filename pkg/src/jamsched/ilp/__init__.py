"""Small exact linear and integer programming."""

from jamsched.ilp.bnb import solve_ilp
from jamsched.ilp.lp import solve_lp
from jamsched.ilp.model import (
    Constraint,
    IlpSolution,
    LinearModel,
    Relation,
    Sense,
    Status,
    Variable,
)
from jamsched.ilp.text_format import export_model, parse_model

__all__ = [
    "Constraint",
    "IlpSolution",
    "LinearModel",
    "Relation",
    "Sense",
    "Status",
    "Variable",
    "export_model",
    "parse_model",
    "solve_ilp",
    "solve_lp",
]
