"""Plain-text rendering of :class:`LinearModel` and the matching parser.

Grammar (one item per line, two-space indent inside sections)::

    model       := header sense objective "subject to" row* "bounds" bound* "integer" name* "end"
    header      := "\\ jamsched linear model v1"
    sense       := "minimize" | "maximize"
    objective   := "  obj: " expr
    row         := "  " NAME ": " expr REL NUMBER
    bound       := "  " NUMBER " <= " NAME " <= " NUMBER
    expr        := term ((" + " | " - ") term)*  |  "0"
    term        := NUMBER " " NAME  |  NUMBER           (a bare number is a constant)
    REL         := "<=" | ">=" | "="

Numbers use Python's shortest round-trip ``repr`` (``inf``/``-inf`` allowed in
bounds), so export -> parse -> export is byte-identical. Zero coefficients
are omitted.
"""

from __future__ import annotations

import math

from jamsched.errors import ModelError
from jamsched.ilp.model import Constraint, LinearModel, Relation, Sense, Variable

HEADER = "\\ jamsched linear model v1"


def _num(v: float) -> str:
    v = float(v)
    if v == 0:
        v = 0.0  # no "-0.0"
    return repr(v)


def _expr(coefficients, names, constant: float = 0.0) -> str:
    parts: list[str] = []
    for a, name in zip(coefficients, names):
        if a == 0:
            continue
        if not parts:
            parts.append(f"{_num(a)} {name}")
        else:
            parts.append(f"{'-' if a < 0 else '+'} {_num(abs(a))} {name}")
    if constant != 0:
        if not parts:
            parts.append(_num(constant))
        else:
            parts.append(f"{'-' if constant < 0 else '+'} {_num(abs(constant))}")
    return " ".join(parts) if parts else "0"


def export_model(model: LinearModel) -> str:
    model.validate()
    names = [v.name for v in model.variables]
    lines = [HEADER, model.sense.value, f"  obj: {_expr(model.objective, names, model.constant)}"]
    lines.append("subject to")
    for c in model.constraints:
        lines.append(f"  {c.name}: {_expr(c.coefficients, names)} {c.relation.value} {_num(c.rhs)}")
    lines.append("bounds")
    for v in model.variables:
        lines.append(f"  {_num(v.lower)} <= {v.name} <= {_num(v.upper)}")
    lines.append("integer")
    lines.extend(f"  {v.name}" for v in model.variables if v.integral)
    lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_expr(text: str, index: dict[str, int], n: int) -> tuple[list[float], float]:
    coeffs = [0.0] * n
    constant = 0.0
    tokens = text.split()
    if tokens == ["0"]:
        return coeffs, constant
    sign = 1.0
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok in ("+", "-"):
            sign = -1.0 if tok == "-" else 1.0
            i += 1
            continue
        value = sign * float(tok)
        sign = 1.0
        if i + 1 < len(tokens) and tokens[i + 1] not in ("+", "-"):
            name = tokens[i + 1]
            if name not in index:
                raise ModelError(f"unknown variable {name!r}")
            coeffs[index[name]] += value
            i += 2
        else:
            constant += value
            i += 1
    return coeffs, constant


def parse_model(text: str) -> LinearModel:
    """Inverse of :func:`export_model`.

    Variable order comes from the bounds section, so the objective and rows
    are parsed after it.
    """
    lines = [ln.rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("\\")]
    if not lines or lines[-1] != "end":
        raise ModelError("model text must end with 'end'")
    try:
        sense = Sense(lines[0])
        i_st = lines.index("subject to")
        i_bd = lines.index("bounds")
        i_int = lines.index("integer")
    except (ValueError, IndexError) as exc:
        raise ModelError(f"malformed model text: {exc}") from None
    obj_lines = lines[1:i_st]
    if len(obj_lines) != 1 or not obj_lines[0].strip().startswith("obj:"):
        raise ModelError("expected exactly one 'obj:' line")

    variables: list[Variable] = []
    for ln in lines[i_bd + 1 : i_int]:
        parts = ln.split()
        if len(parts) != 5 or parts[1] != "<=" or parts[3] != "<=":
            raise ModelError(f"bad bound line {ln!r}")
        variables.append(Variable(parts[2], float(parts[0]), float(parts[4])))
    integral = {ln.strip() for ln in lines[i_int + 1 : -1]}
    index = {v.name: k for k, v in enumerate(variables)}
    unknown = integral - index.keys()
    if unknown:
        raise ModelError(f"integer section names unknown variables {sorted(unknown)}")
    variables = [
        Variable(v.name, v.lower, v.upper, v.name in integral) for v in variables
    ]
    n = len(variables)

    objective, constant = _parse_expr(obj_lines[0].split(":", 1)[1], index, n)
    constraints = []
    for ln in lines[i_st + 1 : i_bd]:
        name, rest = ln.strip().split(":", 1)
        for rel in (Relation.LE, Relation.GE, Relation.EQ):
            token = f" {rel.value} "
            if token in rest:
                lhs, rhs = rest.rsplit(token, 1)
                break
        else:
            raise ModelError(f"row {name!r} has no relation")
        coeffs, const = _parse_expr(lhs, index, n)
        if const != 0:
            raise ModelError(f"row {name!r} has a constant on the left-hand side")
        constraints.append(Constraint(tuple(coeffs), rel, float(rhs), name.strip()))
    model = LinearModel(sense, variables, objective, constant, constraints)
    model.validate()
    if any(math.isnan(a) for a in objective):
        raise ModelError("NaN in objective")
    return model
