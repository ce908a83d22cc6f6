import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from jamsched.errors import ModelError, ResourceError
from jamsched.ilp import (
    LinearModel,
    Relation,
    Sense,
    Status,
    export_model,
    parse_model,
    solve_ilp,
    solve_lp,
)


def toy_model() -> LinearModel:
    m = LinearModel(Sense.MAX)
    for k in (1, 2, 3):
        m.add_variable(f"n{k}", 0, 2, integral=True, cost=1)
    rows = [
        {"n1": 1, "n2": 1},
        {"n1": 1, "n3": 1},
        {"n1": 1, "n2": 1},
        {"n2": 1},
        {"n1": 1},
        {"n3": 1},
    ]
    for k, r in enumerate(rows):
        m.add_constraint(r, Relation.LE, 2, name=f"w{k}")
    return m


def random_model(rng, n_vars=None, n_rows=None, sense=None) -> LinearModel:
    n = int(rng.integers(1, 7)) if n_vars is None else n_vars
    m = LinearModel(sense or (Sense.MAX if rng.random() < 0.5 else Sense.MIN))
    for k in range(n):
        m.add_binary(f"x{k}", cost=float(rng.integers(-5, 6)))
    for r in range(int(rng.integers(0, 7)) if n_rows is None else n_rows):
        rel = [Relation.LE, Relation.GE, Relation.EQ][int(rng.integers(0, 3))]
        m.add_constraint(
            [float(v) for v in rng.integers(-5, 6, size=n)], rel, float(rng.integers(-5, 6))
        )
    return m


def enumerate_best(m: LinearModel):
    best = None
    for x in itertools.product((0.0, 1.0), repeat=len(m.variables)):
        if m.violations(x):
            continue
        v = m.evaluate(x)
        if best is None or (v > best if m.sense is Sense.MAX else v < best):
            best = v
    return best


def test_lp_examples():
    m = LinearModel(Sense.MAX)
    m.add_variable("x", 0, 10, cost=1)
    m.add_constraint({"x": 1}, "<=", 2.5)
    sol = solve_lp(m)
    assert sol.status is Status.OPTIMAL and sol.value("x") == pytest.approx(2.5)

    m = LinearModel()
    m.add_variable("x", cost=1)
    m.add_constraint({"x": 1}, ">=", 2)
    m.add_constraint({"x": 1}, "<=", 1)
    assert solve_lp(m).status is Status.INFEASIBLE
    assert solve_ilp(m).status is Status.INFEASIBLE

    m = LinearModel(Sense.MAX)
    m.add_variable("x", cost=1)
    m.add_variable("y", cost=0)
    m.add_constraint({"x": 1, "y": -1}, "<=", 1)
    assert solve_lp(m).status is Status.UNBOUNDED


def test_toy_model():
    m = toy_model()
    sol = solve_ilp(m)
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == 4
    assert sol.assignment == (0.0, 2.0, 2.0)
    assert m.violations([1, 1, 1]) == [] and m.evaluate([1, 1, 1]) == 3
    relax = solve_lp(m)
    assert relax.objective_value >= 4 - 1e-9


@pytest.mark.parametrize("seed", range(100))
def test_random_binary_programs_match_enumeration(seed):
    m = random_model(np.random.default_rng(seed))
    sol = solve_ilp(m)
    best = enumerate_best(m)
    if best is None:
        assert sol.status is Status.INFEASIBLE
        return
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == best
    assert m.violations(sol.assignment) == []
    relax = solve_lp(m)
    assert relax.status is Status.OPTIMAL
    if m.sense is Sense.MAX:
        assert relax.objective_value >= best - 1e-9
    else:
        assert relax.objective_value <= best + 1e-9


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_lp_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    m = LinearModel(Sense.MIN)
    for k in range(n):
        lo = float(rng.integers(-3, 1))
        hi = lo + float(rng.integers(0, 6))
        m.add_variable(f"x{k}", lo, hi, cost=float(rng.normal()))
    for _ in range(int(rng.integers(0, 7))):
        rel = [Relation.LE, Relation.GE, Relation.EQ][int(rng.integers(0, 3))]
        m.add_constraint(list(rng.normal(size=n)), rel, float(rng.normal()))
    c, A, rel, b, lo, hi, _ = m.arrays()
    ub_rows = [A[i] if r is Relation.LE else -A[i] for i, r in enumerate(rel) if r is not Relation.EQ]
    ub_rhs = [b[i] if r is Relation.LE else -b[i] for i, r in enumerate(rel) if r is not Relation.EQ]
    eq = [i for i, r in enumerate(rel) if r is Relation.EQ]
    ref = linprog(
        c,
        A_ub=np.array(ub_rows).reshape(-1, n) if ub_rows else None,
        b_ub=ub_rhs or None,
        A_eq=A[eq] if eq else None,
        b_eq=b[eq] if eq else None,
        bounds=list(zip(lo, hi)),
        method="highs",
    )
    sol = solve_lp(m)
    if ref.status == 2:
        assert sol.status is Status.INFEASIBLE
    else:
        assert ref.status == 0
        assert sol.status is Status.OPTIMAL
        assert sol.objective_value == pytest.approx(ref.fun, abs=1e-7, rel=1e-7)
        assert m.violations(sol.assignment) == []


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_general_integers_match_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    m = LinearModel(Sense.MAX)
    for k in range(n):
        m.add_variable(f"y{k}", 0, int(rng.integers(1, 4)), integral=True, cost=float(rng.integers(-3, 6)))
    for _ in range(int(rng.integers(1, 4))):
        m.add_constraint(list(rng.integers(-2, 5, size=n).astype(float)), "<=", float(rng.integers(0, 9)))
    best = None
    for x in itertools.product(*(range(int(v.upper) + 1) for v in m.variables)):
        if not m.violations(x):
            best = m.evaluate(x) if best is None else max(best, m.evaluate(x))
    sol = solve_ilp(m)
    assert (sol.status is Status.OPTIMAL) == (best is not None)
    if best is not None:
        assert sol.objective_value == best


def test_continuous_variables_in_ilp():
    # mixed model: y continuous, x binary
    m = LinearModel(Sense.MAX)
    m.add_binary("x", cost=5)
    m.add_variable("y", 0, 10, cost=1)
    m.add_constraint({"x": 4, "y": 1}, "<=", 5.5)
    sol = solve_ilp(m)
    assert sol.objective_value == pytest.approx(6.5)  # 5 + 1.5 beats 0 + 5.5
    assert sol.value("x") == 1


def test_determinism():
    m = random_model(np.random.default_rng(7), 6, 5)
    assert solve_ilp(m) == solve_ilp(m)
    assert solve_lp(m) == solve_lp(m)


def test_node_limit():
    rng = np.random.default_rng(3)
    m = LinearModel(Sense.MAX)
    weights = rng.integers(20, 60, size=24)
    for k, w in enumerate(weights):
        m.add_binary(f"x{k}", cost=float(w) + rng.random())
    m.add_constraint(list(map(float, weights)), "<=", float(weights.sum() // 2) + 0.5)
    with pytest.raises(ResourceError) as err:
        solve_ilp(m, node_limit=3, heuristics=False)
    partial = err.value.partial
    assert partial is None or partial.status is Status.OPTIMAL


def test_rounding_mode_is_flagged():
    m = toy_model()
    sol = solve_ilp(m, method="rounding")
    assert not sol.exact
    if sol.status is Status.OPTIMAL:
        assert m.violations(sol.assignment) == []
        assert sol.objective_value <= 4
    with pytest.raises(ValueError):
        solve_ilp(m, method="magic")


def test_model_validation():
    m = LinearModel()
    m.add_variable("x", 0, math.inf, integral=True)
    with pytest.raises(ModelError):
        solve_ilp(m)
    m = LinearModel()
    m.add_binary("x")
    with pytest.raises(ModelError):
        m.add_binary("x")
    with pytest.raises(ModelError):
        m.add_constraint([1.0, 2.0], "<=", 1)
    with pytest.raises(ModelError):
        m.add_constraint({5: 1.0}, "<=", 1)


def test_export_round_trip():
    m = toy_model()
    text = export_model(m)
    assert sum(1 for line in text.splitlines() if line.startswith("  w")) == 6
    integer_block = text.split("integer\n")[1].split("end")[0].split()
    assert integer_block == ["n1", "n2", "n3"]
    again = parse_model(text)
    assert export_model(again) == text
    assert solve_ilp(again) == solve_ilp(m)


def test_export_empty_constraints():
    m = LinearModel(Sense.MIN)
    m.add_variable("x", -1.5, 2.0, cost=-0.1)
    m.constant = 7.25
    text = export_model(m)
    assert "subject to\nbounds" in text
    assert export_model(parse_model(text)) == text
    assert parse_model(text).constant == 7.25


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_export_fixpoint_random(seed):
    rng = np.random.default_rng(seed)
    m = random_model(rng)
    for k, v in enumerate(m.objective):
        m.objective[k] = v * float(rng.normal())
    m.constant = float(rng.normal())
    text = export_model(m)
    back = parse_model(text)
    assert export_model(back) == text
    assert back.objective == m.objective
    assert [c.coefficients for c in back.constraints] == [c.coefficients for c in m.constraints]


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "\\ jamsched linear model v1\nminimize\n  obj: 1.0 x\nsubject to\nbounds\ninteger\nend\n",
        "\\ jamsched linear model v1\nsideways\n",
    ],
)
def test_parse_errors(bad):
    with pytest.raises(ModelError):
        parse_model(bad)
