import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import qp_feasible, qp_minimum, qp_value
from strategies import oracle_args, qp_data

from qlin.errors import CutsUnavailableError, InputError
from qlin.linearize import (
    METHODS,
    add_sherali_cuts,
    bp_to_compact,
    lift_bp,
    linearize,
    linearize_bp,
    linearize_bp_compact,
    linearize_bp_relaxed,
    linearize_piecewise,
    size_report,
    verify_lemma31,
)
from qlin.model import Constraint, ModelBuilder
from qlin.qp_core import compute_bounds, iter_binary, make_qp
from qlin.solver import branch_and_bound, solve_lp_relaxation


def _x(result, n):
    return tuple(result.x[f"x_{j + 1}"] for j in range(n))


def test_bp_size_qp_c(qp_c):
    rep = size_report(linearize_bp(qp_c, compute_bounds(qp_c)))
    assert (rep.variables, rep.constraints) == (10, 21)
    assert rep.constraints_by_tag == {"2.4": 2, "2.5": 1, "2.6": 2, "2.7": 4, "2.8": 4, "2.9": 4, "2.10": 4}
    assert sum(rep.constraints_by_tag.values()) == rep.constraints
    assert sum(rep.variables_by_family.values()) == rep.variables


def test_bp_size_qp_a(qp_a):
    rep = size_report(linearize_bp(qp_a, compute_bounds(qp_a)))
    assert rep.variables_by_family == {"x": 2, "gamma": 2, "s_prime": 2}


def test_piecewise_size_qp_c(qp_c):
    rep = size_report(linearize_piecewise(qp_c, compute_bounds(qp_c)))
    assert (rep.variables, rep.constraints) == (6, 9)
    assert rep.constraints_by_tag == {"3.6": 4, "3.9": 1, "3.10": 2, "3.11": 2}


def test_relaxed_smaller_than_bp(qp_c):
    b = compute_bounds(qp_c)
    assert size_report(linearize_bp_relaxed(qp_c, b)).constraints < size_report(linearize_bp(qp_c, b)).constraints


def test_cuts_qp_c(qp_c):
    b = compute_bounds(qp_c)
    base = linearize_bp_relaxed(qp_c, b)
    cut = add_sherali_cuts(base, qp_c, b)
    assert size_report(cut).constraints_by_tag["cut-2.31"] == 2
    assert branch_and_bound(cut).objective == pytest.approx(4)
    assert solve_lp_relaxation(cut).objective >= solve_lp_relaxation(base).objective - 1e-9


def test_cuts_refused_without_quadratic_constraint(qp_a):
    b = compute_bounds(qp_a)
    with pytest.raises(CutsUnavailableError):
        add_sherali_cuts(linearize_bp_relaxed(qp_a, b), qp_a, b)


def test_size_report_empty_model():
    rep = size_report(ModelBuilder("empty").build())
    assert (rep.variables, rep.constraints, rep.constraints_by_tag) == (0, 0, {})


@pytest.mark.parametrize(
    "x, lhs, max_form, min_form",
    [((1, 1), 2, 2, 2), ((0, 1), 0, 0, 0), ((1, 0), 0, 0, 0)],
)
def test_product_identity_examples(qp_a, x, lhs, max_form, min_form):
    res = verify_lemma31(qp_a, compute_bounds(qp_a), x, 1)
    assert (res.lhs, res.rhs_max_form, res.rhs_min_form, res.holds) == (lhs, max_form, min_form, True)


def test_product_identity_rejects_bad_index(qp_a):
    with pytest.raises(InputError):
        verify_lemma31(qp_a, compute_bounds(qp_a), (0, 1), 3)
    with pytest.raises(InputError):
        verify_lemma31(qp_a, compute_bounds(qp_a), (0, 1), 1, matrix="G")


@pytest.mark.parametrize("method", METHODS)
def test_optimum_qp_c(qp_c, method):
    res = branch_and_bound(linearize(qp_c, compute_bounds(qp_c), method))
    assert res.status == "optimal" and _x(res, 2) == (1, 1) and res.objective == pytest.approx(4)


@pytest.mark.parametrize("method", [m for m in METHODS if m != "relaxed-cuts"])
def test_optimum_qp_a(qp_a, method):
    res = branch_and_bound(linearize(qp_a, compute_bounds(qp_a), method))
    assert res.status == "optimal" and _x(res, 2) == (0, 1) and res.objective == pytest.approx(-1)


def test_piecewise_lp_relaxation_tight_on_qp_a(qp_a):
    assert solve_lp_relaxation(linearize_piecewise(qp_a, compute_bounds(qp_a))).objective == pytest.approx(-1)


def test_compact_shift_round_trip_qp_c(qp_c):
    b = compute_bounds(qp_c)
    bp, compact = linearize_bp(qp_c, b), linearize_bp_compact(qp_c, b)
    for x in iter_binary(2):
        point = lift_bp(qp_c, x)
        shifted = bp_to_compact(point, qp_c, b)
        assert bp.is_feasible(point) == compact.is_feasible(shifted) == qp_feasible(x, ([0, 0], [[0, 1], [1, 0]], 2))
        assert compact.objective_value(shifted) == bp.objective_value(point) == qp_value([1, -1], [[0, 2], [2, 0]], x)


def test_unknown_method(qp_a):
    with pytest.raises(InputError):
        linearize(qp_a, compute_bounds(qp_a), "glover")


def test_bounds_dimension_checked(qp_a, qp_c):
    other = make_qp([1, 2, 3], np.zeros((3, 3)))
    with pytest.raises(InputError):
        linearize_bp(qp_a, compute_bounds(other))


rows = st.lists(st.integers(-9, 9), min_size=1, max_size=6)


@settings(max_examples=200, deadline=None)
@given(rows, st.data())
def test_product_identity_identity_on_random_rows(row, data):
    n = len(row)
    Q = np.zeros((n, n))
    Q[0] = row
    qp = make_qp(np.zeros(n), Q)
    x = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    res = verify_lemma31(qp, compute_bounds(qp), x, 1)
    product = x[0] * sum(r * v for r, v in zip(row, x))
    assert res.holds and res.lhs == product


def _piecewise_direct(data):
    """Minimize c x + sum_i max-form_i subject to h x + sum_i min-form_i >= g, by enumeration."""
    c, Q, quad, rows_ = oracle_args(data)
    n = len(c)
    gmin = [sum(min(q, 0) for q in r) for r in Q]
    gmax = [sum(max(q, 0) for q in r) for r in Q]
    best = None
    for x in itertools.product((0, 1), repeat=n):
        if not qp_feasible(x, None, rows_):
            continue
        if quad is not None:
            h, G, g = quad
            lmin = [sum(min(q, 0) for q in r) for r in G]
            lmax = [sum(max(q, 0) for q in r) for r in G]
            lhs = sum(h[j] * x[j] for j in range(n))
            for i in range(n):
                gx = sum(G[i][j] * x[j] for j in range(n))
                lhs += min(lmax[i] * x[i], gx + lmin[i] * x[i] - lmin[i])
            if lhs < g:
                continue
        v = sum(c[j] * x[j] for j in range(n))
        for i in range(n):
            qx = sum(Q[i][j] * x[j] for j in range(n))
            v += max(gmin[i] * x[i], qx + gmax[i] * x[i] - gmax[i])
        if best is None or v < best:
            best = v
    return best


@settings(max_examples=30, deadline=None)
@given(qp_data(max_n=4))
def test_piecewise_direct_evaluation_matches_brute_force(data):
    expected = qp_minimum(*oracle_args(data))
    assert _piecewise_direct(data) == (None if expected is None else expected[0])


@settings(max_examples=25, deadline=None)
@given(qp_data(max_n=4))
def test_every_formulation_matches_oracle(data):
    qp = make_qp(**data)
    b = compute_bounds(qp)
    expected = qp_minimum(*oracle_args(data))
    for method in METHODS:
        if method == "relaxed-cuts" and qp.quad_constraint is None:
            continue
        res = branch_and_bound(linearize(qp, b, method))
        if expected is None:
            assert res.status == "infeasible", method
        else:
            assert res.status == "optimal", method
            assert qp_value(data["c"], data["Q"], _x(res, qp.n)) == expected[0], method
            assert res.objective == pytest.approx(expected[0], abs=1e-6), method


@settings(max_examples=20, deadline=None)
@given(qp_data(max_n=4))
def test_bp_with_x_fixed_attains_p_value(data):
    """Projecting to x never undercuts P: with x fixed, the best BP point costs exactly P(x)."""
    qp = make_qp(**data)
    bp = linearize_bp(qp, compute_bounds(qp))
    c, Q, quad, rows_ = oracle_args(data)
    for x in iter_binary(qp.n):
        fixed = bp.with_constraints([Constraint(((f"x_{j + 1}", 1.0),), "=", float(x[j]), "fix") for j in range(qp.n)])
        lp = solve_lp_relaxation(fixed)
        if qp_feasible(x, quad, rows_):
            assert lp.status == "optimal" and lp.objective == pytest.approx(qp_value(c, Q, x), abs=1e-7)
        else:
            assert lp.status == "infeasible"


@settings(max_examples=25, deadline=None)
@given(qp_data(max_n=5))
def test_piecewise_always_smaller_than_bp(data):
    qp = make_qp(**data)
    b = compute_bounds(qp)
    pw, bp = size_report(linearize_piecewise(qp, b)), size_report(linearize_bp(qp, b))
    assert pw.variables < bp.variables and pw.constraints < bp.constraints


@settings(max_examples=25, deadline=None)
@given(qp_data(max_n=4, max_rows=3))
def test_every_formulation_matches_oracle_with_lp_bounds(data):
    from qlin.errors import InfeasibleError
    from qlin.qp_core import LP_OVER_X

    qp = make_qp(**data)
    expected = qp_minimum(*oracle_args(data))
    try:
        b = compute_bounds(qp, LP_OVER_X)
    except InfeasibleError:
        assert expected is None
        return
    for method in METHODS:
        if method == "relaxed-cuts" and qp.quad_constraint is None:
            continue
        res = branch_and_bound(linearize(qp, b, method))
        if expected is None:
            assert res.status == "infeasible", method
        else:
            assert res.status == "optimal", method
            assert qp_value(data["c"], data["Q"], _x(res, qp.n)) == expected[0], method
