import numpy as np
import pytest
from hypothesis import given, settings

from oracles import qp_feasible, qp_minimum, qp_value
from strategies import oracle_args, qp_data

from qlin.errors import EnumerationCapError, InfeasibleError, InputError
from qlin.qp_core import (
    BOX,
    LP_OVER_X,
    brute_force_solve,
    check_feasible,
    compute_bounds,
    compute_wmax,
    evaluate_objective,
    iter_binary,
    make_qp,
)


@pytest.mark.parametrize("x, expected", [((0, 0), 0), ((0, 1), -1), ((1, 1), 4), ((1, 0), 1)])
def test_evaluate_objective_qp_a(qp_a, x, expected):
    assert evaluate_objective(qp_a, x) == expected
    assert qp_value([1, -1], [[0, 2], [2, 0]], x) == expected


def test_check_feasible_qp_c(qp_c, qp_a):
    assert check_feasible(qp_c, (1, 1))
    assert not check_feasible(qp_c, (0, 1))
    assert all(check_feasible(qp_a, x) for x in iter_binary(2))


def test_box_bounds(qp_a, qp_c):
    b = compute_bounds(qp_a, BOX)
    assert b.gamma_min.tolist() == [0, 0] and b.gamma_max.tolist() == [2, 2]
    assert b.lambda_min.tolist() == [0, 0] and b.lambda_max.tolist() == [0, 0]
    assert not b.cuts_available
    b = compute_bounds(qp_c, BOX)
    assert b.lambda_min.tolist() == [0, 0] and b.lambda_max.tolist() == [1, 1]
    assert b.cuts_available


def test_box_bounds_mixed_row():
    b = compute_bounds(make_qp([0, 0, 0], [[1, -2, 3], [0, 0, 0], [0, 0, 0]]), BOX)
    assert (b.gamma_min[0], b.gamma_max[0]) == (-2, 4)


def test_wmax_examples(qp_c):
    assert compute_wmax(qp_c, BOX).tolist() == [0, 0]
    same = make_qp([0, 0], [[1, -3], [2, 5]], G=[[1, -3], [2, 5]], g=0)
    assert compute_wmax(same, BOX).tolist() == [0, 0]
    # G_1 - Q_1 = (2, -1)
    qp = make_qp([0, 0], [[1, 1], [0, 0]], G=[[3, 0], [0, 0]], g=0)
    assert compute_wmax(qp, BOX)[0] == 2


def test_wmax_zero_without_quadratic_constraint(qp_a):
    assert compute_wmax(qp_a).tolist() == [0, 0]


def test_brute_force_examples(qp_a, qp_c):
    res = brute_force_solve(qp_a)
    assert (res.x, res.value, res.feasible_count) == ((0, 1), -1, 4)
    res = brute_force_solve(qp_c)
    assert (res.x, res.value, res.feasible_count) == ((1, 1), 4, 1)
    qp = make_qp([1, -1], [[0, 2], [2, 0]], x_constraints=[([1, 1], "<=", 0)])
    res = brute_force_solve(qp)
    assert (res.x, res.value) == ((0, 0), 0)


def test_brute_force_infeasible_and_cap():
    qp = make_qp([1, 1], [[0, 0], [0, 0]], x_constraints=[([1, 1], ">=", 3)])
    assert brute_force_solve(qp).status == "infeasible"
    with pytest.raises(EnumerationCapError):
        brute_force_solve(make_qp(np.zeros(5), np.zeros((5, 5))), cap=4)


@pytest.mark.parametrize(
    "kwargs, path",
    [
        (dict(c=[1, 2], Q=[[0, 0]]), "Q"),
        (dict(c=[], Q=[]), "c"),
        (dict(c=[1], Q=[[0]], h=[1, 2], G=[[0]], g=0), "quad_constraint.h"),
        (dict(c=[1], Q=[[0]], x_constraints=[([1], "<", 0)]), "x_constraints[0].sense"),
        (dict(c=[1], Q=[[0]], x_constraints=[([1, 1], "<=", 0)]), "x_constraints[0].coeffs"),
        (dict(c=[np.nan], Q=[[0]]), "c"),
    ],
)
def test_make_qp_rejects_bad_input(kwargs, path):
    with pytest.raises(InputError) as err:
        make_qp(**kwargs)
    assert err.value.path == path


def test_evaluate_rejects_bad_vectors(qp_a):
    with pytest.raises(InputError):
        evaluate_objective(qp_a, (1, 0, 1))
    with pytest.raises(InputError):
        evaluate_objective(qp_a, (0.5, 0))


def test_instances_are_immutable(qp_a):
    with pytest.raises(ValueError):
        qp_a.Q[0, 0] = 5
    assert qp_a == make_qp([1, -1], [[0, 2], [2, 0]])


def test_lp_bounds_on_empty_relaxation():
    qp = make_qp([1, 1], [[0, 1], [1, 0]], x_constraints=[([1, 1], ">=", 3)])
    with pytest.raises(InfeasibleError):
        compute_bounds(qp, LP_OVER_X)


def test_lp_bounds_tighten_box():
    # x1 + x2 <= 1 caps Q_1 x = 3 x1 + 4 x2 at 4 rather than 7
    qp = make_qp([0, 0], [[3, 4], [0, 0]], x_constraints=[([1, 1], "<=", 1)])
    assert compute_bounds(qp, BOX).gamma_max[0] == 7
    assert compute_bounds(qp, LP_OVER_X).gamma_max[0] == pytest.approx(4)


@settings(max_examples=60, deadline=None)
@given(qp_data(max_n=6))
def test_brute_force_matches_oracle(data):
    qp = make_qp(**data)
    expected = qp_minimum(*oracle_args(data))
    res = brute_force_solve(qp)
    if expected is None:
        assert res.status == "infeasible"
    else:
        assert (res.value, res.x) == expected


@settings(max_examples=40, deadline=None)
@given(qp_data(max_n=5))
def test_bounds_contain_every_feasible_row_value(data):
    qp = make_qp(**data)
    try:
        lp = compute_bounds(qp, LP_OVER_X)
    except InfeasibleError:
        return
    box = compute_bounds(qp, BOX)
    assert np.all(lp.gamma_min >= box.gamma_min - 1e-9) and np.all(lp.gamma_max <= box.gamma_max + 1e-9)
    c, Q, quad, rows = oracle_args(data)
    for x in iter_binary(qp.n):
        qx = qp.Q @ np.array(x)
        assert np.all(box.gamma_min <= qx) and np.all(qx <= box.gamma_max)
        if qp_feasible(x, None, rows):
            assert np.all(lp.gamma_min <= qx + 1e-7) and np.all(qx <= lp.gamma_max + 1e-7)
