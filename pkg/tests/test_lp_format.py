import pytest
from hypothesis import given, settings

from strategies import qp_data

from qlin.errors import InputError
from qlin.linearize import METHODS, linearize, linearize_piecewise
from qlin.lp_format import constraint_name, export_lp, parse_lp, tag_from_name
from qlin.model import ModelBuilder
from qlin.qp_core import compute_bounds, make_qp
from qlin.solver import branch_and_bound, solve_lp_relaxation


def test_empty_model():
    assert export_lp(ModelBuilder("empty").build()) == "Minimize\n obj:\nSubject To\nEnd\n"


def test_piecewise_qp_a(qp_a):
    text = export_lp(linearize_piecewise(qp_a, compute_bounds(qp_a)))
    binary = text.split("Binary\n")[1].split("End")[0].split()
    assert binary == ["x_1", "x_2"]
    assert sum(line.startswith(" c3.6_") for line in text.splitlines()) == 4
    assert text == export_lp(linearize_piecewise(qp_a, compute_bounds(qp_a)))


def test_qp_c_bp_sections(qp_c):
    text = export_lp(linearize(qp_c, compute_bounds(qp_c), "bp"))
    lines = text.splitlines()
    assert lines[0] == "Minimize" and lines[-1] == "End"
    assert " c2.5_1: + 1 zp_1 + 1 zp_2 >= 2" in lines
    assert " gamma_1 free" in lines


def test_fractional_coefficients_use_shortest_repr():
    b = ModelBuilder("frac")
    x = b.add_var("x_1", "x")
    y = b.add_var("s_1", "s", lower=-1.5, upper=0.1)
    b.add_objective(x, 0.1)
    b.add_objective(y, -1 / 3)
    b.add_row([(x, 2.0), (y, 1e-12)], "<=", 0.30000000000000004, "X")
    text = export_lp(b.build())
    assert "+ 0.1 x_1 - 0.3333333333333333 s_1" in text
    assert "+ 1e-12 s_1 <= 0.30000000000000004" in text
    assert " -1.5 <= s_1 <= 0.1" in text
    assert export_lp(parse_lp(text)) == text


def test_long_rows_wrap():
    b = ModelBuilder("wide")
    xs = [b.add_var(f"x_{k + 1}", "x") for k in range(20)]
    b.add_row([(x, 1) for x in xs], ">=", 1, "X")
    text = export_lp(b.build())
    assert max(len(line) for line in text.splitlines()) < 120
    assert parse_lp(text).constraints[0].coeffs == tuple((f"x_{k + 1}", 1.0) for k in range(20))


@pytest.mark.parametrize("tag", ["2.4", "3.10", "cut-2.31", "X"])
def test_constraint_names_round_trip(tag):
    assert tag_from_name(constraint_name(tag, 3)) == tag


def test_parse_rejects_garbage():
    with pytest.raises(InputError):
        parse_lp("x_1 + x_2\n")
    with pytest.raises(InputError):
        parse_lp("Minimize\n obj: x_1\nSubject To\n r_1: x_1 <= 1 <= 2\nEnd\n")


@settings(max_examples=25, deadline=None)
@given(qp_data(max_n=4))
def test_reparsed_export_has_same_optimum(data):
    qp = make_qp(**data)
    b = compute_bounds(qp)
    for method in METHODS:
        if method == "relaxed-cuts" and qp.quad_constraint is None:
            continue
        model = linearize(qp, b, method)
        text = export_lp(model)
        back = parse_lp(text)
        assert export_lp(back) == text
        r1, r2 = branch_and_bound(model), branch_and_bound(back)
        assert r1.status == r2.status
        if r1.status == "optimal":
            assert r1.objective == r2.objective
            assert solve_lp_relaxation(model).objective == pytest.approx(solve_lp_relaxation(back).objective, abs=1e-9)
