import json

import pytest
from hypothesis import given, settings

from conftest import QP_A, T1
from strategies import qp_data
from test_threading import threading_data

from qlin.errors import InfeasibleError, InputError
from qlin.instance_io import load_instance, parse_instance, serialize_instance, to_document
from qlin.qp_core import make_qp
from qlin.threading import make_instance

T1_TEXT = json.dumps(
    {
        "kind": "threading",
        "m": 2,
        "N": 6,
        "lengths": [2, 2],
        "linear_scores": [[1, 0, 2], [2, 3, 1]],
        "edges": [[1, 2]],
        "pair_scores": [{"i": 1, "j": 2, "k": 2, "l": 3, "value": 5}],
    }
)


def test_parse_qp_a(qp_a):
    assert parse_instance('{"kind":"qp01","n":2,"c":[1,-1],"Q":[[0,2],[2,0]]}') == qp_a


def test_parse_t1(t1):
    assert parse_instance(T1_TEXT) == t1


def test_round_trip_examples(qp_a, qp_c, t1):
    for inst in (qp_a, qp_c, t1, make_instance(**dict(T1, max_gap=[1]))):
        assert parse_instance(serialize_instance(inst)) == inst
        assert serialize_instance(parse_instance(serialize_instance(inst))) == serialize_instance(inst)


def test_load_from_file(tmp_path, qp_c):
    path = tmp_path / "c.json"
    path.write_text(serialize_instance(qp_c))
    assert load_instance(path) == qp_c


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"kind": "qp01", "n": 2, "c": [1]}, "c"),
        ({"kind": "qp01", "n": 2, "c": [1, 2]}, "Q"),
        ({"kind": "qp01", "n": 2, "c": [1, "a"], "Q": [[0, 0], [0, 0]]}, "c[1]"),
        ({"kind": "qp01", "n": 2, "c": [1, 2], "Q": [[0, 0], [0]]}, "Q[1]"),
        ({"kind": "qp01", "n": 0, "c": [], "Q": []}, "n"),
        ({"kind": "qp01", "n": 1, "c": [1], "Q": [[0]], "extra": 1}, "extra"),
        ({"kind": "qp01", "n": 1, "c": [1], "Q": [[0]], "quad_constraint": {"h": [1], "G": [[0]]}}, "quad_constraint.g"),
        ({"kind": "qp01", "n": 1, "c": [1], "Q": [[0]], "x_constraints": [{"coeffs": [1], "sense": "<", "rhs": 0}]}, "x_constraints[0].sense"),
        ({"kind": "lp", "n": 1}, "kind"),
        ({"n": 1}, "kind"),
        ({"kind": "threading", "m": 3, "N": 6, "lengths": [2, 2], "linear_scores": []}, "m"),
        ({"kind": "threading", "m": 2, "N": 6, "lengths": [2, 2], "linear_scores": [[1, 2], [3, 4]]}, "linear_scores[0]"),
        ({"kind": "threading", "m": 2, "N": 6, "lengths": [2, 2], "linear_scores": [[1, 0, 2], [2, 3, 1]], "edges": [[1]]}, "edges[0]"),
        ({"kind": "threading", "m": 2, "N": 6, "lengths": [2, 0], "linear_scores": [[1]]}, "lengths"),
    ],
)
def test_schema_errors_name_the_path(doc, path):
    with pytest.raises(InputError) as err:
        parse_instance(json.dumps(doc))
    assert err.value.path == path


def test_invalid_json():
    with pytest.raises(InputError):
        parse_instance("{not json")


def test_threading_without_positions_is_infeasible():
    doc = {"kind": "threading", "m": 2, "N": 3, "lengths": [2, 2], "linear_scores": [[1], [1]]}
    with pytest.raises(InfeasibleError):
        parse_instance(json.dumps(doc))


def test_document_uses_plain_integers(qp_a):
    doc = to_document(qp_a)
    assert doc["c"] == [1, -1] and isinstance(doc["c"][0], int)
    assert to_document(make_qp([0.5], [[0]]))["c"] == [0.5]


@settings(max_examples=60, deadline=None)
@given(qp_data(max_n=5, max_rows=3))
def test_qp_round_trip(data):
    qp = make_qp(**data)
    assert parse_instance(serialize_instance(qp)) == qp


@settings(max_examples=60, deadline=None)
@given(threading_data())
def test_threading_round_trip(data):
    inst = make_instance(**data)
    assert parse_instance(serialize_instance(inst)) == inst
