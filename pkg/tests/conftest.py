import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qlin.qp_core import make_qp  # noqa: E402
from qlin.threading import make_instance  # noqa: E402

QP_A = dict(c=[1, -1], Q=[[0, 2], [2, 0]])
QP_C = dict(QP_A, h=[0, 0], G=[[0, 1], [1, 0]], g=2)
T1 = dict(N=6, lengths=[2, 2], linear_scores=[[1, 0, 2], [2, 3, 1]], edges=[(1, 2)], pair_scores={((1, 2), (2, 3)): 5})


@pytest.fixture
def qp_a():
    return make_qp(**QP_A)


@pytest.fixture
def qp_c():
    return make_qp(**QP_C)


@pytest.fixture
def t1():
    return make_instance(**T1)


@pytest.fixture
def t1_no_pairs():
    return make_instance(**dict(T1, edges=(), pair_scores=None))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
