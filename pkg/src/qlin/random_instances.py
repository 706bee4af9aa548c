"""Seeded random instance generators for property suites and ``qlin verify``."""

from __future__ import annotations

import numpy as np

from .qp_core import ZeroOneQP, make_qp
from .threading import ThreadingInstance, make_instance

COEF_RANGE = 9


def _ints(rng, shape, bound=COEF_RANGE):
    return rng.integers(-bound, bound + 1, size=shape).astype(float)


def random_qp(rng: np.random.Generator, n: int, with_quad: bool = False, n_x_constraints: int = 0) -> ZeroOneQP:
    """Integer-data QP whose side constraints are anchored at a random binary point.

    The anchor point satisfies every linear row, and the quadratic
    constraint's right-hand side sits at most 3 below the anchor's value,
    so most instances are feasible but not all of X is.
    """
    c = _ints(rng, n)
    Q = _ints(rng, (n, n))
    anchor = rng.integers(0, 2, size=n).astype(float)
    quad = {}
    if with_quad:
        h = _ints(rng, n)
        G = _ints(rng, (n, n))
        slack = rng.integers(0, 4)
        quad = dict(h=h, G=G, g=float(h @ anchor + anchor @ G @ anchor - slack))
    rows = []
    for _ in range(n_x_constraints):
        a = _ints(rng, n)
        if not a.any():
            a[rng.integers(n)] = 1.0
        sense = ("<=", ">=", "=")[rng.choice(3, p=[0.45, 0.45, 0.1])]
        base = float(a @ anchor)
        slack = float(rng.integers(0, 5))
        rhs = base + slack if sense == "<=" else base - slack if sense == ">=" else base
        rows.append((a, sense, rhs))
    return make_qp(c, Q, x_constraints=rows, **quad)


def perturb_qp(rng: np.random.Generator, qp: ZeroOneQP, scale: int = 2) -> ZeroOneQP:
    """Add integer noise in [-scale, scale] to c, Q and the quadratic constraint's h and G."""
    n = qp.n
    quad = {}
    if qp.quad_constraint is not None:
        qc = qp.quad_constraint
        quad = dict(h=qc.h + _ints(rng, n, scale), G=qc.G + _ints(rng, (n, n), scale), g=qc.g)
    return make_qp(
        qp.c + _ints(rng, n, scale),
        qp.Q + _ints(rng, (n, n), scale),
        x_constraints=qp.x_constraints,
        **quad,
    )


def random_threading(
    rng: np.random.Generator, m: int, n: int, pairwise: bool = True, score_range: int = COEF_RANGE
) -> ThreadingInstance:
    """Random threading instance with m segments and exactly n placements each."""
    lengths = [int(v) for v in rng.integers(1, 4, size=m)]
    N = sum(lengths) + n - 1
    g = rng.integers(-score_range, score_range + 1, size=(m, n)).tolist()
    edges, pair_scores = [], {}
    if pairwise:
        for i in range(1, m + 1):
            for k in range(i + 1, m + 1):
                if rng.random() < 0.7:
                    edges.append((i, k))
        for i, k in edges:
            for j in range(1, n + 1):
                for l in range(j, n + 1):
                    if rng.random() < 0.6:
                        pair_scores[(i, j), (k, l)] = int(rng.integers(-score_range, score_range + 1))
    return make_instance(N=N, lengths=lengths, linear_scores=g, edges=edges, pair_scores=pair_scores)
