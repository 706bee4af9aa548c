"""Zero-one quadratic programs, their bound profiles and an exact oracle.

A :class:`ZeroOneQP` is

    minimize    c @ x + x @ Q @ x
    subject to  h @ x + x @ G @ x >= g          (optional)
                linear rows defining X
                x in {0, 1}^n

``Q`` and ``G`` are kept exactly as given; nothing here assumes symmetry.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EnumerationCapError, InfeasibleError, InputError
from .solver.simplex import DEFAULT_BACKEND

BOX = "box"
LP_OVER_X = "lp_over_X"
RELAXATION_MODES = (BOX, LP_OVER_X)
ENUMERATION_CAP = 24
FEAS_TOL = 1e-9


def _frozen(values, shape, path):
    try:
        arr = np.array(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not numeric ({exc})", path=path) from None
    if arr.shape != shape:
        raise InputError(f"expected shape {shape}, got {arr.shape}", path=path)
    if not np.all(np.isfinite(arr)):
        raise InputError("coefficients must be finite", path=path)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class QuadConstraint:
    """``h @ x + x @ G @ x >= g``."""

    h: np.ndarray
    G: np.ndarray
    g: float

    def __eq__(self, other):
        return (
            isinstance(other, QuadConstraint)
            and np.array_equal(self.h, other.h)
            and np.array_equal(self.G, other.G)
            and self.g == other.g
        )


@dataclass(frozen=True, eq=False)
class LinearConstraint:
    coeffs: np.ndarray
    sense: str
    rhs: float

    def holds(self, x, tol=FEAS_TOL) -> bool:
        lhs = float(self.coeffs @ x)
        if self.sense == "<=":
            return lhs <= self.rhs + tol
        if self.sense == ">=":
            return lhs >= self.rhs - tol
        return abs(lhs - self.rhs) <= tol

    def __eq__(self, other):
        return (
            isinstance(other, LinearConstraint)
            and np.array_equal(self.coeffs, other.coeffs)
            and self.sense == other.sense
            and self.rhs == other.rhs
        )


@dataclass(frozen=True, eq=False)
class ZeroOneQP:
    n: int
    c: np.ndarray
    Q: np.ndarray
    quad_constraint: QuadConstraint | None = None
    x_constraints: tuple[LinearConstraint, ...] = ()

    def __eq__(self, other):
        return (
            isinstance(other, ZeroOneQP)
            and self.n == other.n
            and np.array_equal(self.c, other.c)
            and np.array_equal(self.Q, other.Q)
            and self.quad_constraint == other.quad_constraint
            and self.x_constraints == other.x_constraints
        )

    __hash__ = None


def make_qp(c, Q, h=None, G=None, g=None, x_constraints=()) -> ZeroOneQP:
    """Validate raw data and build an immutable :class:`ZeroOneQP`.

    ``x_constraints`` holds ``(coeffs, sense, rhs)`` triples or
    :class:`LinearConstraint` objects.  The quadratic constraint is present
    when any of ``h``, ``G``, ``g`` is given; missing parts default to zero.
    """
    try:
        c_arr = np.array(c, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not numeric ({exc})", path="c") from None
    if c_arr.ndim != 1 or c_arr.size < 1:
        raise InputError("c must be a non-empty vector", path="c")
    n = c_arr.size
    c_arr = _frozen(c_arr, (n,), "c")
    Q_arr = _frozen(Q, (n, n), "Q")
    quad = None
    if h is not None or G is not None or g is not None:
        quad = QuadConstraint(
            h=_frozen(np.zeros(n) if h is None else h, (n,), "quad_constraint.h"),
            G=_frozen(np.zeros((n, n)) if G is None else G, (n, n), "quad_constraint.G"),
            g=float(_frozen(0.0 if g is None else g, (), "quad_constraint.g")),
        )
    rows = []
    for k, row in enumerate(x_constraints):
        if isinstance(row, LinearConstraint):
            coeffs, sense, rhs = row.coeffs, row.sense, row.rhs
        else:
            coeffs, sense, rhs = row
        path = f"x_constraints[{k}]"
        if sense not in ("<=", "=", ">="):
            raise InputError(f"sense must be one of <=, =, >=; got {sense!r}", path=f"{path}.sense")
        rows.append(
            LinearConstraint(
                _frozen(coeffs, (n,), f"{path}.coeffs"), sense, float(_frozen(rhs, (), f"{path}.rhs"))
            )
        )
    return ZeroOneQP(n, c_arr, Q_arr, quad, tuple(rows))


def _as_binary(qp: ZeroOneQP, x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (qp.n,):
        raise InputError(f"x must have length {qp.n}, got shape {arr.shape}", path="x")
    if not np.all((arr == 0) | (arr == 1)):
        raise InputError("x must be a 0/1 vector", path="x")
    return arr


def evaluate_objective(qp: ZeroOneQP, x) -> float:
    x = _as_binary(qp, x)
    return float(qp.c @ x + x @ qp.Q @ x)


def quad_lhs(qp: ZeroOneQP, x) -> float:
    x = _as_binary(qp, x)
    qc = qp.quad_constraint
    return float(qc.h @ x + x @ qc.G @ x) if qc else 0.0


def check_feasible(qp: ZeroOneQP, x) -> bool:
    x = _as_binary(qp, x)
    qc = qp.quad_constraint
    if qc is not None and float(qc.h @ x + x @ qc.G @ x) < qc.g - FEAS_TOL:
        return False
    return all(row.holds(x) for row in qp.x_constraints)


@dataclass(frozen=True, eq=False)
class BoundsProfile:
    """Row-wise extremes of ``Q x``, ``G x`` and ``(G - Q) x`` over a relaxation of X.

    ``cuts_available`` is False when the problem has no quadratic
    constraint; the lambda and ``w_max`` vectors are then all zero.
    """

    gamma_min: np.ndarray
    gamma_max: np.ndarray
    lambda_min: np.ndarray
    lambda_max: np.ndarray
    w_max: np.ndarray
    relaxation_mode: str
    cuts_available: bool = field(default=False)


def _box_extremes(M):
    return np.minimum(M, 0.0).sum(axis=1), np.maximum(M, 0.0).sum(axis=1)


def _lp_extremes(qp: ZeroOneQP, M, backend):
    """min and max of each row of ``M`` times x over [0,1]^n intersected with X."""
    n = qp.n
    A = np.array([row.coeffs for row in qp.x_constraints]).reshape(len(qp.x_constraints), n)
    senses = [row.sense for row in qp.x_constraints]
    b = np.array([row.rhs for row in qp.x_constraints])
    lo, up = np.zeros(n), np.ones(n)
    mins, maxs = np.empty(M.shape[0]), np.empty(M.shape[0])
    for i, row in enumerate(M):
        for sign, out in ((1.0, mins), (-1.0, maxs)):
            res = backend.solve(sign * row, A, senses, b, lo, up)
            if res.status != "optimal":
                raise InfeasibleError("relaxation of X is empty; lp_over_X bounds undefined")
            out[i] = sign * res.objective
    # Box extremes are always valid; never report anything looser.
    bmin, bmax = _box_extremes(M)
    return np.maximum(mins, bmin), np.minimum(maxs, bmax)


def _extremes(qp, M, mode, backend):
    if mode == BOX:
        return _box_extremes(M)
    if mode == LP_OVER_X:
        return _lp_extremes(qp, M, backend)
    raise InputError(f"unknown relaxation mode {mode!r}", path="mode")


def compute_wmax(qp: ZeroOneQP, mode: str = BOX, backend=None) -> np.ndarray:
    """``max (G_i - Q_i) x`` over the relaxation; zeros without a quadratic constraint."""
    if qp.quad_constraint is None:
        if mode not in RELAXATION_MODES:
            raise InputError(f"unknown relaxation mode {mode!r}", path="mode")
        return np.zeros(qp.n)
    return _extremes(qp, qp.quad_constraint.G - qp.Q, mode, backend or DEFAULT_BACKEND)[1]


def compute_bounds(qp: ZeroOneQP, mode: str = BOX, backend=None) -> BoundsProfile:
    backend = backend or DEFAULT_BACKEND
    gmin, gmax = _extremes(qp, qp.Q, mode, backend)
    if qp.quad_constraint is None:
        lmin = lmax = np.zeros(qp.n)
    else:
        lmin, lmax = _extremes(qp, qp.quad_constraint.G, mode, backend)
    wmax = compute_wmax(qp, mode, backend)
    vecs = [np.array(v, dtype=float) for v in (gmin, gmax, lmin, lmax, wmax)]
    for v in vecs:
        v.setflags(write=False)
    return BoundsProfile(*vecs, relaxation_mode=mode, cuts_available=qp.quad_constraint is not None)


@dataclass(frozen=True)
class BruteForceResult:
    status: str  # "optimal" | "infeasible"
    x: tuple[int, ...] | None
    value: float | None
    feasible_count: int


def iter_binary(n):
    """All of {0,1}^n in lexicographic order."""
    return itertools.product((0, 1), repeat=n)


def _chunks(n, size=1 << 16):
    total = 1 << n
    shifts = np.arange(n - 1, -1, -1)
    for start in range(0, total, size):
        idx = np.arange(start, min(start + size, total))
        yield ((idx[:, None] >> shifts) & 1).astype(float)


def brute_force_solve(qp: ZeroOneQP, cap: int = ENUMERATION_CAP) -> BruteForceResult:
    """Exact minimum by enumeration; ties go to the lexicographically smallest x."""
    if qp.n > cap:
        raise EnumerationCapError(f"n={qp.n} exceeds enumeration cap {cap}")
    best_val, best_x, count = math.inf, None, 0
    qc = qp.quad_constraint
    for X in _chunks(qp.n):
        ok = np.ones(X.shape[0], dtype=bool)
        if qc is not None:
            ok &= X @ qc.h + np.einsum("ki,ij,kj->k", X, qc.G, X) >= qc.g - FEAS_TOL
        for row in qp.x_constraints:
            lhs = X @ row.coeffs
            if row.sense == "<=":
                ok &= lhs <= row.rhs + FEAS_TOL
            elif row.sense == ">=":
                ok &= lhs >= row.rhs - FEAS_TOL
            else:
                ok &= np.abs(lhs - row.rhs) <= FEAS_TOL
        if not ok.any():
            continue
        count += int(ok.sum())
        vals = np.where(ok, X @ qp.c + np.einsum("ki,ij,kj->k", X, qp.Q, X), math.inf)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best_x = float(vals[k]), tuple(int(v) for v in X[k])
    if best_x is None:
        return BruteForceResult("infeasible", None, None, 0)
    # Recompute serially so the reported value matches evaluate_objective bit for bit.
    return BruteForceResult("optimal", best_x, evaluate_objective(qp, best_x), count)
