"""Mixed-integer linear reformulations of zero-one quadratic programs.

Five builders share one :class:`~qlin.model.MilpModel` output:

``bp``            bilinear lift with gamma = Qx, lambda = Gx and four sandwich pairs
``compact``       the same model shifted into nonnegative s, y, z variables
``relaxed``       compact form with the redundant upper bounds dropped
``relaxed-cuts``  relaxed form plus the s/z coupling cuts
``piecewise``     epigraph of the max-form objective and hypograph of the
                  min-form constraint; no gamma/lambda/y variables at all

Constraint tags name the equation family each row belongs to ("2.4",
"3.10", "cut-2.31", "X", ...), so tests can select rows precisely.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import CutsUnavailableError, InputError
from .model import Constraint, MilpModel, ModelBuilder
from .qp_core import BoundsProfile, ZeroOneQP, _as_binary

METHODS = ("bp", "compact", "relaxed", "relaxed-cuts", "piecewise")


def _name(prefix, i):
    return f"{prefix}_{i + 1}"


def _row_terms(row, xs):
    return [(xs[j], row[j]) for j in range(len(xs)) if row[j] != 0]


def _add_x(b: ModelBuilder, qp: ZeroOneQP):
    return [b.add_var(_name("x", j), "x") for j in range(qp.n)]


def _add_x_constraints(b, qp, xs):
    for row in qp.x_constraints:
        b.add_row(_row_terms(row.coeffs, xs), row.sense, row.rhs, "X")


def _check(qp: ZeroOneQP, bounds: BoundsProfile):
    if bounds.gamma_min.shape != (qp.n,):
        raise InputError(f"bounds profile has dimension {bounds.gamma_min.shape}, problem has n={qp.n}", path="bounds")


def linearize_bp(qp: ZeroOneQP, bounds: BoundsProfile) -> MilpModel:
    _check(qp, bounds)
    b = ModelBuilder("bp")
    n, qc = qp.n, qp.quad_constraint
    xs = _add_x(b, qp)
    gam = [b.add_var(_name("gamma", i), "gamma") for i in range(n)]
    lam = [b.add_var(_name("lambda", i), "lambda") for i in range(n)] if qc else []
    sp = [b.add_var(_name("sp", i), "s_prime") for i in range(n)]
    zp = [b.add_var(_name("zp", i), "z_prime") for i in range(n)] if qc else []

    for j in range(n):
        b.add_objective(xs[j], qp.c[j])
        b.add_objective(sp[j], 1.0)

    gmin, gmax = bounds.gamma_min, bounds.gamma_max
    lmin, lmax = bounds.lambda_min, bounds.lambda_max
    for i in range(n):
        b.add_row(_row_terms(qp.Q[i], xs) + [(gam[i], -1.0)], "=", 0.0, "2.4")
    if qc:
        b.add_row(_row_terms(qc.h, xs) + [(z, 1.0) for z in zp], ">=", qc.g, "2.5")
        for i in range(n):
            b.add_row(_row_terms(qc.G[i], xs) + [(lam[i], -1.0)], "=", 0.0, "2.6")
    for i in range(n):
        b.add_row([(sp[i], 1.0), (xs[i], -gmin[i])], ">=", 0.0, "2.7")
        b.add_row([(sp[i], 1.0), (xs[i], -gmax[i])], "<=", 0.0, "2.7")
    # gamma_min (1 - x_i) <= gamma_i - s'_i <= gamma_max (1 - x_i)
    for i in range(n):
        b.add_row([(gam[i], 1.0), (sp[i], -1.0), (xs[i], gmin[i])], ">=", gmin[i], "2.8")
        b.add_row([(gam[i], 1.0), (sp[i], -1.0), (xs[i], gmax[i])], "<=", gmax[i], "2.8")
    if qc:
        for i in range(n):
            b.add_row([(zp[i], 1.0), (xs[i], -lmin[i])], ">=", 0.0, "2.9")
            b.add_row([(zp[i], 1.0), (xs[i], -lmax[i])], "<=", 0.0, "2.9")
        for i in range(n):
            b.add_row([(lam[i], 1.0), (zp[i], -1.0), (xs[i], lmin[i])], ">=", lmin[i], "2.10")
            b.add_row([(lam[i], 1.0), (zp[i], -1.0), (xs[i], lmax[i])], "<=", lmax[i], "2.10")
    _add_x_constraints(b, qp, xs)
    return b.build()


def _shifted_objective(b, qp, bounds, xs, ss):
    for j in range(qp.n):
        b.add_objective(xs[j], qp.c[j] + bounds.gamma_min[j])
        b.add_objective(ss[j], 1.0)


def linearize_bp_compact(qp: ZeroOneQP, bounds: BoundsProfile) -> MilpModel:
    _check(qp, bounds)
    b = ModelBuilder("compact")
    n, qc = qp.n, qp.quad_constraint
    xs = _add_x(b, qp)
    ss = [b.add_var(_name("s", i), "s", lower=0.0) for i in range(n)]
    ys = [b.add_var(_name("y", i), "y", lower=0.0) for i in range(n)]
    zs = [b.add_var(_name("z", i), "z", lower=0.0) for i in range(n)] if qc else []
    lam = [b.add_var(_name("lambda", i), "lambda") for i in range(n)] if qc else []
    _shifted_objective(b, qp, bounds, xs, ss)

    gmin = bounds.gamma_min
    dg = bounds.gamma_max - bounds.gamma_min
    lmin, lmax = bounds.lambda_min, bounds.lambda_max
    dl = lmax - lmin
    for i in range(n):
        b.add_row(_row_terms(qp.Q[i], xs) + [(ys[i], -1.0), (ss[i], -1.0)], "=", gmin[i], "2.14")
    if qc:
        b.add_row(_row_terms(qc.h + lmin, xs) + [(z, 1.0) for z in zs], ">=", qc.g, "2.15")
        for i in range(n):
            b.add_row(_row_terms(qc.G[i], xs) + [(lam[i], -1.0)], "=", 0.0, "2.16")
    for i in range(n):
        b.add_row([(ss[i], 1.0), (xs[i], -dg[i])], "<=", 0.0, "2.17")
    for i in range(n):
        b.add_row([(ys[i], 1.0), (xs[i], dg[i])], "<=", dg[i], "2.18")
    if qc:
        for i in range(n):
            b.add_row([(zs[i], 1.0), (xs[i], -dl[i])], "<=", 0.0, "2.19")
        for i in range(n):
            b.add_row([(lam[i], 1.0), (zs[i], -1.0)], ">=", lmin[i], "2.20")
            b.add_row([(lam[i], 1.0), (zs[i], -1.0), (xs[i], dl[i])], "<=", lmax[i], "2.20")
    _add_x_constraints(b, qp, xs)
    return b.build()


def linearize_bp_relaxed(qp: ZeroOneQP, bounds: BoundsProfile, nonneg=("s", "y", "z")) -> MilpModel:
    """Relaxed compact model.

    ``nonneg`` lists the families among s, y, z that keep their sign
    constraint; dropping some of them yields the sign-free variants used to
    probe which of those bounds are redundant.
    """
    _check(qp, bounds)
    unknown = set(nonneg) - {"s", "y", "z"}
    if unknown:
        raise InputError(f"unknown families {sorted(unknown)}", path="nonneg")
    name = "relaxed" if set(nonneg) == {"s", "y", "z"} else "relaxed[" + ",".join(sorted(nonneg)) + "]"
    b = ModelBuilder(name)
    n, qc = qp.n, qp.quad_constraint

    def lower(fam):
        return 0.0 if fam in nonneg else -np.inf

    xs = _add_x(b, qp)
    ss = [b.add_var(_name("s", i), "s", lower=lower("s")) for i in range(n)]
    ys = [b.add_var(_name("y", i), "y", lower=lower("y")) for i in range(n)]
    zs = [b.add_var(_name("z", i), "z", lower=lower("z")) for i in range(n)] if qc else []
    _shifted_objective(b, qp, bounds, xs, ss)

    gmin = bounds.gamma_min
    dg = bounds.gamma_max - bounds.gamma_min
    lmin = bounds.lambda_min
    dl = bounds.lambda_max - lmin
    for i in range(n):
        b.add_row(_row_terms(qp.Q[i], xs) + [(ys[i], -1.0), (ss[i], -1.0)], "=", gmin[i], "2.24")
    for i in range(n):
        b.add_row([(ys[i], 1.0), (xs[i], dg[i])], "<=", dg[i], "2.25")
    if qc:
        b.add_row(_row_terms(qc.h + lmin, xs) + [(z, 1.0) for z in zs], ">=", qc.g, "2.27")
        for i in range(n):
            b.add_row(_row_terms(qc.G[i], xs) + [(zs[i], -1.0)], ">=", lmin[i], "2.28")
        for i in range(n):
            b.add_row([(zs[i], 1.0), (xs[i], -dl[i])], "<=", 0.0, "2.29")
    _add_x_constraints(b, qp, xs)
    return b.build()


def add_sherali_cuts(model: MilpModel, qp: ZeroOneQP, bounds: BoundsProfile) -> MilpModel:
    """Append ``(lambda_min - gamma_min - w_max)_i x_i - s_i + z_i <= 0`` for every i."""
    if qp.quad_constraint is None or not bounds.cuts_available:
        raise CutsUnavailableError("s/z coupling cuts need a quadratic constraint")
    names = {v.name for v in model.variables}
    cuts = []
    for i in range(qp.n):
        x, s, z = _name("x", i), _name("s", i), _name("z", i)
        if not {x, s, z} <= names:
            raise InputError("cuts apply to relaxed models with x, s and z variables", path="model")
        coef = float(bounds.lambda_min[i] - bounds.gamma_min[i] - bounds.w_max[i])
        terms = ((x, coef), (s, -1.0), (z, 1.0)) if coef else ((s, -1.0), (z, 1.0))
        cuts.append(Constraint(terms, "<=", 0.0, "cut-2.31"))
    return model.with_constraints(cuts, name=model.name + "-cuts")


def linearize_piecewise(qp: ZeroOneQP, bounds: BoundsProfile) -> MilpModel:
    _check(qp, bounds)
    b = ModelBuilder("piecewise")
    n, qc = qp.n, qp.quad_constraint
    xs = _add_x(b, qp)
    ss = [b.add_var(_name("s", i), "epigraph_aux") for i in range(n)]
    zs = [b.add_var(_name("z", i), "z") for i in range(n)] if qc else []
    for j in range(n):
        b.add_objective(xs[j], qp.c[j])
        b.add_objective(ss[j], 1.0)

    gmin, gmax = bounds.gamma_min, bounds.gamma_max
    for i in range(n):
        # s_i >= max(gamma_min x_i, Q_i x + gamma_max x_i - gamma_max)
        b.add_row([(ss[i], 1.0), (xs[i], -gmin[i])], ">=", 0.0, "3.6")
        terms = [(ss[i], 1.0)] + [(x, -q) for x, q in _row_terms(qp.Q[i], xs)] + [(xs[i], -gmax[i])]
        b.add_row(terms, ">=", -gmax[i], "3.6")
    if qc:
        lmin, lmax = bounds.lambda_min, bounds.lambda_max
        b.add_row(_row_terms(qc.h, xs) + [(z, 1.0) for z in zs], ">=", qc.g, "3.9")
        for i in range(n):
            b.add_row([(zs[i], 1.0), (xs[i], -lmax[i])], "<=", 0.0, "3.10")
        for i in range(n):
            terms = [(zs[i], 1.0)] + [(x, -q) for x, q in _row_terms(qc.G[i], xs)] + [(xs[i], -lmin[i])]
            b.add_row(terms, "<=", -lmin[i], "3.11")
    _add_x_constraints(b, qp, xs)
    return b.build()


def linearize(qp: ZeroOneQP, bounds: BoundsProfile, method: str) -> MilpModel:
    if method == "bp":
        return linearize_bp(qp, bounds)
    if method == "compact":
        return linearize_bp_compact(qp, bounds)
    if method == "relaxed":
        return linearize_bp_relaxed(qp, bounds)
    if method == "relaxed-cuts":
        return add_sherali_cuts(linearize_bp_relaxed(qp, bounds), qp, bounds)
    if method == "piecewise":
        return linearize_piecewise(qp, bounds)
    raise InputError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}", path="method")


@dataclass(frozen=True)
class LinearizationReport:
    method: str
    variables: int
    constraints: int
    constraints_by_tag: dict = field(default_factory=dict)
    variables_by_family: dict = field(default_factory=dict)


def size_report(model: MilpModel) -> LinearizationReport:
    return LinearizationReport(
        method=model.name,
        variables=len(model.variables),
        constraints=len(model.constraints),
        constraints_by_tag=dict(model.tag_counts()),
        variables_by_family=dict(Counter(v.family for v in model.variables)),
    )


@dataclass(frozen=True)
class ProductCheck:
    lhs: float
    rhs_max_form: float
    rhs_min_form: float
    holds: bool


def verify_lemma31(qp: ZeroOneQP, bounds: BoundsProfile, x, i: int, matrix: str = "Q") -> ProductCheck:
    """Compare ``x_i * (M_i x)`` with its max-form and min-form expressions.

    ``i`` is 1-based.  ``matrix="G"`` checks the constraint matrix against
    the lambda bounds instead of Q against the gamma bounds.  Since the
    two forms bound the product from below and above, ``holds`` also
    certifies that the sandwich interval collapses to the product.
    """
    x = _as_binary(qp, x)
    if not 1 <= i <= qp.n:
        raise InputError(f"index {i} outside 1..{qp.n}", path="i")
    if matrix == "Q":
        M, lo, hi = qp.Q, bounds.gamma_min, bounds.gamma_max
    elif matrix == "G":
        if qp.quad_constraint is None:
            raise InputError("problem has no quadratic constraint", path="matrix")
        M, lo, hi = qp.quad_constraint.G, bounds.lambda_min, bounds.lambda_max
    else:
        raise InputError(f"matrix must be 'Q' or 'G', got {matrix!r}", path="matrix")
    k = i - 1
    row = float(M[k] @ x)
    xi = x[k]
    lhs = xi * row
    max_form = max(lo[k] * xi, row + hi[k] * xi - hi[k])
    min_form = min(hi[k] * xi, row + lo[k] * xi - lo[k])
    return ProductCheck(lhs, max_form, min_form, lhs == max_form == min_form)


def lift_bp(qp: ZeroOneQP, x) -> dict[str, float]:
    """The BP point induced by binary x: gamma = Qx, lambda = Gx, s' = x*gamma, z' = x*lambda."""
    x = _as_binary(qp, x)
    gamma = qp.Q @ x
    values = {_name("x", j): float(x[j]) for j in range(qp.n)}
    values.update({_name("gamma", i): float(gamma[i]) for i in range(qp.n)})
    values.update({_name("sp", i): float(x[i] * gamma[i]) for i in range(qp.n)})
    if qp.quad_constraint is not None:
        lam = qp.quad_constraint.G @ x
        values.update({_name("lambda", i): float(lam[i]) for i in range(qp.n)})
        values.update({_name("zp", i): float(x[i] * lam[i]) for i in range(qp.n)})
    return values


def bp_to_compact(values: dict[str, float], qp: ZeroOneQP, bounds: BoundsProfile) -> dict[str, float]:
    """Map a BP point to the compact model's variables by the shift s = s' - gamma_min x etc."""
    out = {}
    for i in range(qp.n):
        x = values[_name("x", i)]
        sp = values[_name("sp", i)]
        out[_name("x", i)] = x
        out[_name("s", i)] = sp - bounds.gamma_min[i] * x
        out[_name("y", i)] = values[_name("gamma", i)] - sp - bounds.gamma_min[i] * (1.0 - x)
        if qp.quad_constraint is not None:
            out[_name("z", i)] = values[_name("zp", i)] - bounds.lambda_min[i] * x
            out[_name("lambda", i)] = values[_name("lambda", i)]
    return out
