"""Exhaustive property checks shared by the acceptance suite and ``qlin verify``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linearize import bp_to_compact, lift_bp, linearize_bp, linearize_bp_compact, verify_lemma31
from .qp_core import BoundsProfile, ZeroOneQP, brute_force_solve, check_feasible, evaluate_objective, iter_binary
from .solver import BnbOptions, branch_and_bound

EXHAUSTIVE_CAP = 16


@dataclass
class PropertyReport:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str):
        self.failures.append(message)


def _sandwich_ok(lo, hi, product) -> bool:
    # A scalar s' lies in [lo, hi] iff s' equals the product: the interval is the single point.
    return lo == hi == product


def check_product_identities(qp: ZeroOneQP, bounds: BoundsProfile, cap: int = EXHAUSTIVE_CAP) -> PropertyReport:
    """Max-form, min-form and sandwich identities for every binary x and row i (Q, and G if present)."""
    report = PropertyReport()
    if qp.n > cap:
        report.fail(f"n={qp.n} exceeds exhaustive cap {cap}")
        return report
    matrices = ["Q"] + (["G"] if qp.quad_constraint is not None else [])
    for x in iter_binary(qp.n):
        for which in matrices:
            for i in range(1, qp.n + 1):
                res = verify_lemma31(qp, bounds, x, i, matrix=which)
                report.checked += 1
                if not (res.holds and _sandwich_ok(res.rhs_max_form, res.rhs_min_form, res.lhs)):
                    report.fail(f"{which} row {i} at x={x}: {res}")
    return report


def check_bp_equivalence(
    qp: ZeroOneQP, bounds: BoundsProfile, options: BnbOptions | None = None, cap: int = EXHAUSTIVE_CAP
) -> PropertyReport:
    """Lift every P-feasible x into BP and the compact model; then check BP's optimum solves P."""
    report = PropertyReport()
    if qp.n > cap:
        report.fail(f"n={qp.n} exceeds exhaustive cap {cap}")
        return report
    bp = linearize_bp(qp, bounds)
    compact = linearize_bp_compact(qp, bounds)
    for x in iter_binary(qp.n):
        if not check_feasible(qp, x):
            continue
        report.checked += 1
        value = evaluate_objective(qp, x)
        point = lift_bp(qp, x)
        bad = bp.violations(point)
        if bad:
            report.fail(f"lift of x={x} infeasible in bp: {bad[:3]}")
        elif bp.objective_value(point) != value:
            report.fail(f"lift of x={x}: bp objective {bp.objective_value(point)} != {value}")
        shifted = bp_to_compact(point, qp, bounds)
        bad = compact.violations(shifted)
        if bad:
            report.fail(f"shift of x={x} infeasible in compact: {bad[:3]}")
        elif compact.objective_value(shifted) != value:
            report.fail(f"shift of x={x}: compact objective {compact.objective_value(shifted)} != {value}")

    oracle = brute_force_solve(qp)
    result = branch_and_bound(bp, options)
    if oracle.status == "infeasible":
        if result.status != "infeasible":
            report.fail(f"bp status {result.status} but P is infeasible")
        return report
    if result.status != "optimal":
        report.fail(f"bp status {result.status}, expected optimal")
        return report
    x_bp = tuple(result.x[f"x_{j + 1}"] for j in range(qp.n))
    if not check_feasible(qp, x_bp):
        report.fail(f"bp optimum x={x_bp} is infeasible for P")
    elif evaluate_objective(qp, x_bp) != oracle.value:
        report.fail(f"bp optimum x={x_bp} has P value {evaluate_objective(qp, x_bp)}, optimum is {oracle.value}")
    if abs(result.objective - oracle.value) > 1e-6:
        report.fail(f"bp objective {result.objective} != {oracle.value}")
    return report


def solution_vector(result, n: int) -> np.ndarray:
    """Binary x from a branch-and-bound result, in variable order x_1..x_n."""
    return np.array([result.x[f"x_{j + 1}"] for j in range(n)], dtype=float)
