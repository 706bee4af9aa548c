from __future__ import annotations

import time
from dataclasses import dataclass

from ..errors import QlinError
from ..linearize import METHODS, linearize, linearize_bp_relaxed, size_report
from ..qp_core import BOX, ZeroOneQP, compute_bounds
from .bnb import BnbOptions, branch_and_bound
from .lp import solve_lp_relaxation


class FormulationMismatchError(QlinError):
    """Two formulations of the same problem reported different optima."""


@dataclass
class ComparisonRow:
    method: str
    variables: int
    constraints: int
    lp_value: float | None
    status: str
    binary_optimum: float | None
    nodes: int
    seconds: float
    note: str = ""


def compare_formulations(qp: ZeroOneQP, mode: str = BOX, options: BnbOptions | None = None) -> list[ComparisonRow]:
    """Build, relax and solve every formulation of ``qp``; optima must agree.

    Without a quadratic constraint the cuts row solves the plain relaxed
    model and says so in ``note``.
    """
    bounds = compute_bounds(qp, mode)
    rows = []
    for method in METHODS:
        note = ""
        if method == "relaxed-cuts" and not bounds.cuts_available:
            model = linearize_bp_relaxed(qp, bounds)
            note = "cuts unavailable"
        else:
            model = linearize(qp, bounds, method)
        report = size_report(model)
        start = time.perf_counter()
        lp = solve_lp_relaxation(model, options.backend if options else None)
        result = branch_and_bound(model, options)
        rows.append(
            ComparisonRow(
                method=method,
                variables=report.variables,
                constraints=report.constraints,
                lp_value=lp.objective,
                status=result.status,
                binary_optimum=result.objective,
                nodes=result.nodes,
                seconds=time.perf_counter() - start,
                note=note,
            )
        )
    statuses = {r.status for r in rows}
    optima = [r.binary_optimum for r in rows if r.binary_optimum is not None]
    if len(statuses) > 1 or (optima and max(optima) - min(optima) > 1e-6):
        raise FormulationMismatchError(
            "formulations disagree: " + ", ".join(f"{r.method}={r.status}/{r.binary_optimum}" for r in rows)
        )
    return rows


def format_comparison(rows: list[ComparisonRow]) -> str:
    head = f"{'method':<14}{'vars':>6}{'cons':>6}{'lp bound':>14}{'optimum':>12}{'nodes':>8}{'time[s]':>9}  note"
    lines = [head, "-" * len(head)]
    for r in rows:
        lp = "-" if r.lp_value is None else f"{r.lp_value:.6g}"
        opt = r.status if r.binary_optimum is None else f"{r.binary_optimum:.10g}"
        lines.append(
            f"{r.method:<14}{r.variables:>6}{r.constraints:>6}{lp:>14}{opt:>12}{r.nodes:>8}{r.seconds:>9.3f}  {r.note}"
        )
    return "\n".join(lines)

