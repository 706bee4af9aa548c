from __future__ import annotations

from dataclasses import dataclass, field

from ..model import MilpModel
from .simplex import DEFAULT_BACKEND, LpBackend


@dataclass
class LpSolution:
    status: str
    values: dict[str, float] = field(default_factory=dict)
    objective: float | None = None


def solve_lp_relaxation(model: MilpModel, backend: LpBackend | None = None) -> LpSolution:
    """Solve the continuous relaxation of ``model`` (binaries relaxed to [0, 1])."""
    arr = model.to_arrays()
    res = (backend or DEFAULT_BACKEND).solve(arr.c, arr.A, arr.senses, arr.b, arr.lower, arr.upper)
    if res.status != "optimal":
        return LpSolution(res.status)
    values = {v.name: float(val) for v, val in zip(model.variables, res.x)}
    return LpSolution("optimal", values, res.objective + arr.constant)
