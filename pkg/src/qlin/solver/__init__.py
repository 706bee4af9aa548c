"""LP relaxation and branch-and-bound for :class:`~qlin.model.MilpModel`."""

from .bnb import BnbOptions, SolveResult, branch_and_bound
from .lp import LpSolution, solve_lp_relaxation
from .simplex import DenseSimplex, LpBackend, LpResult, ScipyHighs

__all__ = [
    "BnbOptions",
    "DenseSimplex",
    "LpBackend",
    "LpResult",
    "LpSolution",
    "ScipyHighs",
    "SolveResult",
    "branch_and_bound",
    "solve_lp_relaxation",
]
