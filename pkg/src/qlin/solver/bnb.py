"""Deterministic LP-based branch-and-bound over the binary variables."""

from __future__ import annotations

import heapq
import math
import os
import time
from dataclasses import dataclass

import numpy as np

from ..model import MilpModel
from .simplex import DEFAULT_BACKEND, LpBackend

INTEGRALITY_TOL = 1e-6
BOUND_TOL = 1e-9
DEFAULT_NODE_LIMIT = 500_000
NODE_LIMIT_ENV = "QLIN_NODE_LIMIT"


@dataclass
class BnbOptions:
    node_limit: int | None = None
    integrality_tol: float = INTEGRALITY_TOL
    bound_tol: float = BOUND_TOL
    backend: LpBackend | None = None

    def resolved_node_limit(self) -> int:
        if self.node_limit is not None:
            return self.node_limit
        env = os.environ.get(NODE_LIMIT_ENV)
        return int(env) if env else DEFAULT_NODE_LIMIT


@dataclass
class SolveResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "node_limit"
    x: dict[str, int] | None
    values: dict[str, float] | None
    objective: float | None
    bound: float
    nodes: int
    wall_time: float

    @property
    def gap(self) -> float:
        if self.objective is None:
            return math.inf
        return self.objective - self.bound


def branch_and_bound(model: MilpModel, options: BnbOptions | None = None) -> SolveResult:
    """Minimize ``model`` exactly over its binary variables.

    Best-first on the LP bound (creation order breaks ties), branching on the
    most fractional binary with the lowest index winning ties, down branch
    first.  Nodes are counted as LP solves.
    """
    opts = options or BnbOptions()
    backend = opts.backend or DEFAULT_BACKEND
    limit = opts.resolved_node_limit()
    start = time.perf_counter()
    arr = model.to_arrays()
    bin_idx = np.flatnonzero(arr.binary)
    names = [v.name for v in model.variables]

    nodes = 0

    def solve(lo, up):
        nonlocal nodes
        nodes += 1
        return backend.solve(arr.c, arr.A, arr.senses, arr.b, lo, up)

    def finish(status, inc_x, inc_obj, bound):
        if inc_x is None:
            x = values = None
        else:
            values = dict(zip(names, map(float, inc_x)))
            x = {names[k]: int(round(inc_x[k])) for k in bin_idx}
        return SolveResult(status, x, values, inc_obj, bound, nodes, time.perf_counter() - start)

    root = solve(arr.lower.copy(), arr.upper.copy())
    if root.status != "optimal":
        return finish(root.status, None, None, math.inf if root.status == "infeasible" else -math.inf)

    inc_x, inc_obj = None, math.inf
    heap: list = []
    seq = 0

    def consider(res, lo, up):
        nonlocal inc_x, inc_obj, seq
        if res.status != "optimal":
            return
        obj = res.objective + arr.constant
        if obj >= inc_obj - opts.bound_tol:
            return
        xb = res.x[bin_idx]
        if np.all(np.abs(xb - np.round(xb)) <= opts.integrality_tol):
            x, obj = _polish(res.x, obj, lo, up, bin_idx, arr, backend)
            if x is not None and obj < inc_obj - opts.bound_tol:
                inc_x, inc_obj = x, obj
            return
        heapq.heappush(heap, (obj, seq, lo, up, res.x))
        seq += 1

    consider(root, arr.lower.copy(), arr.upper.copy())
    while heap:
        bound, _, lo, up, x = heapq.heappop(heap)
        if bound >= inc_obj - opts.bound_tol:
            heap.clear()
            break
        if nodes >= limit:
            best_bound = min(bound, inc_obj)
            return finish("node_limit", inc_x, None if inc_x is None else inc_obj, best_bound)
        frac = x[bin_idx] - np.floor(x[bin_idx])
        j = bin_idx[int(np.argmax(np.minimum(frac, 1.0 - frac)))]
        for value in (0.0, 1.0):
            clo, cup = lo.copy(), up.copy()
            clo[j] = cup[j] = value
            consider(solve(clo, cup), clo, cup)

    if inc_x is None:
        return finish("infeasible", None, None, math.inf)
    return finish("optimal", inc_x, inc_obj, inc_obj)


def _polish(x, obj, lo, up, bin_idx, arr, backend):
    """Snap binaries to 0/1 and re-solve the continuous part if they moved."""
    rounded = np.round(x[bin_idx])
    if np.array_equal(x[bin_idx], rounded):
        return x, obj
    lo, up = lo.copy(), up.copy()
    lo[bin_idx] = up[bin_idx] = rounded
    res = backend.solve(arr.c, arr.A, arr.senses, arr.b, lo, up)
    if res.status != "optimal":
        return None, math.inf
    return res.x, res.objective + arr.constant
