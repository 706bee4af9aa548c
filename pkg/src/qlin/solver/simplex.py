"""Dense bounded-variable primal simplex.

The reference LP backend.  Problems arrive as arrays::

    min c @ x   s.t.  A[r] @ x  (<= | = | >=)  b[r],   lower <= x <= upper

and are brought to the form ``T y = b, l <= y <= u`` with ``l`` either 0 or
-inf, by shifting or reflecting columns and appending slack columns.  Phase 1 uses
artificial columns only on rows without a usable slack.  Pricing is exact
steepest edge for a bounded number of pivots, then Bland's rule, which
guarantees termination on degenerate problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np
from numba import njit

from ..errors import NumericalError

PIVOT_TOL = 1e-9
COST_TOL = 1e-9
FEAS_TOL = 1e-7


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0


class LpBackend(Protocol):
    def solve(self, c, A, senses, b, lower, upper) -> LpResult: ...


_OPTIMAL, _UNBOUNDED, _ITER_LIMIT = 0, 1, 2


@njit(cache=True)
def _pivot(T, basis, is_basic, r, j):
    m, ncol = T.shape
    piv = T[r, j]
    for k in range(ncol):
        T[r, k] /= piv
    for i in range(m):
        if i == r:
            continue
        f = T[i, j]
        if f != 0.0:
            for k in range(ncol):
                T[i, k] -= f * T[r, k]
    is_basic[basis[r]] = False
    is_basic[j] = True
    basis[r] = j


@njit(cache=True)
def _iterate(T, beta, basis, lower, upper, at_upper, is_basic, d, movable, budget, it, max_iter):
    """Primal simplex iterations from a feasible basis; returns (status, iterations)."""
    m, ncol = T.shape
    ratios = np.empty(m)
    rises = np.zeros(m, dtype=np.bool_)
    while True:
        if it >= max_iter:
            return _ITER_LIMIT, it
        bland = it >= budget
        j = -1
        best = -1.0
        for k in range(ncol):
            if not movable[k] or is_basic[k]:
                continue
            dk = d[k]
            if at_upper[k]:
                ok = dk > COST_TOL
            else:
                ok = dk < -COST_TOL or (dk > COST_TOL and lower[k] == -np.inf)
            if not ok:
                continue
            if bland:
                j = k
                break
            norm = 1.0
            for i in range(m):
                norm += T[i, k] * T[i, k]
            score = dk * dk / norm
            if score > best:
                best = score
                j = k
        if j < 0:
            return _OPTIMAL, it
        it += 1

        sgn = 1.0 if d[j] < 0.0 else -1.0
        t_row = np.inf
        for i in range(m):
            a = T[i, j] * sgn
            ratio = np.inf
            rises[i] = False
            if a > PIVOT_TOL:
                lb = lower[basis[i]]
                if lb != -np.inf:
                    ratio = (beta[i] - lb) / a
            elif a < -PIVOT_TOL:
                ub = upper[basis[i]]
                if ub != np.inf:
                    ratio = (beta[i] - ub) / a
                    rises[i] = True
            if ratio < 0.0:
                ratio = 0.0
            ratios[i] = ratio
            if ratio < t_row:
                t_row = ratio
        t_flip = upper[j] if lower[j] != -np.inf else np.inf

        if t_flip != np.inf and t_flip <= t_row + PIVOT_TOL:
            for i in range(m):
                beta[i] -= T[i, j] * sgn * t_flip
            at_upper[j] = not at_upper[j]
            continue
        if t_row == np.inf:
            return _UNBOUNDED, it

        r = -1
        for i in range(m):
            if ratios[i] <= t_row + PIVOT_TOL:
                if r < 0:
                    r = i
                elif bland:
                    if basis[i] < basis[r]:
                        r = i
                elif abs(T[i, j]) > abs(T[r, j]):
                    r = i
        current = upper[j] if at_upper[j] else 0.0
        for i in range(m):
            beta[i] -= T[i, j] * sgn * t_row
        at_upper[basis[r]] = rises[r]
        at_upper[j] = False
        beta[r] = current + sgn * t_row
        _pivot(T, basis, is_basic, r, j)
        dj = d[j]
        for k in range(ncol):
            d[k] -= dj * T[r, k]
        d[j] = 0.0


class _Tableau:
    """Tableau ``T = B^-1 A`` over columns with bounds ``lower in {0, -inf}``, ``upper``.

    Nonbasic columns sit at 0 (their lower bound, or free at 0) or at
    ``upper`` when ``at_upper`` is set.
    """

    def __init__(self, T, beta, basis, lower, upper):
        self.T = np.ascontiguousarray(T)
        self.beta = beta
        self.basis = basis.astype(np.int64)
        self.lower = lower
        self.upper = upper
        self.at_upper = np.zeros(T.shape[1], dtype=bool)
        self.is_basic = np.zeros(T.shape[1], dtype=bool)
        self.is_basic[self.basis] = True
        self.iterations = 0

    def pivot(self, r, j):
        _pivot(self.T, self.basis, self.is_basic, r, j)

    def run(self, cost, steepest_budget, max_iter, allowed):
        """Optimize ``cost``; returns "optimal" or "unbounded"."""
        d = cost - cost[self.basis] @ self.T
        movable = allowed & ((self.upper > PIVOT_TOL) | ~np.isfinite(self.lower))
        status, self.iterations = _iterate(
            self.T, self.beta, self.basis, self.lower, self.upper, self.at_upper, self.is_basic,
            d, movable, steepest_budget, self.iterations, max_iter,
        )
        if status == _ITER_LIMIT:
            raise NumericalError("simplex iteration limit reached", {"iterations": self.iterations})
        return "optimal" if status == _OPTIMAL else "unbounded"

    def drop_rows(self, keep):
        self.T = np.ascontiguousarray(self.T[keep])
        self.beta = self.beta[keep]
        self.basis = self.basis[keep]

    def nonbasic_values(self):
        return np.where(self.at_upper & ~self.is_basic, self.upper, 0.0)


class DenseSimplex:
    """Reference LP backend: deterministic dense tableau simplex.

    ``steepest_budget`` caps the number of steepest-edge pivots before the
    solver falls back to Bland's rule; ``None`` means ``2 * (rows + cols)``.
    """

    def __init__(self, steepest_budget: int | None = None, max_iter: int = 200_000):
        self.steepest_budget = steepest_budget
        self.max_iter = max_iter

    def solve(self, c, A, senses: Sequence[str], b, lower, upper) -> LpResult:
        c = np.asarray(c, dtype=float)
        A = np.asarray(A, dtype=float).reshape(len(senses), c.size)
        b = np.asarray(b, dtype=float)
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if np.any(lower > upper):
            return LpResult("infeasible")

        # Column map: x = offset + sign * y; free columns keep lower -inf.
        lo_fin, up_fin = np.isfinite(lower), np.isfinite(upper)
        sign = np.where(~lo_fin & up_fin, -1.0, 1.0)
        offset = np.where(lo_fin, lower, np.where(up_fin, upper, 0.0))
        ucols = np.where(lo_fin, upper - np.where(lo_fin, lower, 0.0), np.inf)
        lcols = np.where(lo_fin | up_fin, 0.0, -np.inf)
        m = len(senses)
        ny = c.size
        Ay = A * sign
        rhs = b - A @ offset
        cy = c * sign

        slack_sign = np.array([{"<=": 1.0, ">=": -1.0, "=": 0.0}[s] for s in senses])
        slack_rows = np.flatnonzero(slack_sign != 0.0)
        flip = np.where(rhs < 0, -1.0, 1.0)
        Ay *= flip[:, None]
        rhs = rhs * flip

        n_slack = slack_rows.size
        S = np.zeros((m, n_slack))
        S[slack_rows, np.arange(n_slack)] = slack_sign[slack_rows] * flip[slack_rows]

        basis = np.full(m, -1, dtype=int)
        for k, r in enumerate(slack_rows):
            if S[r, k] > 0:
                basis[r] = ny + k
        art_rows = np.flatnonzero(basis < 0)
        n_art = art_rows.size
        Art = np.zeros((m, n_art))
        Art[art_rows, np.arange(n_art)] = 1.0
        basis[art_rows] = ny + n_slack + np.arange(n_art)

        T = np.hstack([Ay, S, Art])
        n_total = T.shape[1]
        u = np.concatenate([ucols, np.full(n_slack + n_art, math.inf)])
        lo = np.concatenate([lcols, np.zeros(n_slack + n_art)])
        budget = self.steepest_budget if self.steepest_budget is not None else 2 * (m + n_total)
        tab = _Tableau(T, rhs.copy(), basis, lo, u)
        A_std = T.copy()

        is_art = np.zeros(n_total, dtype=bool)
        is_art[ny + n_slack:] = True
        if n_art:
            cost1 = is_art.astype(float)
            tab.run(cost1, budget, self.max_iter, np.ones(n_total, dtype=bool))
            infeas = float(tab.beta[is_art[tab.basis]].sum())
            if infeas > FEAS_TOL * (1.0 + np.abs(rhs).max(initial=0.0)):
                return LpResult("infeasible", iterations=tab.iterations)
            keep = self._drive_out_artificials(tab, is_art)
            tab.drop_rows(keep)
            A_std = A_std[keep]
            rhs = rhs[keep]

        cost2 = np.concatenate([cy, np.zeros(n_slack + n_art)])
        status = tab.run(cost2, budget, self.max_iter, ~is_art)
        if status == "unbounded":
            return LpResult("unbounded", iterations=tab.iterations)

        y = self._refactor(tab, A_std, rhs)
        x = offset + sign * y[:ny]
        self._check(x, A, senses, b, lower, upper, tab, A_std)
        return LpResult("optimal", x, float(c @ x), tab.iterations)

    @staticmethod
    def _drive_out_artificials(tab, is_art):
        keep = np.ones(tab.T.shape[0], dtype=bool)
        for r in range(tab.T.shape[0]):
            if not is_art[tab.basis[r]]:
                continue
            row = np.abs(tab.T[r])
            row[is_art | tab.is_basic] = 0.0
            j = int(np.argmax(row)) if row.size else 0
            if row.size and row[j] > PIVOT_TOL:
                leaving = tab.basis[r]
                tab.beta[r] = tab.upper[j] if tab.at_upper[j] else 0.0
                tab.at_upper[j] = False
                tab.pivot(r, j)
                tab.at_upper[leaving] = False
            else:
                keep[r] = False
                tab.is_basic[tab.basis[r]] = False
        return keep

    @staticmethod
    def _refactor(tab, A_std, rhs):
        """Recompute basic values from the original rows to shed drift."""
        y = tab.nonbasic_values()
        if tab.basis.size:
            B = A_std[:, tab.basis]
            resid = rhs - A_std @ y
            try:
                y[tab.basis] = np.linalg.solve(B, resid)
            except np.linalg.LinAlgError:
                y[tab.basis] = tab.beta
        return y

    @staticmethod
    def _check(x, A, senses, b, lower, upper, tab, A_std):
        scale = 1.0 + np.abs(b).max(initial=0.0)
        lhs = A @ x
        viol = np.zeros(len(senses))
        for r, s in enumerate(senses):
            if s == "<=":
                viol[r] = lhs[r] - b[r]
            elif s == ">=":
                viol[r] = b[r] - lhs[r]
            else:
                viol[r] = abs(lhs[r] - b[r])
        worst = max(viol.max(initial=0.0), (lower - x).max(initial=0.0), (x - upper).max(initial=0.0))
        if worst > FEAS_TOL * scale:
            cond = float(np.linalg.cond(A_std[:, tab.basis])) if tab.basis.size else 1.0
            raise NumericalError(
                f"simplex solution violates feasibility by {worst:.3g}",
                {"max_violation": float(worst), "basis_condition": cond, "iterations": tab.iterations},
            )


class ScipyHighs:
    """Alternative backend delegating to HiGHS through scipy."""

    def solve(self, c, A, senses, b, lower, upper) -> LpResult:
        from scipy.optimize import linprog

        A = np.asarray(A, dtype=float).reshape(len(senses), len(c))
        b = np.asarray(b, dtype=float)
        senses = np.array(senses)
        ub_rows = np.vstack([A[senses == "<="], -A[senses == ">="]])
        ub_rhs = np.concatenate([b[senses == "<="], -b[senses == ">="]])
        eq = senses == "="
        bounds = [(None if math.isinf(lo) else lo, None if math.isinf(up) else up) for lo, up in zip(lower, upper)]
        kwargs = dict(
            A_ub=ub_rows if ub_rows.size else None,
            b_ub=ub_rhs if ub_rows.size else None,
            A_eq=A[eq] if eq.any() else None,
            b_eq=b[eq] if eq.any() else None,
            bounds=bounds,
            method="highs",
        )
        res = linprog(c, **kwargs)
        if res.status == 2:
            # presolve may say "infeasible" for an unbounded LP; a zero objective tells them apart
            if linprog(np.zeros(len(c)), **kwargs).status == 0:
                return LpResult("unbounded")
            return LpResult("infeasible")
        if res.status == 3:
            return LpResult("unbounded")
        if res.status != 0:
            raise NumericalError(f"HiGHS failed: {res.message}", {"status": res.status})
        return LpResult("optimal", np.asarray(res.x), float(res.fun), int(res.nit))


DEFAULT_BACKEND = DenseSimplex()
