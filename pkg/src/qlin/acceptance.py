"""Seeded acceptance suites with brute-force oracles.

Each ``criterion_k`` returns a :class:`CriterionResult` whose rendered text
contains no timings, so two runs with the same seeds must render
byte-identically (criterion 9 checks exactly that).  Run the whole set with
``python -m qlin.acceptance [-v]``.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .linearize import METHODS, add_sherali_cuts, linearize, linearize_bp_relaxed, size_report
from .properties import check_bp_equivalence, check_product_identities
from .qp_core import BOX, ZeroOneQP, brute_force_solve, check_feasible, compute_bounds, evaluate_objective, make_qp
from .random_instances import random_qp, random_threading
from .solver import BnbOptions, branch_and_bound, solve_lp_relaxation
from .threading import build_qp, decode, enumerate_threadings, make_instance, solve_pairwise_free_dp

SUITE1_SIZE = 200
SUITE2_SIZE = 50
THREADING_SIZE = 100
LP_REPORT_TOL = 1e-7
CUT_TOL = 1e-9
OPT_TOL = 1e-6

TIME_LIMITS = {1: 300.0, 2: 60.0, 3: 60.0, 7: 120.0, 8: 60.0}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}: {self.summary}"

    def render(self, verbose: bool = True) -> str:
        lines = [self.line()]
        if verbose:
            lines += ["    " + d for d in self.details]
        return "\n".join(lines)


def _fmt(v) -> str:
    return "none" if v is None else repr(float(v))


@lru_cache(maxsize=None)
def suite1_instances() -> tuple[ZeroOneQP, ...]:
    """n cycles 1..12; odd k carries a quadratic constraint; 0-3 rows of X."""
    out = []
    for k in range(SUITE1_SIZE):
        rng = np.random.default_rng(1000 + k)
        out.append(random_qp(rng, 1 + k % 12, with_quad=k % 2 == 1, n_x_constraints=int(rng.integers(0, 4))))
    return tuple(out)


@lru_cache(maxsize=None)
def suite2_instances() -> tuple[ZeroOneQP, ...]:
    out = []
    for k in range(SUITE2_SIZE):
        rng = np.random.default_rng(2000 + k)
        out.append(random_qp(rng, 1 + k % 10, with_quad=k % 2 == 1, n_x_constraints=int(rng.integers(0, 4))))
    return tuple(out)


def _x_of(result, n):
    return tuple(result.x[f"x_{j + 1}"] for j in range(n))


def _agrees(qp, result, oracle) -> str | None:
    """None when a branch-and-bound result matches the brute-force oracle, else a reason."""
    if oracle.status == "infeasible":
        return None if result.status == "infeasible" else f"status {result.status}, oracle infeasible"
    if result.status != "optimal":
        return f"status {result.status}, oracle {oracle.value}"
    x = _x_of(result, qp.n)
    if not check_feasible(qp, x):
        return f"x={x} infeasible for P"
    if evaluate_objective(qp, x) != oracle.value:
        return f"x={x} has value {evaluate_objective(qp, x)}, oracle {oracle.value}"
    if abs(result.objective - oracle.value) > OPT_TOL:
        return f"model objective {result.objective}, oracle {oracle.value}"
    return None


def criterion_1() -> CriterionResult:
    details, failures = [], 0
    for k, qp in enumerate(suite1_instances()):
        oracle = brute_force_solve(qp)
        bounds = compute_bounds(qp, BOX)
        parts = []
        for method in METHODS:
            if method == "relaxed-cuts" and not bounds.cuts_available:
                model = linearize_bp_relaxed(qp, bounds)
            else:
                model = linearize(qp, bounds, method)
            res = branch_and_bound(model)
            why = _agrees(qp, res, oracle)
            if why:
                failures += 1
                parts.append(f"{method}: {why}")
        value = "infeasible" if oracle.status == "infeasible" else f"{oracle.value:g}"
        details.append(f"#{k} n={qp.n} quad={int(qp.quad_constraint is not None)} optimum={value} " + ("ok" if not parts else "; ".join(parts)))
    n = len(details)
    return CriterionResult(
        1,
        "five formulations match brute force",
        failures == 0,
        f"{n} instances x {len(METHODS)} formulations, {failures} disagreement(s)",
        details,
    )


def criterion_2() -> CriterionResult:
    details, bad, checked = [], 0, 0
    for k, qp in enumerate(suite2_instances()):
        rep = check_product_identities(qp, compute_bounds(qp, BOX))
        checked += rep.checked
        bad += not rep.ok
        details.append(f"#{k} n={qp.n} checked={rep.checked} " + ("ok" if rep.ok else rep.failures[0]))
    return CriterionResult(
        2, "max-form, min-form and sandwich identities", bad == 0, f"{checked} (x, row) checks, {bad} failing instance(s)", details
    )


def criterion_3() -> CriterionResult:
    details, bad, checked = [], 0, 0
    for k, qp in enumerate(suite2_instances()):
        rep = check_bp_equivalence(qp, compute_bounds(qp, BOX))
        checked += rep.checked
        bad += not rep.ok
        details.append(f"#{k} n={qp.n} feasible={rep.checked} " + ("ok" if rep.ok else rep.failures[0]))
    return CriterionResult(
        3, "lifted points and optima of BP match P", bad == 0, f"{checked} feasible points lifted, {bad} failing instance(s)", details
    )


def _sign_free_comparison(nonneg, label, number, title) -> CriterionResult:
    details, mismatches, lp_logged = [], 0, 0
    for k, qp in enumerate(suite1_instances()):
        bounds = compute_bounds(qp, BOX)
        full = linearize_bp_relaxed(qp, bounds)
        free = linearize_bp_relaxed(qp, bounds, nonneg=nonneg)
        a, b = branch_and_bound(full), branch_and_bound(free)
        same = a.status == b.status and (a.objective is None or abs(a.objective - b.objective) <= OPT_TOL)
        if a.status == "optimal" and b.status == "optimal":
            same = same and evaluate_objective(qp, _x_of(b, qp.n)) == evaluate_objective(qp, _x_of(a, qp.n))
        lp_a, lp_b = solve_lp_relaxation(full).objective, solve_lp_relaxation(free).objective
        note = ""
        if lp_a is not None and lp_b is not None and abs(lp_a - lp_b) > LP_REPORT_TOL:
            lp_logged += 1
            note = f" lp {_fmt(lp_a)} vs {_fmt(lp_b)}"
        elif (lp_a is None) != (lp_b is None):
            lp_logged += 1
            note = f" lp {_fmt(lp_a)} vs {_fmt(lp_b)}"
        if not same:
            mismatches += 1
            details.append(f"#{k} MISMATCH with signs {_fmt(a.objective)} ({a.status}) without {_fmt(b.objective)} ({b.status}){note}")
        elif note:
            details.append(f"#{k} optimum {_fmt(a.objective)}{note}")
    return CriterionResult(
        number,
        title,
        mismatches == 0,
        f"dropping {label}: {mismatches} binary-optimum mismatch(es) on {len(suite1_instances())} instances, "
        f"{lp_logged} LP value difference(s) > {LP_REPORT_TOL:g} logged",
        details,
    )


def criterion_4() -> CriterionResult:
    return _sign_free_comparison((), "y>=0, s>=0, z>=0", 4, "sign constraints redundant in the relaxed model")


def criterion_4b() -> CriterionResult:
    """Companion to 4 that drops only y >= 0 and z >= 0, keeping s >= 0."""
    return _sign_free_comparison(("s",), "y>=0, z>=0 only", "4b", "y and z sign constraints redundant")


def criterion_5() -> CriterionResult:
    details, bad, count = [], 0, 0
    for k, qp in enumerate(suite1_instances()):
        if qp.quad_constraint is None:
            continue
        count += 1
        bounds = compute_bounds(qp, BOX)
        base = linearize_bp_relaxed(qp, bounds)
        before = solve_lp_relaxation(base)
        after = solve_lp_relaxation(add_sherali_cuts(base, qp, bounds))
        if after.status == "infeasible":
            ok = True
        elif before.status != "optimal" or after.status != "optimal":
            ok = False
        else:
            ok = after.objective >= before.objective - CUT_TOL
        bad += not ok
        details.append(f"#{k} before={_fmt(before.objective)} after={_fmt(after.objective)} {'ok' if ok else 'DECREASED'}")
    return CriterionResult(5, "cuts never lower the LP bound", bad == 0, f"{count} instances, {bad} violation(s)", details)


def criterion_6() -> CriterionResult:
    details, bad = [], 0
    for k, qp in enumerate(suite1_instances()):
        bounds = compute_bounds(qp, BOX)
        pw, bp = size_report(linearize(qp, bounds, "piecewise")), size_report(linearize(qp, bounds, "bp"))
        ok = pw.variables < bp.variables and pw.constraints < bp.constraints
        bad += not ok
        details.append(f"#{k} piecewise {pw.variables}/{pw.constraints} bp {bp.variables}/{bp.constraints} {'ok' if ok else 'NOT SMALLER'}")
    qpc = make_qp([1, -1], [[0, 2], [2, 0]], h=[0, 0], G=[[0, 1], [1, 0]], g=2)
    bc = compute_bounds(qpc, BOX)
    pw, bp = size_report(linearize(qpc, bc, "piecewise")), size_report(linearize(qpc, bc, "bp"))
    exact = (pw.variables, pw.constraints, bp.variables, bp.constraints) == (6, 9, 10, 21)
    details.append(f"QP-C piecewise {pw.variables}/{pw.constraints} bp {bp.variables}/{bp.constraints} (expected 6/9 vs 10/21)")
    return CriterionResult(
        6,
        "piecewise model is smaller than BP",
        bad == 0 and exact,
        f"{len(suite1_instances())} instances, {bad} violation(s); QP-C {pw.variables}/{pw.constraints} vs {bp.variables}/{bp.constraints}",
        details,
    )


def t1_instance():
    return make_instance(
        N=6, lengths=[2, 2], linear_scores=[[1, 0, 2], [2, 3, 1]], edges=[(1, 2)], pair_scores={((1, 2), (2, 3)): 5}
    )


def _qp_route(inst):
    qp, index_map = build_qp(inst)
    res = branch_and_bound(linearize(qp, compute_bounds(qp, BOX), "piecewise"))
    if res.status != "optimal":
        return res.status, None, brute_force_solve(qp)
    return res.status, decode(np.array(_x_of(res, qp.n)), inst, index_map), brute_force_solve(qp)


def criterion_7() -> CriterionResult:
    details, bad = [], 0
    t1 = t1_instance()
    status, found, oracle = _qp_route(t1)
    enum = enumerate_threadings(t1)
    t1_ok = (
        status == "optimal"
        and found.objective == 2
        and found.relative == (1, 3)
        and enum.count == 6
        and enum.best.relative == (1, 3)
        and oracle.value == 2
    )
    details.append(f"T-1 qp route {found.relative if found else status} value {_fmt(found.objective if found else None)}; enumeration count {enum.count}")
    for k in range(THREADING_SIZE):
        rng = np.random.default_rng(7000 + k)
        m, n = 1 + k % 3, 1 + (k // 3) % 5
        inst = random_threading(rng, m, n)
        status, found, oracle = _qp_route(inst)
        enum = enumerate_threadings(inst)
        expect = math.comb(n + m - 1, m)
        ok = (
            status == "optimal"
            and found.objective == enum.best.objective
            and oracle.value == enum.best.objective
            and enum.count == expect
        )
        bad += not ok
        details.append(
            f"#{k} m={m} n={n} qp={_fmt(found.objective if found else None)} brute={_fmt(oracle.value)} "
            f"enum={_fmt(enum.best.objective)} count={enum.count}/{expect} {'ok' if ok else 'MISMATCH'}"
        )
    return CriterionResult(
        7,
        "threading through the QP route matches enumeration",
        t1_ok and bad == 0,
        f"T-1 {'ok' if t1_ok else 'FAILED'}; {THREADING_SIZE} random instances, {bad} mismatch(es)",
        details,
    )


def criterion_8() -> CriterionResult:
    details, bad = [], 0
    for k in range(THREADING_SIZE):
        rng = np.random.default_rng(8000 + k)
        m, n = 1 + k % 6, 1 + (k // 6) % 8
        inst = random_threading(rng, m, n, pairwise=False)
        dp, enum = solve_pairwise_free_dp(inst), enumerate_threadings(inst)
        ok = dp.objective == enum.best.objective and dp.relative == enum.best.relative
        bad += not ok
        details.append(f"#{k} m={m} n={n} dp={dp.relative}:{dp.objective:g} enum={enum.best.relative}:{enum.best.objective:g} {'ok' if ok else 'MISMATCH'}")
    return CriterionResult(8, "dynamic program matches enumeration", bad == 0, f"{THREADING_SIZE} instances, {bad} mismatch(es)", details)


CRITERIA = {
    "1": criterion_1,
    "2": criterion_2,
    "3": criterion_3,
    "4": criterion_4,
    "4b": criterion_4b,
    "5": criterion_5,
    "6": criterion_6,
    "7": criterion_7,
    "8": criterion_8,
}


def run_suites(keys=None) -> list[CriterionResult]:
    return [CRITERIA[k]() for k in (keys or CRITERIA)]


def render_report(results) -> str:
    return "\n".join(r.render(verbose=True) for r in results) + "\n"


def criterion_9(first: list[CriterionResult] | None = None) -> CriterionResult:
    """Re-run suites 1-8 (from a cold cache) and compare the full reports byte for byte."""
    if first is None:
        suite1_instances.cache_clear()
        suite2_instances.cache_clear()
        first = run_suites()
    suite1_instances.cache_clear()
    suite2_instances.cache_clear()
    a, b = render_report(first), render_report(run_suites())
    same = a == b
    diff = ""
    if not same:
        la, lb = a.splitlines(), b.splitlines()
        k = next((k for k, (x, y) in enumerate(zip(la, lb)) if x != y), min(len(la), len(lb)))
        diff = f"first difference at line {k + 1}"
    return CriterionResult(
        9, "repeated runs give byte-identical reports", same, f"{len(a.encode())} bytes compared" + (f", {diff}" if diff else "")
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python -m qlin.acceptance")
    parser.add_argument("-v", "--verbose", action="store_true", help="print per-instance details")
    parser.add_argument("--only", nargs="*", choices=list(CRITERIA), help="run a subset (skips criterion 9)")
    args = parser.parse_args(argv)
    results = []
    for key in args.only or CRITERIA:
        start = time.perf_counter()
        res = CRITERIA[key]()
        elapsed = time.perf_counter() - start
        results.append(res)
        print(res.render(args.verbose), f"({elapsed:.1f}s)" if not args.verbose else "", flush=True)
    if not args.only:
        res = criterion_9(results)
        results.append(res)
        print(res.render(args.verbose), flush=True)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
