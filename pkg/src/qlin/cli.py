"""Command-line entry point: ``qlin {linearize,solve,thread,compare,verify}``.

Exit status is 0 on success, 1 when the instance is infeasible (or a
verification fails), and 2 on malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import CutsUnavailableError, InfeasibleError, InputError, QlinError
from .instance_io import load_instance
from .linearize import METHODS, linearize, size_report
from .lp_format import export_lp
from .properties import EXHAUSTIVE_CAP, check_bp_equivalence, check_product_identities
from .qp_core import BOX, LP_OVER_X, ZeroOneQP, brute_force_solve, compute_bounds
from .random_instances import perturb_qp
from .solver import BnbOptions, branch_and_bound
from .solver.compare import compare_formulations, format_comparison
from .threading import ThreadingInstance, build_qp, decode, solve_pairwise_free_dp

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2
BOUND_MODES = {"box": BOX, "lp": LP_OVER_X}


def _load_qp(path) -> tuple[ZeroOneQP, ThreadingInstance | None]:
    inst = load_instance(path)
    if isinstance(inst, ThreadingInstance):
        qp, _ = build_qp(inst)
        return qp, inst
    return inst, None


def _fmt(v: float) -> str:
    return f"{v:.10g}"


def _bits(x) -> str:
    return " ".join(str(int(round(v))) for v in x)


def cmd_linearize(args, out) -> int:
    qp, _ = _load_qp(args.input)
    model = linearize(qp, compute_bounds(qp, BOUND_MODES[args.bounds]), args.method)
    text = export_lp(model)
    if args.output == "-":
        out.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        rep = size_report(model)
        print(f"wrote {args.output}: {rep.variables} variables, {rep.constraints} constraints", file=out)
    return EXIT_OK


def _solve_qp(qp: ZeroOneQP, method: str, solver: str, mode: str):
    """Return (status, x or None, objective or None, extra line)."""
    if solver == "brute":
        res = brute_force_solve(qp)
        if res.status == "infeasible":
            return "infeasible", None, None, f"feasible points: 0 of {2 ** qp.n}"
        return "optimal", res.x, res.value, f"feasible points: {res.feasible_count} of {2 ** qp.n}"
    model = linearize(qp, compute_bounds(qp, mode), method)
    res = branch_and_bound(model)
    x = None if res.x is None else tuple(res.x[f"x_{j + 1}"] for j in range(qp.n))
    return res.status, x, res.objective, f"nodes: {res.nodes}  bound: {_fmt(res.bound)}"


def cmd_solve(args, out) -> int:
    qp, _ = _load_qp(args.input)
    status, x, obj, extra = _solve_qp(qp, args.method, args.solver, BOUND_MODES[args.bounds])
    print(f"status: {status}", file=out)
    if x is not None:
        print(f"objective: {_fmt(obj)}", file=out)
        print(f"x: {_bits(x)}", file=out)
    print(extra, file=out)
    return EXIT_INFEASIBLE if status == "infeasible" else EXIT_OK


def cmd_thread(args, out) -> int:
    inst = load_instance(args.input)
    if not isinstance(inst, ThreadingInstance):
        raise InputError("expected a threading instance", path="kind")
    if args.dp:
        result = solve_pairwise_free_dp(inst)
    else:
        qp, index_map = build_qp(inst)
        res = branch_and_bound(linearize(qp, compute_bounds(qp), args.method))
        if res.status == "infeasible":
            print("status: infeasible", file=out)
            return EXIT_INFEASIBLE
        if res.status != "optimal":
            print(f"status: {res.status}", file=out)
            return EXIT_OK
        x = np.array([res.x[f"x_{v + 1}"] for v in range(qp.n)])
        result = decode(x, inst, index_map)
    print("status: optimal", file=out)
    print(f"score: {_fmt(result.objective)}", file=out)
    print(f"relative positions: {' '.join(map(str, result.relative))}", file=out)
    print(f"absolute positions: {' '.join(map(str, result.absolute))}", file=out)
    return EXIT_OK


def cmd_compare(args, out) -> int:
    qp, _ = _load_qp(args.input)
    rows = compare_formulations(qp, BOUND_MODES[args.bounds])
    print(format_comparison(rows), file=out)
    return EXIT_INFEASIBLE if rows[0].status == "infeasible" else EXIT_OK


def cmd_verify(args, out) -> int:
    qp, _ = _load_qp(args.input)
    if qp.n > EXHAUSTIVE_CAP:
        raise InputError(f"n={qp.n} exceeds the exhaustive cap {EXHAUSTIVE_CAP}", path="n")
    if args.samples < 0:
        raise InputError("must be non-negative", path="--samples")
    rng = np.random.default_rng(args.seed)
    instances = [("instance", qp)] + [(f"perturbation {k + 1}", perturb_qp(rng, qp)) for k in range(args.samples)]
    failed = 0
    options = BnbOptions()
    for label, inst in instances:
        # the identities range over all of {0,1}^n, where only box bounds are valid
        checks = (
            ("identities", check_product_identities(inst, compute_bounds(inst, BOX))),
            ("equivalence", check_bp_equivalence(inst, compute_bounds(inst, BOUND_MODES[args.bounds]), options)),
        )
        for name, rep in checks:
            status = "ok" if rep.ok else "FAIL"
            print(f"{label:<18}{name:<13}{status:<5}checked={rep.checked}", file=out)
            for msg in rep.failures[:5]:
                print(f"    {msg}", file=out)
            failed += not rep.ok
    print(f"{len(instances)} instance(s), {failed} failed check(s)", file=out)
    return EXIT_INFEASIBLE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlin", description="Linearize and solve zero-one quadratic programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bounds=True):
        p.add_argument("--in", dest="input", required=True, help="JSON instance file")
        if bounds:
            p.add_argument("--bounds", choices=sorted(BOUND_MODES), default="box", help="bound computation mode")

    p = sub.add_parser("linearize", help="write a MILP reformulation in LP format")
    common(p)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--out", dest="output", default="-", help="output .lp file (default: stdout)")
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("solve", help="solve an instance exactly")
    common(p)
    p.add_argument("--method", choices=METHODS, default="piecewise")
    p.add_argument("--solver", choices=("bnb", "brute"), default="bnb")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("thread", help="optimal threading of a threading instance")
    common(p, bounds=False)
    p.add_argument("--dp", action="store_true", help="use the dynamic program (no pair scores)")
    p.add_argument("--method", choices=METHODS, default="piecewise")
    p.set_defaults(func=cmd_thread)

    p = sub.add_parser("compare", help="solve every formulation and tabulate sizes and bounds")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="exhaustive property checks on an instance and perturbations")
    common(p)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (InputError, CutsUnavailableError, OSError) as exc:
        print(f"qlin: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibleError as exc:
        print(f"qlin: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except QlinError as exc:
        print(f"qlin: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
