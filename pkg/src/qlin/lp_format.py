"""CPLEX-style LP text export of :class:`~qlin.model.MilpModel`.

Coefficients are written as the shortest decimal that round-trips (``repr``
of the float, or the plain integer when the value is integral), so the same
model always produces byte-identical text.  :func:`parse_lp` reads back the
subset written here.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict

from .errors import InputError
from .model import Constraint, MilpModel, Objective, Variable

TERMS_PER_LINE = 8

_FAMILY_BY_PREFIX = {
    "gamma": "gamma",
    "lambda": "lambda",
    "sp": "s_prime",
    "zp": "z_prime",
    "s": "s",
    "y": "y",
    "z": "z",
}


def _num(v: float) -> str:
    v = float(v)
    if v == 0:
        return "0"
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _bound(v: float) -> str:
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return _num(v)


def constraint_name(tag: str, ordinal: int) -> str:
    base = tag.replace("-", "_")
    if base[:1].isdigit() or base[:1] == ".":
        base = "c" + base
    return f"{base}_{ordinal}"


def tag_from_name(name: str) -> str:
    base = name.rsplit("_", 1)[0]
    if base.startswith("cut_"):
        return "cut-" + base[4:]
    if base[:1] == "c" and base[1:2].isdigit():
        return base[1:]
    return base


def _expression(coeffs, fallback: str | None) -> list[str]:
    terms = []
    for name, coef in coeffs:
        sign = "-" if coef < 0 else "+"
        terms.append(f"{sign} {_num(abs(coef))} {name}")
    if not terms and fallback is not None:
        terms.append(f"0 {fallback}")
    return terms


def _wrap(head: str, terms: list[str], tail: str = "") -> list[str]:
    chunks = [terms[k : k + TERMS_PER_LINE] for k in range(0, len(terms), TERMS_PER_LINE)] or [[]]
    lines = []
    for k, chunk in enumerate(chunks):
        prefix = head if k == 0 else "   "
        lines.append((prefix + " " + " ".join(chunk)).rstrip())
    if tail:
        lines[-1] += " " + tail
    return lines


def export_lp(model: MilpModel) -> str:
    fallback = min((v.name for v in model.variables), default=None)
    lines = ["Minimize"]
    obj_terms = _expression(model.objective.coeffs, None)
    if model.objective.constant:
        c = model.objective.constant
        obj_terms.append(f"{'-' if c < 0 else '+'} {_num(abs(c))}")
    lines += _wrap(" obj:", obj_terms)
    lines.append("Subject To")
    ordinals: dict[str, int] = defaultdict(int)
    for con in model.constraints:
        ordinals[con.tag] += 1
        name = constraint_name(con.tag, ordinals[con.tag])
        lines += _wrap(f" {name}:", _expression(con.coeffs, fallback), f"{con.sense} {_num(con.rhs)}")

    bounds = []
    for v in model.variables:
        if v.kind == "binary":
            continue
        if math.isinf(v.lower) and math.isinf(v.upper):
            bounds.append(f" {v.name} free")
        elif v.lower == 0 and math.isinf(v.upper):
            continue
        else:
            bounds.append(f" {_bound(v.lower)} <= {v.name} <= {_bound(v.upper)}")
    if bounds:
        lines.append("Bounds")
        lines += bounds
    binaries = [f" {v.name}" for v in model.variables if v.kind == "binary"]
    if binaries:
        lines.append("Binary")
        lines += binaries
    lines.append("End")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(
    r"\s*(?:(?P<num>[+-]?inf(?:inity)?|\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<op><=|>=|=<|=>|=|<|>|[+-])|(?P<name>[A-Za-z_][\w.\[\]]*))",
    re.IGNORECASE,
)
_FREE = re.compile(r"^\s*([A-Za-z_][\w.\[\]]*)\s+free\s*$", re.IGNORECASE)
_BOTH = re.compile(r"^\s*(\S+)\s*<=\s*([A-Za-z_][\w.\[\]]*)\s*<=\s*(\S+)\s*$")
_SENSE = {"<=": "<=", "=<": "<=", "<": "<=", ">=": ">=", "=>": ">=", ">": ">=", "=": "="}


def _tokens(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse near {text[pos:pos + 20]!r}", path="lp")
        pos = m.end()
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
    return out


def _linear(tokens):
    """Parse ``[+|-] [coef] name ...``; bare numbers accumulate into a constant."""
    coeffs, constant, sign, coef = {}, 0.0, 1.0, None
    for kind, tok in tokens:
        if kind == "op" and tok in "+-":
            if coef is not None:
                constant += sign * coef
            sign, coef = (1.0 if tok == "+" else -1.0), None
        elif kind == "num":
            coef = float(tok)
        elif kind == "name":
            coeffs[tok] = coeffs.get(tok, 0.0) + sign * (1.0 if coef is None else coef)
            sign, coef = 1.0, None
        else:
            raise InputError(f"unexpected token {tok!r}", path="lp")
    if coef is not None:
        constant += sign * coef
    return coeffs, constant


def _statements(lines):
    """Group continuation lines under the ``name:`` line that starts them."""
    out = []
    for line in lines:
        if re.match(r"^\s*[A-Za-z_][\w.\[\]]*\s*:", line) or not out:
            out.append(line.strip())
        else:
            out[-1] += " " + line.strip()
    return out


def parse_lp(text: str) -> MilpModel:
    sections: dict[str, list[str]] = defaultdict(list)
    current = None
    headers = {"minimize": "obj", "subject to": "rows", "bounds": "bounds", "binary": "binary", "end": "end"}
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in headers:
            current = headers[key]
            continue
        if current is None:
            raise InputError(f"content before first section: {line!r}", path="lp")
        sections[current].append(line)

    # Bounds then Binary entries fix the order, so re-export reproduces the text.
    order: list[str] = []

    def see(names):
        for n in names:
            if n not in order:
                order.append(n)

    objective_names, row_names = [], []
    obj_text = " ".join(l.strip() for l in sections["obj"])
    obj_text = obj_text.split(":", 1)[1] if ":" in obj_text else obj_text
    obj_coeffs, obj_const = _linear(_tokens(obj_text))
    objective_names += obj_coeffs

    constraints = []
    for stmt in _statements(sections["rows"]):
        name, body = stmt.split(":", 1)
        toks = _tokens(body)
        ops = [k for k, (kind, tok) in enumerate(toks) if kind == "op" and tok in _SENSE and tok not in "+-"]
        if len(ops) != 1:
            raise InputError("constraint needs exactly one sense", path=name.strip())
        k = ops[0]
        coeffs, const = _linear(toks[:k])
        rhs_coeffs, rhs = _linear(toks[k + 1 :])
        if rhs_coeffs:
            raise InputError("variables on the right-hand side are not supported", path=name.strip())
        row_names += coeffs
        terms = tuple((n, c) for n, c in coeffs.items() if c != 0.0)
        constraints.append(Constraint(terms, _SENSE[toks[k][1]], rhs - const, tag_from_name(name.strip())))

    lower: dict[str, float] = {}
    upper: dict[str, float] = {}
    for line in sections["bounds"]:
        free = _FREE.match(line)
        both = _BOTH.match(line)
        if free:
            name = free.group(1)
            lower[name], upper[name] = -math.inf, math.inf
        elif both:
            lo, name, up = both.groups()
            try:
                lower[name], upper[name] = float(lo), float(up)
            except ValueError:
                raise InputError(f"bad bound value in {line.strip()!r}", path=name) from None
        else:
            raise InputError(f"unsupported bound line {line.strip()!r}", path="lp")
        see([name])
    binaries = [l.strip() for l in sections["binary"]]
    see(binaries)
    see(objective_names)
    see(row_names)
    binary_set = set(binaries)

    variables = []
    for name in order:
        if name in binary_set:
            variables.append(Variable(name, "binary", 0.0, 1.0, "x"))
        else:
            family = _FAMILY_BY_PREFIX.get(name.rsplit("_", 1)[0], "epigraph_aux")
            variables.append(Variable(name, "continuous", lower.get(name, 0.0), upper.get(name, math.inf), family))
    objective = Objective(tuple((n, c) for n, c in obj_coeffs.items() if c != 0.0), obj_const)
    return MilpModel("lp", tuple(variables), objective, tuple(constraints))
