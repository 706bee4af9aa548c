"""Solver-neutral MILP intermediate representation.

Every linearization produces a :class:`MilpModel`; the branch-and-bound
solver and the LP text exporter consume it.  Models are immutable: builders
accumulate rows in a :class:`ModelBuilder` and freeze them once.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError

FAMILIES = ("x", "gamma", "lambda", "s_prime", "z_prime", "s", "y", "z", "epigraph_aux")
SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "binary" | "continuous"
    lower: float
    upper: float
    family: str


@dataclass(frozen=True)
class Constraint:
    """``sum(coef * var) sense rhs`` with one equation-family tag."""

    coeffs: tuple[tuple[str, float], ...]
    sense: str
    rhs: float
    tag: str


@dataclass(frozen=True)
class Objective:
    coeffs: tuple[tuple[str, float], ...] = ()
    constant: float = 0.0


@dataclass(frozen=True)
class ModelArrays:
    """Dense array view of a model, in variable order."""

    c: np.ndarray
    constant: float
    A: np.ndarray
    senses: tuple[str, ...]
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    binary: np.ndarray


@dataclass(frozen=True)
class MilpModel:
    name: str
    variables: tuple[Variable, ...] = ()
    objective: Objective = field(default_factory=Objective)
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise InputError("duplicate variable names", path="variables")
        known = set(names)
        for v in self.variables:
            if v.family not in FAMILIES:
                raise InputError(f"unknown family {v.family!r}", path=v.name)
            if (v.family == "x") != (v.kind == "binary"):
                raise InputError("family x must be exactly the binary variables", path=v.name)
        for name, _ in self.objective.coeffs:
            if name not in known:
                raise InputError(f"undeclared variable {name!r}", path="objective")
        for k, con in enumerate(self.constraints):
            if con.sense not in SENSES:
                raise InputError(f"bad sense {con.sense!r}", path=f"constraints[{k}]")
            for name, _ in con.coeffs:
                if name not in known:
                    raise InputError(f"undeclared variable {name!r}", path=f"constraints[{k}]")

    @property
    def index(self) -> dict[str, int]:
        return {v.name: k for k, v in enumerate(self.variables)}

    def binary_names(self) -> list[str]:
        return [v.name for v in self.variables if v.kind == "binary"]

    def with_constraints(self, extra: Sequence[Constraint], name: str | None = None) -> "MilpModel":
        return replace(self, name=name or self.name, constraints=self.constraints + tuple(extra))

    def to_arrays(self) -> ModelArrays:
        idx = self.index
        nv = len(self.variables)
        c = np.zeros(nv)
        for name, coef in self.objective.coeffs:
            c[idx[name]] += coef
        A = np.zeros((len(self.constraints), nv))
        for r, con in enumerate(self.constraints):
            for name, coef in con.coeffs:
                A[r, idx[name]] += coef
        return ModelArrays(
            c=c,
            constant=float(self.objective.constant),
            A=A,
            senses=tuple(con.sense for con in self.constraints),
            b=np.array([con.rhs for con in self.constraints], dtype=float),
            lower=np.array([v.lower for v in self.variables], dtype=float),
            upper=np.array([v.upper for v in self.variables], dtype=float),
            binary=np.array([v.kind == "binary" for v in self.variables], dtype=bool),
        )

    def objective_value(self, values: Mapping[str, float]) -> float:
        return self.objective.constant + sum(coef * values[name] for name, coef in self.objective.coeffs)

    def violations(self, values: Mapping[str, float], tol: float = 1e-7) -> list[str]:
        """Describe every bound, integrality or row violated by ``values``."""
        out = []
        for v in self.variables:
            val = values[v.name]
            if val < v.lower - tol or val > v.upper + tol:
                out.append(f"{v.name}={val} outside [{v.lower}, {v.upper}]")
            if v.kind == "binary" and min(abs(val), abs(val - 1)) > tol:
                out.append(f"{v.name}={val} not binary")
        for k, con in enumerate(self.constraints):
            lhs = sum(coef * values[name] for name, coef in con.coeffs)
            if not _holds(lhs, con.sense, con.rhs, tol):
                out.append(f"row {k} [{con.tag}]: {lhs} {con.sense} {con.rhs} violated")
        return out

    def is_feasible(self, values: Mapping[str, float], tol: float = 1e-7) -> bool:
        return not self.violations(values, tol)

    def tag_counts(self) -> Counter:
        return Counter(con.tag for con in self.constraints)


def _holds(lhs, sense, rhs, tol):
    if sense == "<=":
        return lhs <= rhs + tol
    if sense == ">=":
        return lhs >= rhs - tol
    return abs(lhs - rhs) <= tol


class ModelBuilder:
    """Mutable accumulator used by the linearizers."""

    def __init__(self, name: str):
        self.name = name
        self._variables: list[Variable] = []
        self._objective: dict[str, float] = {}
        self._constant = 0.0
        self._constraints: list[Constraint] = []

    def add_var(self, name, family, lower=-math.inf, upper=math.inf):
        kind = "binary" if family == "x" else "continuous"
        if kind == "binary":
            lower, upper = 0.0, 1.0
        self._variables.append(Variable(name, kind, float(lower), float(upper), family))
        return name

    def add_objective(self, name, coef):
        if coef:
            self._objective[name] = self._objective.get(name, 0.0) + float(coef)

    def add_constant(self, value):
        self._constant += float(value)

    def add_row(self, terms, sense, rhs, tag):
        """Append a constraint; zero coefficients are dropped, duplicates merged."""
        merged: dict[str, float] = {}
        for name, coef in terms:
            merged[name] = merged.get(name, 0.0) + float(coef)
        coeffs = tuple((n, c) for n, c in merged.items() if c != 0.0)
        self._constraints.append(Constraint(coeffs, sense, float(rhs), tag))

    def build(self) -> MilpModel:
        return MilpModel(
            name=self.name,
            variables=tuple(self._variables),
            objective=Objective(tuple(self._objective.items()), self._constant),
            constraints=tuple(self._constraints),
        )
