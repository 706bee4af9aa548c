"""Protein threading instances and their reduction to zero-one QPs.

Segments ``i = 1..m`` (lengths already inflated by their minimal loop
lengths) are placed in order along a sequence of ``N`` characters.  Each
segment has ``n = N - sum(lengths) + 1`` relative placements ``j = 1..n``;
relative position ``j`` for segment ``i`` means absolute start
``t_i = sum(lengths[:i-1]) + j``.  Ordering forces ``j_1 <= ... <= j_m``.

Segment and position indices are 1-based throughout this module, as in the
usual statement of the model; flat QP variable indices are 0-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import DecodeError, EnumerationCapError, InfeasibleError, InputError
from .qp_core import ZeroOneQP, make_qp

ENUMERATION_CAP = 10**6

PairKey = tuple[tuple[int, int], tuple[int, int]]


def derive_positions(N: int, lengths) -> int:
    """Number of placements per segment, ``N - sum(lengths) + 1``."""
    lengths = list(lengths)
    if not lengths:
        raise InputError("at least one segment is required", path="lengths")
    if any(int(l) != l or l <= 0 for l in lengths):
        raise InputError("segment lengths must be positive integers", path="lengths")
    n = int(N) - int(sum(lengths)) + 1
    if n <= 0:
        raise InfeasibleError(f"segments of total length {sum(lengths)} do not fit a sequence of length {N}")
    return n


@dataclass(frozen=True, eq=False)
class ThreadingInstance:
    m: int
    N: int
    n: int
    lengths: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    linear_scores: np.ndarray  # m x n, row i-1 holds g_{i,1..n}
    pair_scores: Mapping[PairKey, float]
    max_gap: tuple[int | None, ...] | None = None  # entry i-1 bounds the gap before segment i+1

    def __eq__(self, other):
        return (
            isinstance(other, ThreadingInstance)
            and (self.m, self.N, self.lengths, self.edges, self.max_gap)
            == (other.m, other.N, other.lengths, other.edges, other.max_gap)
            and np.array_equal(self.linear_scores, other.linear_scores)
            and dict(self.pair_scores) == dict(other.pair_scores)
        )

    __hash__ = None

    def offset(self, i: int) -> int:
        """Characters covered by segments before segment ``i``."""
        return sum(self.lengths[: i - 1])

    def has_pair_terms(self) -> bool:
        return any(v != 0 for v in self.pair_scores.values())


def make_instance(N, lengths, linear_scores, edges=(), pair_scores=None, max_gap=None) -> ThreadingInstance:
    lengths = tuple(int(l) for l in lengths)
    n = derive_positions(N, lengths)
    m = len(lengths)
    try:
        g = np.array(linear_scores, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not numeric ({exc})", path="linear_scores") from None
    if g.shape != (m, n):
        raise InputError(f"expected shape {(m, n)}, got {g.shape}", path="linear_scores")
    if not np.all(np.isfinite(g)):
        raise InputError("scores must be finite", path="linear_scores")
    g.setflags(write=False)

    edge_list = []
    for e, (i, k) in enumerate(edges):
        i, k = int(i), int(k)
        if not (1 <= i < k <= m):
            raise InputError(f"edge ({i}, {k}) must satisfy 1 <= i < k <= {m}", path=f"edges[{e}]")
        edge_list.append((i, k))
    if len(set(edge_list)) != len(edge_list):
        raise InputError("duplicate edge", path="edges")
    edge_set = set(edge_list)

    pairs = {}
    for key, value in (pair_scores or {}).items():
        (i, j), (k, l) = key
        i, j, k, l = int(i), int(j), int(k), int(l)
        where = f"pair_scores[{i},{j},{k},{l}]"
        if (i, k) not in edge_set:
            raise InputError(f"segment pair ({i}, {k}) is not an edge", path=where)
        if not (1 <= j <= l <= n):
            raise InputError(f"positions must satisfy 1 <= j <= l <= {n}", path=where)
        if not math.isfinite(float(value)):
            raise InputError("score must be finite", path=where)
        if ((i, j), (k, l)) in pairs:
            raise InputError("duplicate pair score", path=where)
        pairs[(i, j), (k, l)] = float(value)

    gaps = None
    if max_gap is not None:
        gaps = tuple(None if d is None else int(d) for d in max_gap)
        if len(gaps) != m - 1:
            raise InputError(f"expected {m - 1} entries", path="max_gap")
        if any(d is not None and d < 0 for d in gaps):
            raise InputError("gap bounds must be nonnegative", path="max_gap")
        if all(d is None for d in gaps):
            gaps = None
    return ThreadingInstance(m, int(N), n, lengths, tuple(edge_list), g, MappingProxyType(pairs), gaps)


@dataclass(frozen=True)
class Threading:
    relative: tuple[int, ...]
    absolute: tuple[int, ...]
    objective: float


def flat_index(n: int, i: int, j: int) -> int:
    return (i - 1) * n + (j - 1)


def build_qp(instance: ThreadingInstance) -> tuple[ZeroOneQP, tuple[tuple[int, int], ...]]:
    """Reduce to a zero-one QP; the second value maps flat index -> (i, j)."""
    m, n = instance.m, instance.n
    nv = m * n
    c = instance.linear_scores.reshape(nv).copy()
    Q = np.zeros((nv, nv))
    for ((i, j), (k, l)), value in instance.pair_scores.items():
        Q[flat_index(n, i, j), flat_index(n, k, l)] += value

    rows = []
    for i in range(1, m + 1):
        a = np.zeros(nv)
        a[flat_index(n, i, 1) : flat_index(n, i, n) + 1] = 1.0
        rows.append((a, "=", 1.0))
    for i in range(2, m + 1):
        for j in range(1, n):
            a = np.zeros(nv)
            a[flat_index(n, i, j)] = 1.0
            a[flat_index(n, i - 1, 1) : flat_index(n, i - 1, j) + 1] -= 1.0
            rows.append((a, "<=", 0.0))
    if instance.max_gap is not None:
        for i in range(2, m + 1):
            delta = instance.max_gap[i - 2]
            if delta is None:
                continue
            for j in range(1, n + 1):
                a = np.zeros(nv)
                a[flat_index(n, i, j)] = 1.0
                lo = max(1, j - delta)
                a[flat_index(n, i - 1, lo) : flat_index(n, i - 1, j) + 1] -= 1.0
                rows.append((a, "<=", 0.0))
    index_map = tuple((i, j) for i in range(1, m + 1) for j in range(1, n + 1))
    return make_qp(c, Q, x_constraints=rows), index_map


def encode(instance: ThreadingInstance, relative) -> np.ndarray:
    x = np.zeros(instance.m * instance.n)
    for i, j in enumerate(relative, start=1):
        x[flat_index(instance.n, i, j)] = 1.0
    return x


def make_threading(instance: ThreadingInstance, relative) -> Threading:
    relative = tuple(int(j) for j in relative)
    if len(relative) != instance.m or not all(1 <= j <= instance.n for j in relative):
        raise InputError(f"need {instance.m} positions in 1..{instance.n}", path="relative")
    absolute = tuple(instance.offset(i) + j for i, j in enumerate(relative, start=1))
    return Threading(relative, absolute, score_threading(instance, relative))


def decode(x, instance: ThreadingInstance, index_map=None) -> Threading:
    x = np.asarray(x, dtype=float)
    if x.shape != (instance.m * instance.n,):
        raise DecodeError(f"expected {instance.m * instance.n} entries, got shape {x.shape}")
    if index_map is None:
        index_map = [(i, j) for i in range(1, instance.m + 1) for j in range(1, instance.n + 1)]
    placed: dict[int, list[int]] = {i: [] for i in range(1, instance.m + 1)}
    for v in np.flatnonzero(np.round(x) == 1):
        i, j = index_map[v]
        placed[i].append(j)
    for i, js in placed.items():
        if len(js) != 1:
            raise DecodeError(f"segment {i} is placed {len(js)} times")
    return make_threading(instance, [placed[i][0] for i in range(1, instance.m + 1)])


def _relative(threading) -> tuple[int, ...]:
    return tuple(threading.relative) if isinstance(threading, Threading) else tuple(threading)


def gaps(instance: ThreadingInstance, threading) -> tuple[int, ...]:
    """Loop lengths ``t_i - t_{i-1} - l_{i-1}`` for i = 2..m."""
    rel = _relative(threading)
    t = [instance.offset(i) + j for i, j in enumerate(rel, start=1)]
    return tuple(t[i] - t[i - 1] - instance.lengths[i - 1] for i in range(1, len(t)))


def check_threading_feasible(instance: ThreadingInstance, threading) -> bool:
    rel = _relative(threading)
    if len(rel) != instance.m or not all(1 <= j <= instance.n for j in rel):
        raise InputError(f"need {instance.m} positions in 1..{instance.n}", path="relative")
    if any(a > b for a, b in zip(rel, rel[1:])):
        return False
    if instance.max_gap is not None:
        for d, gap in zip(instance.max_gap, gaps(instance, rel)):
            if d is not None and gap > d:
                return False
    return True


def score_threading(instance: ThreadingInstance, threading) -> float:
    rel = _relative(threading)
    total = sum(float(instance.linear_scores[i - 1, j - 1]) for i, j in enumerate(rel, start=1))
    for i, k in instance.edges:
        total += instance.pair_scores.get(((i, rel[i - 1]), (k, rel[k - 1])), 0.0)
    return total


@dataclass(frozen=True)
class EnumerationResult:
    count: int
    best: Threading | None


def enumerate_threadings(instance: ThreadingInstance, cap: int = ENUMERATION_CAP) -> EnumerationResult:
    """Exhaustive search over feasible threadings; ties go to the lexicographically smallest."""
    if instance.n**instance.m > cap:
        raise EnumerationCapError(f"n^m = {instance.n}^{instance.m} exceeds cap {cap}")
    count, best, best_val = 0, None, math.inf
    for rel in itertools.combinations_with_replacement(range(1, instance.n + 1), instance.m):
        if not check_threading_feasible(instance, rel):
            continue
        count += 1
        val = score_threading(instance, rel)
        if val < best_val:
            best, best_val = rel, val
    return EnumerationResult(count, None if best is None else make_threading(instance, best))


def solve_pairwise_free_dp(instance: ThreadingInstance) -> Threading:
    """Optimal threading by dynamic programming when there are no pair scores.

    ``best[i][j] = g[i][j] + min(best[i-1][k] for k in window(j))`` where the
    window is ``1..j`` (or ``j-max_gap..j``).  Backtracking takes the
    smallest position among ties at each step.
    """
    if instance.has_pair_terms():
        raise InputError("dynamic program is only valid without pair scores", path="pair_scores")
    m, n = instance.m, instance.n
    g = instance.linear_scores

    def window(i, j):
        # positions of segment i-1 compatible with segment i at j (1-based, inclusive)
        delta = None if instance.max_gap is None else instance.max_gap[i - 2]
        return (1 if delta is None else max(1, j - delta)), j

    best = np.empty((m, n))
    best[0] = g[0]
    for i in range(2, m + 1):
        prev = best[i - 2]
        delta = None if instance.max_gap is None else instance.max_gap[i - 2]
        if delta is None:
            reach = np.minimum.accumulate(prev)
        else:
            reach = np.array([prev[window(i, j)[0] - 1 : j].min() for j in range(1, n + 1)])
        best[i - 1] = g[i - 1] + reach

    rel = [0] * m
    rel[m - 1] = int(np.argmin(best[m - 1])) + 1
    for i in range(m - 1, 0, -1):
        lo, hi = window(i + 1, rel[i])
        seg = best[i - 1, lo - 1 : hi]
        rel[i - 1] = lo + int(np.argmin(seg))
    return make_threading(instance, rel)
