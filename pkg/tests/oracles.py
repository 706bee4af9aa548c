"""Independent reference implementations used as test oracles.

Plain Python loops over explicit data, with no calls into qlin, so the
library is checked against an implementation that shares none of its code.
"""

import itertools


def qp_value(c, Q, x):
    n = len(c)
    return sum(c[i] * x[i] for i in range(n)) + sum(Q[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


def qp_feasible(x, quad=None, rows=()):
    if quad is not None:
        h, G, g = quad
        if qp_value(h, G, x) < g:
            return False
    for a, sense, rhs in rows:
        lhs = sum(ai * xi for ai, xi in zip(a, x))
        if (sense == "<=" and lhs > rhs) or (sense == ">=" and lhs < rhs) or (sense == "=" and lhs != rhs):
            return False
    return True


def qp_minimum(c, Q, quad=None, rows=()):
    """(value, x) of the lexicographically first minimizer, or None if infeasible."""
    best = None
    for x in itertools.product((0, 1), repeat=len(c)):
        if not qp_feasible(x, quad, rows):
            continue
        v = qp_value(c, Q, x)
        if best is None or v < best[0]:
            best = (v, x)
    return best


def threading_minimum(g, pairs, lengths, max_gap=None):
    """(count, value, relative) over all n^m tuples, filtered to feasible ones."""
    m, n = len(g), len(g[0])
    count, best = 0, None
    for rel in itertools.product(range(1, n + 1), repeat=m):
        if any(rel[i] > rel[i + 1] for i in range(m - 1)):
            continue
        if max_gap is not None:
            # relative gap: t_{i+1} - t_i - l_i = j_{i+1} - j_i when positions are relative
            if any(d is not None and rel[i + 1] - rel[i] > d for i, d in enumerate(max_gap)):
                continue
        count += 1
        v = sum(g[i][rel[i] - 1] for i in range(m))
        v += sum(val for ((i, j), (k, l)), val in pairs.items() if rel[i - 1] == j and rel[k - 1] == l)
        if best is None or v < best[0]:
            best = (v, rel)
    return count, best
