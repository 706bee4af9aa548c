"""Acceptance criteria run at their stated tolerances.

Every criterion prints one ``[PASS]``/``[FAIL]`` line (collected again in
the terminal summary).  Criteria with a stated time budget also fail when
they exceed it.  Run directly with ``python tests/test_acceptance.py``.
"""

import time

import pytest

from qlin import acceptance

LINES: list[str] = []
_results: dict[str, acceptance.CriterionResult] = {}


def _run(key):
    start = time.perf_counter()
    res = acceptance.CRITERIA[key]()
    elapsed = time.perf_counter() - start
    _results[key] = res
    return res, elapsed


def _report(res, elapsed=None, limit=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.1f}s" + (f" of {limit:.0f}s budget]" if limit else "]")
    line = res.line() + timing
    if limit is not None and elapsed > limit and res.passed:
        line = line.replace("[PASS]", "[FAIL]", 1) + " over time budget"
    LINES.append(line)
    print(line)
    return line


@pytest.mark.parametrize("key", list(acceptance.CRITERIA))
def test_criterion(key):
    res, elapsed = _run(key)
    number = int(key.rstrip("b"))
    limit = acceptance.TIME_LIMITS.get(number)
    _report(res, elapsed, limit)
    if not res.passed:
        pytest.fail("\n".join([res.line()] + res.details[:8]), pytrace=False)
    if limit is not None:
        assert elapsed <= limit, f"criterion {key} took {elapsed:.1f}s, budget {limit:.0f}s"


def test_criterion_9_determinism():
    first = [_results[k] for k in acceptance.CRITERIA if k in _results]
    if len(first) != len(acceptance.CRITERIA):
        first = None
    res = acceptance.criterion_9(first)
    _report(res)
    assert res.passed, res.summary


if __name__ == "__main__":
    raise SystemExit(acceptance.main(["-v"]))
