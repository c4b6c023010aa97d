"""Per-criterion PASS/FAIL reporting for the acceptance suite.

Tests tagged ``@pytest.mark.criterion(n, limit=seconds)`` are grouped by n.
A criterion passes when every one of its tests passed and their summed call
time stays under the limit.
"""

from collections import defaultdict

import pytest

_results = defaultdict(list)
_limits = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, limit): acceptance criterion n with a time limit in seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    _limits[n] = mark.kwargs.get("limit")
    if report.when == "call" or report.outcome != "passed":
        _results[n].append((item.name, report.when, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        rows = _results[n]
        calls = {name for name, when, _, _ in rows if when == "call"}
        failed = sorted({name for name, _, out, _ in rows if out != "passed"})
        total = sum(d for _, when, _, d in rows if when == "call")
        limit = _limits.get(n)
        slow = limit is not None and total >= limit
        ok = not failed and not slow
        detail = f"{len(calls) - len(failed)}/{len(calls)} tests, {total:.2f}s"
        if limit is not None:
            detail += f" (limit {limit}s)"
        if failed:
            detail += "; failed: " + ", ".join(failed)
        if slow:
            detail += "; over time limit"
        tr.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
