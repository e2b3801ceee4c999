"""Per-criterion summary for the acceptance suite."""

from __future__ import annotations

from collections import defaultdict

import pytest

CRITERIA = {
    1: "decomposition identity",
    2: "epsilon unique, kappa ambiguous",
    3: "triple agreement and iota convention",
    4: "golden Euler-Lagrange corpus",
    5: "symbolic Green residual",
    6: "numeric Green check and O(h^2)",
    7: "operator laws",
    8: "null Lagrangians",
    9: "parser and renderer",
}

_outcomes: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes[marker.args[0]].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        count = f"{sum(results or [])}/{len(results or [])}"
        terminalreporter.write_line(f"AC{n} {status:7s} {title} ({count} tests)")
