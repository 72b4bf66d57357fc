import re

import pytest

_CRITERIA: dict[int, tuple[str, bool]] = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    # a criterion fails if any phase fails; the call phase decides otherwise
    if report.failed or report.when == "call":
        prev = _CRITERIA.get(num, (m.group(2), True))[1]
        _CRITERIA[num] = (m.group(2), prev and not report.failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        name, ok = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {name.replace('_', ' ')}")
