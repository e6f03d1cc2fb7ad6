import math
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from leakyarc import make_circular_arc, make_segment  # noqa: E402

_REPORT: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    _REPORT.append(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
    print(_REPORT[-1])


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_REPORT, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def segment():
    return make_segment(1.0)


@pytest.fixture(scope="session")
def quarter_circle():
    # a(50) = 0.469 exceeds the default 0.4 margin; 0.48 keeps beta = 50 usable
    return make_circular_arc(1.0, math.pi / 2, margin=0.48)
