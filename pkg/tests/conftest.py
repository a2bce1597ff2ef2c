import os

import pytest

from coxlen import rewriting
from coxlen.core import stats

LABELS = {
    "1": "Coxeter-power lengths in triangle(3,3,4), lambda 2..8",
    "1x": "extended tier, lambda 9..12, 15",
    "2": "power grid of universal lengths, n 3..5",
    "3": "worked examples",
    "4": "deletion-set lower bounds",
    "5a": "upper bounds respected (bound tier)",
    "5b": "upper bounds attained (equality tier)",
    "6": "commuting-generator lemma",
    "7": "property suites",
    "8": "twisted-palindrome middle deletion",
    "9": "unboundedness thresholds",
}

_outcomes = {}


def _criterion(nodeid):
    if "test_acceptance.py::" not in nodeid:
        return None
    name = nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return None
    return name[len("test_criterion_"):].split("_")[0]


def pytest_runtest_logreport(report):
    key = _criterion(report.nodeid)
    if key is None:
        return
    if report.when == "call" or report.failed or report.skipped:
        prev = _outcomes.get(key, "PASS")
        if report.failed:
            _outcomes[key] = "FAIL"
        elif report.skipped and prev != "FAIL":
            _outcomes[key] = "SKIP"
        else:
            _outcomes.setdefault(key, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    order = sorted(_outcomes, key=lambda k: (int(k.rstrip("abx")), k))
    for key in order:
        terminalreporter.write_line(f"criterion {key:<3} {_outcomes[key]:<4} {LABELS.get(key, '')}")


@pytest.fixture(autouse=True)
def _fresh_state():
    stats.reset()
    yield


def extended():
    return os.environ.get("COXLEN_EXTENDED") == "1"
