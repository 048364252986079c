import numpy as np
import pytest

from posmap.mapcore import BFormMap
from posmap.matkernel import random_hermitian

_criteria: dict[int, dict] = {}


def random_bform(N: int, seed) -> BFormMap:
    return BFormMap(N, random_hermitian(N * N, seed))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "seen": False})
    if report.when == "call" or report.outcome != "passed":
        entry["seen"] = True
        entry["ok"] &= report.outcome == "passed"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        if not e["seen"]:
            continue
        terminalreporter.write_line(f"{'PASS' if e['ok'] else 'FAIL'}  criterion {number:2d}: {e['title']}")
