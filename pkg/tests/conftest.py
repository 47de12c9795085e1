from collections import defaultdict

import numpy as np
import pytest

_ACCEPTANCE = defaultdict(list)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    ids = getattr(report, "acceptance_ids", None)
    if ids:
        for cid in ids:
            _ACCEPTANCE[cid].append((report.nodeid.split("::")[-1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.acceptance_ids = [m.args[0] for m in item.iter_markers("acceptance")]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE, key=lambda c: (int("".join(ch for ch in str(c) if ch.isdigit()) or 0), str(c))):
        parts = _ACCEPTANCE[cid]
        ok = all(outcome == "passed" for _, outcome in parts)
        detail = ", ".join(f"{name}={outcome}" for name, outcome in parts)
        tr.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'}  ({detail})")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

