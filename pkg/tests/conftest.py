"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""
from collections import defaultdict

import pytest

CRITERIA = {
    1: "GL_n class counts: second form vs oracle",
    2: "M_n class counts: product vs oracle",
    3: "unipotent counts q^(n^2-n)",
    4: "Euler identity (series + coefficient identity)",
    5: "Feit-Fine commuting pairs",
    6: "Burnside identity for commuting GL_n x M_n pairs",
    7: "forms agreement (master property suite)",
    8: "integrality of the plethystic Log",
    9: "centralizer normalization on G_m",
    10: "plethystic and exp/log round trips",
}

_results: dict[int, list] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            status = "FAIL"
            why = rep.wasxfail
        elif rep.passed:
            status, why = "PASS", ""
        elif rep.skipped:
            status, why = "SKIP", ""
        else:
            status, why = "FAIL", "test error"
        _results[k].append((item.name, status, why, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k, title in CRITERIA.items():
        rows = _results.get(k)
        if not rows:
            tr.write_line(f"AC{k:<2} NOT RUN  {title}")
            continue
        failed = [r for r in rows if r[1] == "FAIL"]
        status = "FAIL" if failed else "PASS"
        secs = sum(r[3] for r in rows)
        tr.write_line(f"AC{k:<2} {status:<7} {title} ({len(rows)} checks, {secs:.1f}s)")
        for name, _, why, _ in failed:
            tr.write_line(f"      failing: {name}: {why}")
