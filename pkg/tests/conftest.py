import pytest

from wgcurv.lut import build_full_lut, build_partial_lut

_acceptance = {}


@pytest.fixture(scope="session")
def full_lut():
    return build_full_lut()


@pytest.fixture(scope="session")
def partial_lut31():
    return build_partial_lut(31)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number, title = _acceptance_meta.get(report.nodeid, (None, None))
    if number is None:
        return
    prev = _acceptance.get(number)
    ok = report.passed and (prev is None or prev[1])
    _acceptance[number] = (title, ok)


_acceptance_meta = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _acceptance_meta[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
