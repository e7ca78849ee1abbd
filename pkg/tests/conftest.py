import pytest

_acceptance = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    _, ok = _acceptance.get(number, (title, True))
    _acceptance[number] = (title, ok and call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, (title, ok) in sorted(_acceptance.items()):
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] AC{number:>2}  {title}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20181)
