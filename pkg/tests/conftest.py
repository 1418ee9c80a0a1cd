import pytest
from hypothesis import settings

# sympy oracles are slow to warm up; exactness matters here, not latency
settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion carried by this test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    num, title = marker
    failed = report.failed
    prev = _RESULTS.get(num, (title, False))
    if report.when == "call" or failed:
        _RESULTS[num] = (title, prev[1] or failed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    m = item.get_closest_marker("criterion")
    if m is not None:
        outcome.get_result().criterion = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        title, failed = _RESULTS[num]
        terminalreporter.write_line(f"criterion {num} [{title}]: {'FAIL' if failed else 'PASS'}")
