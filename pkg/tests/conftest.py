import pytest

_results: dict[int, tuple[str, str, float]] = {}
_notes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def note(request):
    """Attach an informational line to the current criterion's summary."""
    marker = request.node.get_closest_marker("criterion")
    return lambda text: _notes.setdefault(marker.args[0], []).append(text)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "setup":
        # module fixtures do the heavy lifting for some criteria; count it
        item.stash.setdefault(_setup_key, report.duration)
        if report.failed:
            _results[number] = (title, "FAIL", report.duration)
    elif report.when == "call":
        status = "PASS" if report.passed else "FAIL"
        _results[number] = (title, status, report.duration + item.stash.get(_setup_key, 0.0))


_setup_key = pytest.StashKey[float]()


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, status, duration = _results[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}  {title}  ({duration:.1f}s)")
        for text in _notes.get(number, []):
            terminalreporter.write_line(f"             {text}")
