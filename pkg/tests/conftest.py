"""Prints one PASS/FAIL line per acceptance criterion after the run."""

_ACCEPTANCE = "test_acceptance.py"
_titles: dict[str, str] = {}
_outcomes: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if _ACCEPTANCE in item.nodeid:
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _titles[item.nodeid] = doc


def pytest_runtest_logreport(report):
    if report.nodeid not in _titles:
        return
    if report.failed:
        _outcomes[report.nodeid] = "FAIL"
    elif report.skipped:
        _outcomes.setdefault(report.nodeid, "SKIP")
    elif report.when == "call":
        _outcomes.setdefault(report.nodeid, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, title in _titles.items():
        terminalreporter.write_line(f"{_outcomes.get(nodeid, 'NOT RUN'):7} {title}")
