import pytest

_acceptance: dict[str, bool] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(label): end-to-end acceptance criterion, summarized at exit",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and rep.when == "call":
        _acceptance[marker.kwargs.get("label", item.name)] = rep.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for label in sorted(_acceptance):
        verdict = "PASS" if _acceptance[label] else "FAIL"
        terminalreporter.write_line(f"{label}: {verdict}")
