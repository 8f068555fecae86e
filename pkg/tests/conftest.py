import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scenarios import corridor_scenario, dissolve_scenario  # noqa: E402


_acceptance_results: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "test_acceptance" in item.nodeid:
        name = item.name.replace("test_", "").replace("_", " ")
        _acceptance_results.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    """One visible PASS/FAIL line per acceptance criterion."""
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _acceptance_results:
        terminalreporter.write_line(f"[ACCEPTANCE] {name}: {status}")


@pytest.fixture(scope="session")
def corridor_rho40():
    return corridor_scenario(rho=40.0)


@pytest.fixture(scope="session")
def corridor_rho20():
    return corridor_scenario(rho=20.0)


@pytest.fixture(scope="session")
def dissolve():
    return dissolve_scenario()
