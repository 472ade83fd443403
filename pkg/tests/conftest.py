import math

import pytest

from atomlaser import ModelParams, validate_params

_acceptance = []


@pytest.fixture
def fig3_params():
    return validate_params(ModelParams(omega=0.1, omega_prime=math.pi, gamma=100.0, r=0.3))


@pytest.fixture
def fig4_params():
    return validate_params(ModelParams(omega=10.0, omega_prime=10.0, gamma=100.0, r=0.3))


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
