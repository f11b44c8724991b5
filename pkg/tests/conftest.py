import pytest

from fput_micropteron.dispersion import WaveParameters
from fput_micropteron.jost import neumann_jost
from fput_micropteron.solitary import solve_monatomic

_CACHE = {}


def solitary_at(eps: float):
    key = ("sol", eps)
    if key not in _CACHE:
        _CACHE[key] = solve_monatomic(WaveParameters.from_epsilon(eps))
    return _CACHE[key]


def jost_at(eps: float):
    key = ("jost", eps)
    if key not in _CACHE:
        _CACHE[key] = neumann_jost(WaveParameters.from_epsilon(eps), solitary_at(eps))
    return _CACHE[key]


@pytest.fixture(scope="session")
def params02():
    return WaveParameters.from_epsilon(0.2)


@pytest.fixture(scope="session")
def sol02():
    return solitary_at(0.2)


@pytest.fixture(scope="session")
def jost02():
    return jost_at(0.2)


ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion(capsys):
    """Print one PASS/FAIL line for an acceptance criterion, inline and in the summary."""

    def _report(number: int, passed: bool, detail: str):
        line = f"CRITERION {number}: {'PASS' if passed else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
