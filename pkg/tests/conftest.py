import pytest

from maxcurves.autgroup import GammaGroup
from maxcurves.curves import curve_params

CORPUS = [(2, 1, 3), (3, 1, 3), (2, 1, 5)]


@pytest.fixture(scope="session")
def p213():
    return curve_params(2, 1, 3)


@pytest.fixture(scope="session")
def p313():
    return curve_params(3, 1, 3)


@pytest.fixture(scope="session")
def p215():
    return curve_params(2, 1, 5)


@pytest.fixture(scope="session")
def g213(p213):
    return GammaGroup(p213)


@pytest.fixture(scope="session")
def g313(p313):
    return GammaGroup(p313)


@pytest.fixture(scope="session", params=CORPUS, ids=lambda t: "p%d_h%d_n%d" % t)
def params(request):
    return curve_params(*request.param)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
