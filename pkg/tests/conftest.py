import mpmath
import pytest

from cmbsd.curve import CurveModel
from cmbsd.qfield import QuadField


@pytest.fixture(autouse=True)
def _restore_precision():
    prec = mpmath.mp.prec
    yield
    mpmath.mp.prec = prec


@pytest.fixture(scope="session")
def E32():
    return CurveModel([0, 0, 0, -1, 0])


@pytest.fixture(scope="session")
def E49():
    return CurveModel([1, -1, 0, -2, -1])


@pytest.fixture(scope="session")
def E27():
    # y^2 = x^3 - 1, CM by Z[(1+sqrt-3)/2]
    return CurveModel([0, 0, 0, 0, -1])


@pytest.fixture(scope="session")
def Qi():
    return QuadField(-4)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
