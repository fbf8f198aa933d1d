import numpy as np
import pytest
from hypothesis import settings

from mpconc.qstate import DensityMatrix, PureState

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def engine_closed_form(t):
    """PPT spectrum of rho(t): single-qubit cuts give (9t-1)/8 excess, the two
    entangled 2|2 cuts have six eigenvalues (1-t)/16 - t/4 (excess 12(t/4 - (1-t)/16)).
    The seven-cut bound is then (9t-1)^2/64 + 3(5t-1)^2/64 above the thresholds."""
    a = (9 * t - 1) ** 2 / 64 if t > 1 / 9 else 0.0
    b = 3 * (5 * t - 1) ** 2 / 64 if t > 1 / 5 else 0.0
    return a + b


@pytest.fixture
def bell() -> PureState:
    return PureState((2, 2), (ket("00") + ket("11")) / np.sqrt(2))


@pytest.fixture
def double_bell() -> PureState:
    """Bell pair on 1,2 times Bell pair on 3,4."""
    v = (ket("0000") + ket("0011") + ket("1100") + ket("1111")) / 2
    return PureState((2, 2, 2, 2), v)


@pytest.fixture
def ghz3() -> PureState:
    return PureState((2, 2, 2), (ket("000") + ket("111")) / np.sqrt(2))


@pytest.fixture
def ghz4() -> PureState:
    return PureState((2, 2, 2, 2), (ket("0000") + ket("1111")) / np.sqrt(2))


@pytest.fixture
def mixed16() -> DensityMatrix:
    return DensityMatrix((2, 2, 2, 2), np.eye(16) / 16)
