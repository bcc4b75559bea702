"""Shared instances and hypothesis strategies."""
import numpy as np
import pytest
from hypothesis import strategies as st

from siegel_lab.cones import Cone
from siegel_lab.group import SiegelDomain
from siegel_lab.hermitian import HermitianMap, RealForm

SKEW = np.array([[0, 1j], [-1j, 0]])


def half_plane():
    return SiegelDomain(Cone.orthant(1), HermitianMap.zero(1, 0))


def ball():
    """``Im z > |u|^2``."""
    return SiegelDomain(Cone.orthant(1), HermitianMap([[[1.0]]]))


def skew_instance():
    """N=2, M=2 with ``Im Q(e1, e2) = (0, -1)`` over the cone spanned by (1,1), (1,-1)."""
    cone = Cone.simplicial([[1.0, 1.0], [1.0, -1.0]])
    return SiegelDomain(cone, HermitianMap([np.eye(2), SKEW]))


def diag_pair():
    """N=2, M=2 orthant with ``H_1 = diag(1, 0)``, ``H_2 = diag(0, 1)``."""
    return SiegelDomain(Cone.orthant(2), HermitianMap([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


finite = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)


def cvec(M):
    return st.lists(st.tuples(finite, finite), min_size=M, max_size=M).map(
        lambda xs: np.array([complex(a, b) for a, b in xs], dtype=complex))


def rvec(n):
    return st.lists(finite, min_size=n, max_size=n).map(np.array)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_hermitian_map(rng, N, M):
    H = rng.standard_normal((N, M, M)) + 1j * rng.standard_normal((N, M, M))
    return HermitianMap(0.5 * (H + np.conj(np.transpose(H, (0, 2, 1)))))


def standard_W(M):
    return RealForm.standard(M)


# --- acceptance summary -------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str):
    """Store one PASS/FAIL line for the terminal summary and assert the outcome."""
    line = f"{'PASS' if ok else 'FAIL'} [{number}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
