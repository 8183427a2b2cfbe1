import pytest

from unibound.distributions import DiscretePMF
from fractions import Fraction

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def three_point_pmf():
    """Lattice pmf on {-1, 0, 1} with probabilities 1/5, 1/2, 3/10."""
    return DiscretePMF([-1, 0, 1], [Fraction(1, 5), Fraction(1, 2), Fraction(3, 10)])


@pytest.fixture
def three_point_pmf_float():
    return DiscretePMF([-1.0, 0.0, 1.0], [0.2, 0.5, 0.3])


@pytest.fixture
def symmetric_gap_pmf():
    """Symmetric pmf on multiples of 5 with a hole around 0."""
    return DiscretePMF([-15, -10, -5, 5, 10, 15],
                       [Fraction(k, 12) for k in (1, 2, 3, 3, 2, 1)])


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
