from fractions import Fraction

import pytest

from ksn.inner import InnerFunction
from ksn.transfer import TransferStack

ACCEPTANCE_LINES = []


def make_stack(d=2, lam=Fraction(1, 2), eps=Fraction(1, 8), segments=2, seed=5,
               mode="rational"):
    """Stack on the default interval layout with a custom inner function."""
    upper = 1 + 2 * d * Fraction(eps)
    phi = InnerFunction.hashed(seed, segments, upper)
    return TransferStack(d, lam, eps, phi, tuple((3 * k, 3 * k + 1) for k in range(2 * d + 1)),
                         mode)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
