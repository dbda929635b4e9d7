from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings

from qmarkov import systems

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def skew_a():
    return systems.skew_tent(Fraction(3, 5), Fraction(1, 2))


@pytest.fixture(scope="session")
def skew_b():
    return systems.skew_tent(Fraction(2, 3), Fraction(3, 5))


@pytest.fixture(scope="session")
def fpq_a():
    return systems.fpq(Fraction(1, 2), Fraction(1, 4))


@pytest.fixture(scope="session")
def fpq_b():
    return systems.fpq(Fraction(3, 5), Fraction(1, 2))


@pytest.fixture(scope="session")
def halving():
    return systems.halving()


@pytest.fixture(scope="session")
def ident():
    return systems.identity()
