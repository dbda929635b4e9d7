from __future__ import annotations

from fractions import Fraction as Q

from qmarkov.markov_set import MarkovSet
from qmarkov.numerics import FlaggedInterval
from qmarkov.pattern import InverseSequenceSpec, Level
from qmarkov.qm_function import piecewise_linear

UNIT = FlaggedInterval.closed(0, 1)


def pl(*nodes):
    return piecewise_linear(list(nodes), UNIT, UNIT)


def three_level(c=Q(1, 2)) -> InverseSequenceSpec:
    """Preperiod 1, period 2: identity, then tent and flip alternating, all on {0, c, 1}."""
    A = MarkovSet(UNIT, (0, c, 1))
    fs = [pl((0, 0), (1, 1)), pl((0, 0), (c, 1), (1, 0)), pl((0, 1), (c, c), (1, 0))]
    return InverseSequenceSpec(tuple(Level(UNIT, f, A) for f in fs), 1, 2)
