"""Ready-made constant inverse sequences on [0, 1]."""

from __future__ import annotations

from fractions import Fraction

from .markov_set import GeometricTail, MarkovSet
from .numerics import AffineMap, FlaggedInterval, IntervalUnion, rat
from .pattern import InverseSequenceSpec
from .qm_function import Piece, QuasiMarkovFunction, piecewise_linear, qmf_generate_pair

UNIT = FlaggedInterval.closed(0, 1)


def _constant(f: QuasiMarkovFunction, A: MarkovSet | None = None) -> InverseSequenceSpec:
    if A is None:
        A, _ = qmf_generate_pair(f)
    return InverseSequenceSpec.constant(f, A)


def skew_tent_map(a, b) -> QuasiMarkovFunction:
    """Rises linearly to (a, b), falls linearly to (1, 0)."""
    return piecewise_linear([(0, 0), (rat(a), rat(b)), (1, 0)], UNIT, UNIT)


def skew_tent(a, b) -> InverseSequenceSpec:
    """Needs b < a so that the left branch contracts toward 0."""
    return _constant(skew_tent_map(a, b))


def fpq_map(p, q) -> QuasiMarkovFunction:
    """q*t on [0, p], then the line from (p, 1) down to (1, 0) on (p, 1]."""
    p, q = rat(p), rat(q)
    left = Piece(FlaggedInterval(0, p, True, True), AffineMap(q, 0))
    right = Piece(FlaggedInterval(p, 1, False, True), AffineMap(-1 / (1 - p), 1 / (1 - p)))
    return QuasiMarkovFunction(UNIT, UNIT, [left, right])


def fpq(p, q) -> InverseSequenceSpec:
    return _constant(fpq_map(p, q))


def halving_map() -> QuasiMarkovFunction:
    """t/2 for t > 0 and 1 at 0; its inverse limit is empty."""
    return QuasiMarkovFunction(
        UNIT, UNIT,
        [Piece(FlaggedInterval(0, 1, False, True), AffineMap(Fraction(1, 2), 0))],
        {Fraction(0): IntervalUnion.point(1)},
    )


def halving() -> InverseSequenceSpec:
    A = MarkovSet(UNIT, (Fraction(0), Fraction(1)), (GeometricTail(Fraction(1, 2), AffineMap(Fraction(1, 2), 0), Fraction(0)),))
    return _constant(halving_map(), A)


def tent(apex=Fraction(1, 2)) -> InverseSequenceSpec:
    """Full tent with its peak (value 1) at ``apex``; A = {0, apex, 1}."""
    f = piecewise_linear([(0, 0), (rat(apex), 1), (1, 0)], UNIT, UNIT)
    return _constant(f, MarkovSet(UNIT, (Fraction(0), rat(apex), Fraction(1)), ()))


def tent_coarse() -> tuple[QuasiMarkovFunction, MarkovSet]:
    """The full tent with A = {0, 1}, which is not a Markov pair."""
    f = piecewise_linear([(0, 0), (Fraction(1, 2), 1), (1, 0)], UNIT, UNIT)
    return f, MarkovSet(UNIT, (Fraction(0), Fraction(1)), ())


def identity() -> InverseSequenceSpec:
    f = piecewise_linear([(0, 0), (1, 1)], UNIT, UNIT)
    return _constant(f, MarkovSet(UNIT, (Fraction(0), Fraction(1)), ()))


def bundled() -> dict[str, InverseSequenceSpec]:
    return {
        "skew_tent_3_5_1_2": skew_tent(Fraction(3, 5), Fraction(1, 2)),
        "skew_tent_2_3_3_5": skew_tent(Fraction(2, 3), Fraction(3, 5)),
        "fpq_1_2_1_4": fpq(Fraction(1, 2), Fraction(1, 4)),
        "fpq_3_5_1_2": fpq(Fraction(3, 5), Fraction(1, 2)),
        "halving": halving(),
        "tent": tent(),
        "tent_asym_1_3": tent(Fraction(1, 3)),
        "identity": identity(),
    }
