"""Exact scalars, affine maps and endpoint-flagged interval unions.

Everything is built on :class:`fractions.Fraction`; no floating point value
ever enters a computation. Decimal renderings exist only for output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import EmptyInterval, ZeroSlope

Rational = Fraction
RationalLike = Union[Fraction, int, str]

FLAGS = ("cc", "co", "oc", "oo")


def rat(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would silently smuggle rounding into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fmt(x: Fraction) -> str:
    """Serialize as ``"p/q"`` or ``"n"``."""
    return str(x)


def to_decimal(x: Fraction, digits: int = 12) -> str:
    """Render with ``digits`` significant digits (advisory output only)."""
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, "g") if d != 0 else "0"


def integer_log(base: Fraction, value: Fraction) -> int | None:
    """Return k >= 0 with ``base**k == value``, or None.

    ``base`` must satisfy 0 < base < 1 and ``value`` must be positive.
    Because powers of a reduced fraction stay reduced, the exponent can be
    read off the bit lengths and confirmed exactly.
    """
    if value == 1:
        return 0
    if not (0 < value < 1):
        return None
    est = (math.log(value.numerator) - math.log(value.denominator)) / (
        math.log(base.numerator) - math.log(base.denominator)
    )
    k0 = max(0, int(round(est)))
    for k in (k0, k0 - 1, k0 + 1, k0 - 2, k0 + 2):
        if k >= 0 and base ** k == value:
            return k
    return None


@dataclass(frozen=True)
class AffineMap:
    """t -> slope * t + intercept."""

    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", rat(self.slope))
        object.__setattr__(self, "intercept", rat(self.intercept))

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def through(cls, x0, y0, x1, y1) -> "AffineMap":
        """The affine map sending x0 to y0 and x1 to y1 (x0 != x1)."""
        x0, y0, x1, y1 = map(rat, (x0, y0, x1, y1))
        if x0 == x1:
            raise ValueError("interpolation nodes coincide")
        slope = (y1 - y0) / (x1 - x0)
        return cls(slope, y0 - slope * x0)

    def __call__(self, t: Fraction) -> Fraction:
        return self.slope * t + self.intercept

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self o inner."""
        return AffineMap(self.slope * inner.slope, self.slope * inner.intercept + self.intercept)

    def power(self, k: int) -> "AffineMap":
        out = AffineMap.identity()
        for _ in range(k):
            out = self.compose(out)
        return out

    @property
    def invertible(self) -> bool:
        return self.slope != 0

    def fixed_point(self) -> Fraction | None:
        if self.slope == 1:
            return None
        return self.intercept / (1 - self.slope)

    def __str__(self):
        return f"t -> {self.slope}*t + {self.intercept}"


def affine_invert(m: AffineMap) -> AffineMap:
    if m.slope == 0:
        raise ZeroSlope(f"affine map {m} has slope 0")
    return AffineMap(1 / m.slope, -m.intercept / m.slope)


@dataclass(frozen=True, order=False)
class FlaggedInterval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", rat(self.lo))
        object.__setattr__(self, "hi", rat(self.hi))
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise EmptyInterval(f"empty interval {self.lo}..{self.hi} ({self.flags})")

    @classmethod
    def closed(cls, lo, hi) -> "FlaggedInterval":
        return cls(rat(lo), rat(hi), True, True)

    @classmethod
    def point(cls, x) -> "FlaggedInterval":
        x = rat(x)
        return cls(x, x, True, True)

    @classmethod
    def make(cls, lo, hi, flags: str = "cc") -> "FlaggedInterval | None":
        """Like the constructor but returns None for an empty result."""
        lo, hi = rat(lo), rat(hi)
        lc, hc = flags[0] == "c", flags[1] == "c"
        if lo > hi or (lo == hi and not (lc and hc)):
            return None
        return cls(lo, hi, lc, hc)

    @property
    def flags(self) -> str:
        return ("c" if self.lo_closed else "o") + ("c" if self.hi_closed else "o")

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    @property
    def is_closed(self) -> bool:
        return self.lo_closed and self.hi_closed

    def __contains__(self, x) -> bool:
        x = rat(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __str__(self):
        if self.is_singleton:
            return "{" + str(self.lo) + "}"
        return f"{'[' if self.lo_closed else '('}{self.lo},{self.hi}{']' if self.hi_closed else ')'}"


def _intersect_parts(p: FlaggedInterval, q: FlaggedInterval) -> FlaggedInterval | None:
    if p.lo > q.lo:
        lo, lc = p.lo, p.lo_closed
    elif q.lo > p.lo:
        lo, lc = q.lo, q.lo_closed
    else:
        lo, lc = p.lo, p.lo_closed and q.lo_closed
    if p.hi < q.hi:
        hi, hc = p.hi, p.hi_closed
    elif q.hi < p.hi:
        hi, hc = q.hi, q.hi_closed
    else:
        hi, hc = p.hi, p.hi_closed and q.hi_closed
    if lo > hi or (lo == hi and not (lc and hc)):
        return None
    return FlaggedInterval(lo, hi, lc, hc)


class IntervalUnion:
    """Canonical finite union of flagged intervals.

    Parts are sorted, pairwise disjoint and never adjacent, so two unions are
    equal as sets exactly when their part tuples are equal.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[FlaggedInterval] = ()):
        object.__setattr__(self, "parts", _normalize(parts))

    def __setattr__(self, name, value):
        raise AttributeError("IntervalUnion is immutable")

    @classmethod
    def point(cls, x) -> "IntervalUnion":
        return cls([FlaggedInterval.point(x)])

    @classmethod
    def closed(cls, lo, hi) -> "IntervalUnion":
        return cls([FlaggedInterval.closed(lo, hi)])

    def __iter__(self) -> Iterator[FlaggedInterval]:
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __bool__(self):
        return bool(self.parts)

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"IntervalUnion({self})"

    def __str__(self):
        return " U ".join(str(p) for p in self.parts) if self.parts else "{}"

    def __contains__(self, x) -> bool:
        return any(x in p for p in self.parts)

    @property
    def is_singleton(self) -> bool:
        return len(self.parts) == 1 and self.parts[0].is_singleton

    @property
    def is_closed(self) -> bool:
        return all(p.is_closed for p in self.parts)

    def only_point(self) -> Fraction:
        if not self.is_singleton:
            raise ValueError(f"{self} is not a singleton")
        return self.parts[0].lo

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        return union_intersect(self, other)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.parts + other.parts)

    def issubset(self, other: "IntervalUnion") -> bool:
        return union_intersect(self, other) == self

    def endpoints(self) -> list[Fraction]:
        out: list[Fraction] = []
        for p in self.parts:
            out.append(p.lo)
            if p.hi != p.lo:
                out.append(p.hi)
        return out

    def boundary(self, ambient: FlaggedInterval | None = None) -> list[Fraction]:
        """Topological boundary, relative to ``ambient`` when given.

        A nondegenerate part flush against an ambient endpoint does not put
        that endpoint in the relative boundary.
        """
        out = []
        for p in self.parts:
            for x in ((p.lo,) if p.is_singleton else (p.lo, p.hi)):
                if ambient is not None and not p.is_singleton and x in (ambient.lo, ambient.hi):
                    continue
                out.append(x)
        return out

    def inf(self) -> Fraction:
        return self.parts[0].lo

    def sup(self) -> Fraction:
        return self.parts[-1].hi


def _normalize(parts: Iterable[FlaggedInterval]) -> tuple[FlaggedInterval, ...]:
    items = sorted((p for p in parts if p is not None), key=lambda p: (p.lo, not p.lo_closed))
    merged: list[list] = []
    for p in items:
        if merged:
            cur = merged[-1]
            lo, hi, lc, hc = cur
            touches = p.lo < hi or (p.lo == hi and (hc or p.lo_closed))
            if touches:
                if p.hi > hi:
                    cur[1], cur[3] = p.hi, p.hi_closed
                elif p.hi == hi:
                    cur[3] = hc or p.hi_closed
                if p.lo == lo:
                    cur[2] = lc or p.lo_closed
                continue
        merged.append([p.lo, p.hi, p.lo_closed, p.hi_closed])
    return tuple(FlaggedInterval(lo, hi, lc, hc) for lo, hi, lc, hc in merged)


def union_normalize(parts: Sequence[FlaggedInterval]) -> IntervalUnion:
    return IntervalUnion(parts)


def union_intersect(u: IntervalUnion, v: IntervalUnion) -> IntervalUnion:
    out = []
    for p in u.parts:
        for q in v.parts:
            if q.lo > p.hi:
                break
            r = _intersect_parts(p, q)
            if r is not None:
                out.append(r)
    return IntervalUnion(out)


def affine_apply(m: AffineMap, u: IntervalUnion) -> IntervalUnion:
    """Exact image m(u)."""
    out = []
    for p in u.parts:
        if m.slope == 0:
            out.append(FlaggedInterval.point(m.intercept))
        elif m.slope > 0:
            out.append(FlaggedInterval(m(p.lo), m(p.hi), p.lo_closed, p.hi_closed))
        else:
            out.append(FlaggedInterval(m(p.hi), m(p.lo), p.hi_closed, p.lo_closed))
    return IntervalUnion(out)


def interval_to_json(p: FlaggedInterval) -> list:
    return [fmt(p.lo), fmt(p.hi), p.flags]


def union_to_json(u: IntervalUnion) -> list:
    return [interval_to_json(p) for p in u.parts]
