"""Piecewise-affine, possibly discontinuous, possibly set-valued interval functions.

A :class:`QuasiMarkovFunction` is a list of affine pieces on disjoint
sub-intervals plus explicit (closed, possibly non-degenerate) values at a
finite set of override points.  Pieces and override points together
partition the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    AmbientMismatch,
    BoundarySide,
    FunctionError,
    MarkovSetError,
    NotFinitelyRepresentable,
    OutOfDomain,
)
from .markov_set import GeometricTail, MarkovSet
from .numerics import (
    AffineMap,
    FlaggedInterval,
    IntervalUnion,
    affine_apply,
    affine_invert,
    fmt,
    integer_log,
    interval_to_json,
    rat,
    union_to_json,
)


@dataclass(frozen=True)
class Piece:
    on: FlaggedInterval
    map: AffineMap


class QuasiMarkovFunction:
    def __init__(self, domain: FlaggedInterval, codomain: FlaggedInterval, pieces: Iterable[Piece], overrides: Mapping = ()):
        self.domain = domain
        self.codomain = codomain
        self.pieces = tuple(sorted(pieces, key=lambda p: (p.on.lo, not p.on.lo_closed)))
        ov = dict(overrides.items() if isinstance(overrides, Mapping) else overrides)
        self.overrides = {rat(k): v for k, v in ov.items()}
        self._validate()

    def _validate(self):
        for iv, name in ((self.domain, "domain"), (self.codomain, "codomain")):
            if not iv.is_closed or iv.is_singleton:
                raise FunctionError(f"{name} {iv} must be a nondegenerate closed interval")
        dom = IntervalUnion([self.domain])
        for p in self.pieces:
            if not IntervalUnion([p.on]).issubset(dom):
                raise FunctionError(f"piece {p.on} leaves the domain {self.domain}")
            img = affine_apply(p.map, IntervalUnion([p.on]))
            if not img.issubset(IntervalUnion([self.codomain])):
                raise FunctionError(f"piece on {p.on} maps onto {img}, outside the codomain {self.codomain}")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if IntervalUnion([a.on]).intersect(IntervalUnion([b.on])):
                raise FunctionError(f"pieces {a.on} and {b.on} overlap")
        for at, val in self.overrides.items():
            if at not in self.domain:
                raise FunctionError(f"override point {at} lies outside the domain")
            if not isinstance(val, IntervalUnion) or not val:
                raise FunctionError(f"override value at {at} must be a nonempty interval union")
            if not val.is_closed:
                raise FunctionError(f"override value at {at} must be closed, got {val}")
            if not val.issubset(IntervalUnion([self.codomain])):
                raise FunctionError(f"override value at {at} leaves the codomain")
            if any(at in p.on for p in self.pieces):
                raise FunctionError(f"override point {at} also lies in a piece")
        cover = IntervalUnion([p.on for p in self.pieces] + [FlaggedInterval.point(a) for a in self.overrides])
        if cover != dom:
            raise FunctionError(f"pieces and overrides cover {cover}, not the whole domain {self.domain}")

    # evaluation -----------------------------------------------------------

    def piece_at(self, t: Fraction) -> Piece | None:
        for p in self.pieces:
            if t in p.on:
                return p
        return None

    def piece_left(self, a: Fraction) -> Piece:
        """Piece covering (a - eps, a)."""
        for p in self.pieces:
            if p.on.lo < a <= p.on.hi:
                return p
        raise BoundarySide(f"no piece to the left of {a}")

    def piece_right(self, a: Fraction) -> Piece:
        """Piece covering (a, a + eps)."""
        for p in self.pieces:
            if p.on.lo <= a < p.on.hi:
                return p
        raise BoundarySide(f"no piece to the right of {a}")

    def eval(self, t) -> IntervalUnion:
        t = rat(t)
        if t not in self.domain:
            raise OutOfDomain(f"{t} lies outside the domain {self.domain}")
        if t in self.overrides:
            return self.overrides[t]
        return IntervalUnion.point(self.piece_at(t).map(t))

    __call__ = eval

    def value(self, t) -> Fraction:
        """The single value at t; raises if F(t) is not a singleton."""
        v = self.eval(t)
        if not v.is_singleton:
            raise FunctionError(f"F({t}) = {v} is not a single point")
        return v.only_point()

    def limit(self, a, side: str) -> Fraction:
        a = rat(a)
        if a not in self.domain:
            raise OutOfDomain(f"{a} lies outside the domain {self.domain}")
        if side == "left":
            if a == self.domain.lo:
                raise BoundarySide(f"no left-hand limit at the left endpoint {a}")
            return self.piece_left(a).map(a)
        if side == "right":
            if a == self.domain.hi:
                raise BoundarySide(f"no right-hand limit at the right endpoint {a}")
            return self.piece_right(a).map(a)
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")

    def branch_on(self, a: Fraction, b: Fraction) -> AffineMap | None:
        """The single affine map F agrees with on the open interval (a, b), or None."""
        maps = set()
        for p in self.pieces:
            if p.on.hi > a and p.on.lo < b:
                maps.add(p.map)
        if len(maps) != 1:
            return None
        m = maps.pop()
        for at, val in self.overrides.items():
            if a < at < b and val != IntervalUnion.point(m(at)):
                return None
        return m

    def image(self, u: IntervalUnion) -> IntervalUnion:
        """Exact image F(u) of a set, with open ends where branch limits are not attained."""
        parts = []
        for p in self.pieces:
            x = u.intersect(IntervalUnion([p.on]))
            if x:
                parts.extend(affine_apply(p.map, x).parts)
        for at, val in self.overrides.items():
            if at in u:
                parts.extend(val.parts)
        return IntervalUnion(parts)

    @property
    def is_single_valued(self) -> bool:
        return all(v.is_singleton for v in self.overrides.values())

    def breakpoints(self) -> list[Fraction]:
        pts = {self.domain.lo, self.domain.hi}
        for p in self.pieces:
            pts.update((p.on.lo, p.on.hi))
        pts.update(self.overrides)
        return sorted(pts)

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "domain": [fmt(self.domain.lo), fmt(self.domain.hi)],
            "codomain": [fmt(self.codomain.lo), fmt(self.codomain.hi)],
            "pieces": [
                {"on": interval_to_json(p.on), "slope": fmt(p.map.slope), "intercept": fmt(p.map.intercept)}
                for p in self.pieces
            ],
            "overrides": [{"at": fmt(a), "value": union_to_json(v)} for a, v in sorted(self.overrides.items())],
        }

    def __eq__(self, other):
        if not isinstance(other, QuasiMarkovFunction):
            return NotImplemented
        return (self.domain, self.codomain, self.pieces, self.overrides) == (
            other.domain,
            other.codomain,
            other.pieces,
            other.overrides,
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.pieces, tuple(sorted(self.overrides.items()))))

    def __repr__(self):
        return f"QuasiMarkovFunction({self.domain} -> {self.codomain}, {len(self.pieces)} pieces, {len(self.overrides)} overrides)"


def piecewise_linear(nodes: Sequence[tuple], domain=None, codomain=None) -> QuasiMarkovFunction:
    """Continuous function interpolating ``(x, y)`` nodes (x strictly increasing)."""
    xs = [rat(x) for x, _ in nodes]
    ys = [rat(y) for _, y in nodes]
    domain = domain or FlaggedInterval.closed(xs[0], xs[-1])
    codomain = codomain or FlaggedInterval.closed(min(ys), max(ys))
    pieces = []
    for i in range(len(xs) - 1):
        on = FlaggedInterval(xs[i], xs[i + 1], i == 0, True)
        pieces.append(Piece(on, AffineMap.through(xs[i], ys[i], xs[i + 1], ys[i + 1])))
    return QuasiMarkovFunction(domain, codomain, pieces)


def qmf_eval(F: QuasiMarkovFunction, t) -> IntervalUnion:
    return F.eval(t)


def qmf_limit(F: QuasiMarkovFunction, a, side: str) -> Fraction:
    return F.limit(a, side)


# ---------------------------------------------------------------------------
# Markov pair verification


@dataclass(frozen=True)
class Violation:
    axiom: int
    location: object
    detail: str

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "location": _loc(self.location), "detail": self.detail}


def _loc(loc):
    if isinstance(loc, Fraction):
        return fmt(loc)
    if isinstance(loc, tuple):
        return [_loc(x) for x in loc]
    return loc


@dataclass
class PairReport:
    violations: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if not self.violations else "fail"

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "violations": [v.to_dict() for v in self.violations]}


@dataclass(frozen=True)
class TailImage:
    """Symbolic image of a source tail from index ``threshold`` on.

    For k >= threshold the k-th element lies inside one affine piece ``map``
    and its image is element ``base + ratio * (k - threshold)`` of target
    tail ``target``.
    """

    threshold: int
    map: AffineMap
    target: int
    base: int
    ratio: int

    def image_index(self, k: int) -> int:
        return self.base + self.ratio * (k - self.threshold)


@dataclass
class PairAnalysis:
    members: list
    components: list
    depths: dict
    tail_images: dict
    violations: list


def _tail_image(F: QuasiMarkovFunction, A2: MarkovSet, i: int, t: GeometricTail, violations: list):
    """Return (threshold, TailImage | None) for tail ``t`` of the source set."""
    piece = F.piece_right(t.limit) if t.descending else F.piece_left(t.limit)
    n = 0
    while t.element(n) not in piece.on:
        n += 1
    m = piece.map
    if m.slope == 0:
        violations.append(Violation(2, f"tail {i} components from index {n}", f"F is constant ({m.intercept}) there"))
        return n, None
    k = n
    for _ in range(len(A2.points) + 2):
        y = m(t.element(k))
        pos = A2.position(y) if y in A2.ambient else None
        if pos is None:
            # explicit checks up to k report the offending member
            return k, None
        if pos[0] == "tail":
            break
        k += 1
    else:
        return k, None
    u = A2.tails[pos[1]]
    conj = m.compose(t.generator).compose(affine_invert(m))
    r = integer_log(u.slope, conj.slope)
    if conj.fixed_point() != u.limit or r is None or r < 1:
        violations.append(
            Violation(
                1,
                f"tail {i} elements from index {k}",
                f"images form the orbit of {conj}, which is not contained in tail {pos[1]} of the target set",
            )
        )
        return k, None
    return k, TailImage(k, m, pos[1], pos[2], r)


def analyze_pair(
    F: QuasiMarkovFunction,
    A1: MarkovSet,
    A2: MarkovSet,
    explicit_depth: int = 8,
    min_depths: Mapping[int, int] | None = None,
) -> PairAnalysis:
    """Check the three Markov pair axioms, explicitly near the top of each
    tail and symbolically (via affine conjugation of the tail generator)
    beyond."""
    if A1.ambient != F.domain:
        raise AmbientMismatch(f"A1 lives on {A1.ambient} but F is defined on {F.domain}")
    if A2.ambient != F.codomain:
        raise AmbientMismatch(f"A2 lives on {A2.ambient} but F maps into {F.codomain}")
    violations: list = []
    images, depths = {}, {}
    for i, t in enumerate(A1.tails):
        k, img = _tail_image(F, A2, i, t, violations)
        images[i] = img
        depths[i] = max(explicit_depth, k + 1, (min_depths or {}).get(i, 0))
    members, comps = A1.explicit_components(depths)
    for a in members:
        val = F.eval(a)
        for b in val.boundary(F.codomain):
            if b not in A2:
                violations.append(Violation(1, a, f"boundary point {b} of F({a}) = {val} is not in A2"))
    for a, b in comps:
        m = F.branch_on(a, b)
        if m is None:
            violations.append(Violation(2, (a, b), "F is not a single continuous monotone branch on this component"))
        elif m.slope == 0:
            violations.append(Violation(2, (a, b), f"F is constant ({m.intercept}) on this component"))
        for end, side in ((a, "right"), (b, "left")):
            lim = F.limit(end, side)
            if lim not in A2:
                sign = "+" if side == "right" else "-"
                violations.append(Violation(3, (a, b), f"one-sided limit of F at {end}{sign} is {lim}, not in A2"))
    return PairAnalysis(members, comps, depths, images, violations)


def qmf_verify_pair(F: QuasiMarkovFunction, A1: MarkovSet, A2: MarkovSet, explicit_depth: int = 8) -> PairReport:
    return PairReport(analyze_pair(F, A1, A2, explicit_depth).violations)


# ---------------------------------------------------------------------------
# candidate pair generation


def _capture(F: QuasiMarkovFunction, x: Fraction) -> GeometricTail | None:
    """A tail seeded at x if one contraction piece drives x's orbit to its fixed point."""
    if x in F.overrides:
        return None
    p = F.piece_at(x)
    m = p.map
    if not (0 < m.slope < 1):
        return None
    z = m.fixed_point()
    if z == x:
        return None
    lo, hi = (z, x) if x > z else (x, z)
    # the half-open segment from x up to (excluding) z must stay in the piece
    seg = FlaggedInterval(lo, hi, x < z, x > z)
    if not IntervalUnion([seg]).issubset(IntervalUnion([p.on])):
        return None
    return GeometricTail(x, m, z)


def qmf_generate_pair(F: QuasiMarkovFunction, max_points: int = 500) -> tuple[MarkovSet, MarkovSet]:
    """Heuristic search for a Markov pair.

    Breakpoints, endpoints and override points seed the first set; forward
    images and one-sided limits are added until the set closes up, with an
    orbit captured as a geometric tail once a single contraction piece
    drives it to that piece's fixed point.
    """
    seeds = F.breakpoints()

    def targets(x):
        out = list(F.eval(x).boundary(F.codomain))
        if x != F.domain.lo:
            out.append(F.limit(x, "left"))
        if x != F.domain.hi:
            out.append(F.limit(x, "right"))
        return out

    if F.domain != F.codomain:
        A1 = MarkovSet(F.domain, tuple(seeds))
        image_pts = {F.codomain.lo, F.codomain.hi}
        for x in seeds:
            image_pts.update(targets(x))
        return A1, MarkovSet(F.codomain, tuple(image_pts))

    points: set = set()
    tails: list = []
    pending: list = []
    for x in seeds:
        points.add(x)
        pending.extend(targets(x))
    while pending:
        x = pending.pop()
        if x in points or any(t.index_of(x) is not None for t in tails):
            continue
        tail = _capture(F, x)
        if tail is not None:
            tails.append(tail)
            pending.append(tail.limit)
            pending.extend(targets(x))
            continue
        points.add(x)
        if len(points) > max_points:
            raise NotFinitelyRepresentable(f"orbit closure exceeded {max_points} points without settling into a tail")
        pending.extend(targets(x))
    try:
        A = MarkovSet(F.domain, tuple(points), tuple(tails))
    except MarkovSetError as exc:
        raise NotFinitelyRepresentable(f"generated orbits do not form a valid Markov set: {exc}") from exc
    return A, A


def qmf_graph_samples(F: QuasiMarkovFunction, n: int) -> list[tuple[Fraction, Fraction]]:
    """Uniform n-point grid over the domain with the value(s) of F there."""
    if n < 2:
        raise ValueError("need at least two sample points")
    lo, hi = F.domain.lo, F.domain.hi
    out = []
    for i in range(n):
        t = lo + (hi - lo) * Fraction(i, n - 1)
        for y in F.eval(t).endpoints():
            out.append((t, y))
    return out
