"""Totally disconnected closed sets made of points and geometric tails.

A member of a :class:`MarkovSet` is addressed by a *position*:
``("pt", x)`` for an explicit point (tail limits included) or
``("tail", i, k)`` for the k-th orbit element of tail ``i``.  Positions are
unique, which lets order isomorphisms between infinite sets be stored and
composed structurally instead of pointwise.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    CompositionMismatch,
    EndpointMissing,
    LimitMismatch,
    MarkovSetError,
    MemberPoint,
    NotContraction,
    NotOrderIsomorphic,
    OutOfAmbient,
    OverlapError,
)
from .numerics import AffineMap, FlaggedInterval, affine_invert, fmt, integer_log, rat

Pos = tuple  # ("pt", x) | ("tail", i, k)


@dataclass(frozen=True)
class GeometricTail:
    """The orbit seed, g(seed), g^2(seed), ... of an affine contraction g."""

    seed: Fraction
    generator: AffineMap
    limit: Fraction

    def __post_init__(self):
        object.__setattr__(self, "seed", rat(self.seed))
        object.__setattr__(self, "limit", rat(self.limit))
        s = self.generator.slope
        if s == 0 or abs(s) >= 1:
            raise NotContraction(f"tail generator slope {s} is not a contraction (need 0 < |slope| < 1)")
        if s < 0:
            raise NotContraction(f"tail generator slope {s} is negative; the orbit would alternate around its limit")
        if self.generator.fixed_point() != self.limit:
            raise LimitMismatch(
                f"declared limit {self.limit} differs from the generator's fixed point {self.generator.fixed_point()}"
            )
        if self.seed == self.limit:
            raise MarkovSetError(f"tail seed {self.seed} coincides with its limit")

    @property
    def slope(self) -> Fraction:
        return self.generator.slope

    @property
    def descending(self) -> bool:
        return self.seed > self.limit

    @property
    def span(self) -> tuple[Fraction, Fraction]:
        return (self.limit, self.seed) if self.descending else (self.seed, self.limit)

    def element(self, k: int) -> Fraction:
        return self.limit + self.slope ** k * (self.seed - self.limit)

    def orbit(self, depth: int) -> list[Fraction]:
        out, x = [], self.seed
        for _ in range(depth):
            out.append(x)
            x = self.generator(x)
        return out

    def in_span(self, x: Fraction) -> bool:
        """True on the half-open span between limit (excluded) and seed (included)."""
        if self.descending:
            return self.limit < x <= self.seed
        return self.seed <= x < self.limit

    def index_of(self, x: Fraction) -> int | None:
        if not self.in_span(x):
            return None
        return integer_log(self.slope, (x - self.limit) / (self.seed - self.limit))

    def bracket(self, x: Fraction) -> int:
        """k with x between element(k+1) (excluded) and element(k) (included).

        ``x`` must lie in the half-open span.
        """
        r = (x - self.limit) / (self.seed - self.limit)
        s = self.slope
        est = (math.log(r.numerator) - math.log(r.denominator)) / (
            math.log(s.numerator) - math.log(s.denominator)
        )
        k = max(0, int(math.floor(est)))
        while k > 0 and s ** k < r:
            k -= 1
        while s ** (k + 1) >= r:
            k += 1
        return k

    def to_dict(self) -> dict:
        return {
            "seed": fmt(self.seed),
            "slope": fmt(self.slope),
            "intercept": fmt(self.generator.intercept),
            "limit": fmt(self.limit),
        }


@dataclass(frozen=True)
class MarkovSet:
    """Finite points plus geometric tails inside a closed ambient interval.

    Construction validates and normalizes: tail limits are added to the
    points, explicit points that duplicate orbit elements are dropped.
    """

    ambient: FlaggedInterval
    points: tuple = ()
    tails: tuple = ()
    _point_set: frozenset = field(default=frozenset(), init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        amb = self.ambient
        if not amb.is_closed or amb.is_singleton:
            raise MarkovSetError(f"ambient {amb} must be a nondegenerate closed interval")
        tails = tuple(self.tails)
        for i, t in enumerate(tails):
            for what, v in (("seed", t.seed), ("limit", t.limit)):
                if v not in amb:
                    raise OutOfAmbient(f"tail {i} {what} {v} lies outside {amb}")
        pts = set()
        for p in self.points:
            p = rat(p)
            if p not in amb:
                raise OutOfAmbient(f"point {p} lies outside {amb}")
            pts.add(p)
        pts.update(t.limit for t in tails)
        for i, t in enumerate(tails):
            lo1, hi1 = t.span
            for j in range(i + 1, len(tails)):
                u = tails[j]
                lo2, hi2 = u.span
                lo, hi = max(lo1, lo2), min(hi1, hi2)
                if lo < hi or (lo == hi and not (lo == t.limit and lo == u.limit)):
                    raise OverlapError(f"tails {i} and {j} overlap on [{lo},{hi}]")
        for p in sorted(pts):
            for i, t in enumerate(tails):
                if t.in_span(p):
                    if t.index_of(p) is None:
                        raise OverlapError(f"point {p} falls strictly inside tail {i} between two orbit elements")
                    if any(p == u.limit for u in tails):
                        raise OverlapError(f"point {p} is both a limit and an element of tail {i}")
                    pts.discard(p)
        object.__setattr__(self, "tails", tails)
        object.__setattr__(self, "points", tuple(sorted(pts)))
        object.__setattr__(self, "_point_set", frozenset(pts))
        for end, name in ((amb.lo, "left"), (amb.hi, "right")):
            if self.position(end) is None:
                raise EndpointMissing(
                    f"ambient {name} endpoint {end} is not a member; a Markov set must contain both "
                    f"endpoints of its interval (if the set was copied from an orbit description, "
                    f"the endpoint may have been omitted and should be adjoined)"
                )

    # membership -----------------------------------------------------------

    def position(self, x) -> Pos | None:
        x = rat(x)
        if x in self._point_set:
            return ("pt", x)
        for i, t in enumerate(self.tails):
            k = t.index_of(x)
            if k is not None:
                return ("tail", i, k)
        return None

    def value(self, pos: Pos) -> Fraction:
        if pos[0] == "pt":
            return pos[1]
        return self.tails[pos[1]].element(pos[2])

    def __contains__(self, x) -> bool:
        x = rat(x)
        return x in self.ambient and self.position(x) is not None

    # order structure ------------------------------------------------------

    def _neighbours(self, x: Fraction) -> tuple[Fraction | None, Fraction | None]:
        """Largest member < x and smallest member > x (None when accumulated or absent)."""
        i = bisect.bisect_left(self.points, x)
        below = self.points[i - 1] if i > 0 else None
        j = bisect.bisect_right(self.points, x)
        above = self.points[j] if j < len(self.points) else None
        below_acc = above_acc = False
        for t in self.tails:
            lo, hi = t.span
            if t.descending:
                if x == t.limit:
                    above_acc = True
                    continue
                if x > hi:
                    cand_b, cand_a = hi, None
                elif x < lo:
                    continue
                else:
                    k = t.bracket(x)
                    if t.element(k) == x:
                        cand_b = t.element(k + 1)
                        cand_a = t.element(k - 1) if k > 0 else None
                    else:
                        cand_b, cand_a = t.element(k + 1), t.element(k)
            else:
                if x == t.limit:
                    below_acc = True
                    continue
                if x < lo:
                    cand_b, cand_a = None, lo
                elif x > hi:
                    continue
                else:
                    k = t.bracket(x)
                    if t.element(k) == x:
                        cand_a = t.element(k + 1)
                        cand_b = t.element(k - 1) if k > 0 else None
                    else:
                        cand_a, cand_b = t.element(k + 1), t.element(k)
            if cand_b is not None and (below is None or cand_b > below):
                below = cand_b
            if cand_a is not None and (above is None or cand_a < above):
                above = cand_a
        return (None if below_acc else below), (None if above_acc else above)

    def successor(self, x) -> Fraction | None:
        return self._neighbours(rat(x))[1]

    def predecessor(self, x) -> Fraction | None:
        return self._neighbours(rat(x))[0]

    def component(self, x) -> tuple[Fraction, Fraction]:
        return ms_component(self, x)

    def enumerate(self, depth: Union[int, Mapping[int, int]]) -> list[Fraction]:
        return ms_enumerate(self, depth)

    def explicit_components(self, depths: Mapping[int, int]) -> tuple[list[Fraction], list[tuple[Fraction, Fraction]]]:
        """Members to the given per-tail depths and the true components between them.

        The gap between a tail limit and the deepest enumerated element of
        that tail is omitted: it contains the unenumerated remainder.
        """
        members = ms_enumerate(self, depths)
        skip = set()
        for i, t in enumerate(self.tails):
            last = t.element(depths[i] - 1)
            skip.add((t.limit, last) if t.descending else (last, t.limit))
        comps = [(a, b) for a, b in zip(members, members[1:]) if (a, b) not in skip]
        return members, comps

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "ambient": [fmt(self.ambient.lo), fmt(self.ambient.hi)],
            "points": [fmt(p) for p in self.points],
            "tails": [t.to_dict() for t in self.tails],
        }

    @classmethod
    def from_dict(cls, desc: Mapping) -> "MarkovSet":
        lo, hi = desc["ambient"]
        tails = [
            GeometricTail(rat(t["seed"]), AffineMap(rat(t["slope"]), rat(t.get("intercept", 0))), rat(t["limit"]))
            for t in desc.get("tails", ())
        ]
        return cls(FlaggedInterval.closed(rat(lo), rat(hi)), tuple(rat(p) for p in desc.get("points", ())), tuple(tails))

    def __str__(self):
        parts = [str(p) for p in self.points]
        parts += [f"orbit({t.seed}; {t.generator})" for t in self.tails]
        return "{" + ", ".join(parts) + "}"


def ms_validate(desc) -> MarkovSet:
    """Build a validated set from a JSON-shaped description (or pass one through)."""
    if isinstance(desc, MarkovSet):
        return desc
    return MarkovSet.from_dict(desc)


def ms_contains(S: MarkovSet, x) -> bool:
    x = rat(x)
    if x not in S.ambient:
        raise OutOfAmbient(f"{x} lies outside {S.ambient}")
    return S.position(x) is not None


def ms_component(S: MarkovSet, x) -> tuple[Fraction, Fraction]:
    """The component (a, b) of ambient minus S containing x."""
    x = rat(x)
    if x not in S.ambient:
        raise OutOfAmbient(f"{x} lies outside {S.ambient}")
    if S.position(x) is not None:
        raise MemberPoint(f"{x} is a member of the set")
    a, b = S._neighbours(x)
    return a, b


def ms_enumerate(S: MarkovSet, depth: Union[int, Mapping[int, int]]) -> list[Fraction]:
    out = set(S.points)
    for i, t in enumerate(S.tails):
        d = depth if isinstance(depth, int) else depth[i]
        out.update(t.orbit(d))
    return sorted(out)


# ---------------------------------------------------------------------------
# order isomorphisms


@dataclass(frozen=True)
class TailMap:
    """Source tail element k goes to ``head[k]`` for k < start, else to
    element k + shift of target tail."""

    target: int
    shift: int
    start: int = 0
    head: tuple = ()

    def apply(self, k: int) -> Pos:
        if k < self.start:
            return self.head[k]
        return ("tail", self.target, k + self.shift)

    def normalized(self) -> "TailMap":
        start, head = self.start, self.head
        floor = max(0, -self.shift)
        while start > floor and head[start - 1] == ("tail", self.target, start - 1 + self.shift):
            start -= 1
        return TailMap(self.target, self.shift, start, tuple(head[:start]))


class OrderIso:
    """A strictly increasing bijection between two Markov sets.

    Stored as a map on positions: every explicit point of the source goes
    to a target position, and every source tail is eventually an index
    shift onto one target tail.
    """

    def __init__(self, source: MarkovSet, target: MarkovSet, point_map: Mapping[Fraction, Pos], tail_maps: Sequence[TailMap]):
        self.source = source
        self.target = target
        self.point_map = dict(point_map)
        self.tail_maps = tuple(tm.normalized() for tm in tail_maps)
        if set(self.point_map) != set(source.points):
            raise NotOrderIsomorphic("point map does not cover exactly the source points")
        if len(self.tail_maps) != len(source.tails):
            raise NotOrderIsomorphic("one tail map per source tail is required")

    @classmethod
    def identity(cls, S: MarkovSet) -> "OrderIso":
        return cls(S, S, {p: ("pt", p) for p in S.points}, [TailMap(i, 0) for i in range(len(S.tails))])

    def _key(self):
        return (self.source, self.target, tuple(sorted(self.point_map.items())), self.tail_maps)

    def __eq__(self, other):
        if not isinstance(other, OrderIso):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"OrderIso({self.source} -> {self.target})"

    @property
    def is_identity(self) -> bool:
        return self.source == self.target and self == OrderIso.identity(self.source)

    def apply_pos(self, pos: Pos) -> Pos:
        if pos[0] == "pt":
            return self.point_map[pos[1]]
        return self.tail_maps[pos[1]].apply(pos[2])

    def __call__(self, x) -> Fraction:
        pos = self.source.position(x)
        if pos is None:
            raise MemberPoint(f"{x} is not a member of the source set")
        return self.target.value(self.apply_pos(pos))

    def inverse(self) -> "OrderIso":
        explicit: dict = {}

        def put(tpos, spos):
            if tpos in explicit:
                raise NotOrderIsomorphic(f"two members map to {self.target.value(tpos)}")
            explicit[tpos] = spos

        for x, tpos in self.point_map.items():
            put(tpos, ("pt", x))
        for i, tm in enumerate(self.tail_maps):
            for k in range(tm.start):
                put(tm.head[k], ("tail", i, k))
        eventual: dict[int, tuple[int, TailMap]] = {}
        for i, tm in enumerate(self.tail_maps):
            if tm.target in eventual:
                raise NotOrderIsomorphic(f"source tails {eventual[tm.target][0]} and {i} both run onto target tail {tm.target}")
            if not 0 <= tm.target < len(self.target.tails):
                raise NotOrderIsomorphic(f"tail map refers to missing target tail {tm.target}")
            eventual[tm.target] = (i, tm)
        for tpos in explicit:
            if tpos[0] == "pt":
                if tpos[1] not in self.target._point_set:
                    raise NotOrderIsomorphic(f"{tpos[1]} is not a point of the target set")
            else:
                j, k = tpos[1], tpos[2]
                if j not in eventual or k < 0:
                    raise NotOrderIsomorphic(f"invalid target tail position {tpos}")
                _, tm = eventual[j]
                if k >= tm.start + tm.shift:
                    raise NotOrderIsomorphic(f"target element {self.target.value(tpos)} is hit twice")
        for p in self.target.points:
            if ("pt", p) not in explicit:
                raise NotOrderIsomorphic(f"target point {p} is not hit")
        inv_maps: list = [None] * len(self.target.tails)
        for j in range(len(self.target.tails)):
            if j not in eventual:
                raise NotOrderIsomorphic(f"target tail {j} is not hit")
            i, tm = eventual[j]
            start = tm.start + tm.shift
            head = []
            for k in range(start):
                if ("tail", j, k) not in explicit:
                    raise NotOrderIsomorphic(f"target element {self.target.tails[j].element(k)} is not hit")
                head.append(explicit[("tail", j, k)])
            inv_maps[j] = TailMap(i, -tm.shift, start, tuple(head))
        inv_points = {p: explicit[("pt", p)] for p in self.target.points}
        return OrderIso(self.target, self.source, inv_points, inv_maps)

    def compose(self, inner: "OrderIso") -> "OrderIso":
        """self o inner (inner is applied first)."""
        if inner.target != self.source:
            raise CompositionMismatch("inner map's target differs from outer map's source")
        pm = {x: self.apply_pos(inner.apply_pos(("pt", x))) for x in inner.source.points}
        tms = []
        for i, tm1 in enumerate(inner.tail_maps):
            tm2 = self.tail_maps[tm1.target]
            shift = tm1.shift + tm2.shift
            start = max(tm1.start, tm2.start - tm1.shift, 0, -shift)
            head = tuple(self.apply_pos(inner.apply_pos(("tail", i, k))) for k in range(start))
            tms.append(TailMap(tm2.target, shift, start, head))
        return OrderIso(inner.source, self.target, pm, tms)

    def check(self, extra_depth: int = 3) -> None:
        """Raise NotOrderIsomorphic unless this is a strictly increasing bijection."""
        self.inverse()
        S, T = self.source, self.target
        for i, (t, tm) in enumerate(zip(S.tails, self.tail_maps)):
            u = T.tails[tm.target]
            if t.descending != u.descending:
                raise NotOrderIsomorphic(f"tail {i} and its image tail {tm.target} run in opposite directions")
            if self.point_map[t.limit] != ("pt", u.limit):
                raise NotOrderIsomorphic(f"limit {t.limit} of tail {i} is not sent to the limit {u.limit}")
        depth = max([tm.start for tm in self.tail_maps] + [0]) + extra_depth
        xs = ms_enumerate(S, depth)
        ys = [self(x) for x in xs]
        for (x0, y0), (x1, y1) in zip(zip(xs, ys), zip(xs[1:], ys[1:])):
            if not y0 < y1:
                raise NotOrderIsomorphic(f"order reversed: {x0} < {x1} but images {y0} >= {y1}")
        if ys and (ys[0] != T.ambient.lo or ys[-1] != T.ambient.hi):
            raise NotOrderIsomorphic("ambient endpoints are not matched")

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        pairs = [[fmt(x), fmt(self.target.value(pos))] for x, pos in sorted(self.point_map.items())]
        tails = []
        for i, tm in enumerate(self.tail_maps):
            t = self.source.tails[i]
            pairs += [[fmt(t.element(k)), fmt(self.target.value(tm.head[k]))] for k in range(tm.start)]
            tails.append([i, tm.target] + ([tm.shift] if tm.shift else []))
        return {"pairs": pairs, "tails": tails}

    @classmethod
    def from_pairs(cls, source: MarkovSet, target: MarkovSet, pairs: Iterable, tails: Iterable) -> "OrderIso":
        """Build from explicit value pairs plus tail correspondences ``[i, j(, shift)]``."""
        tail_rules = {}
        for entry in tails:
            i, j = int(entry[0]), int(entry[1])
            shift = int(entry[2]) if len(entry) > 2 else 0
            if i in tail_rules:
                raise NotOrderIsomorphic(f"source tail {i} listed twice")
            tail_rules[i] = (j, shift)
        pm, overrides = {}, {}
        for x, y in pairs:
            x, y = rat(x), rat(y)
            sp, tp = source.position(x), target.position(y)
            if sp is None:
                raise NotOrderIsomorphic(f"{x} is not a member of the source set")
            if tp is None:
                raise NotOrderIsomorphic(f"{y} is not a member of the target set")
            if sp[0] == "pt":
                pm[x] = tp
            else:
                overrides.setdefault(sp[1], {})[sp[2]] = tp
        missing = set(source.points) - set(pm)
        if missing:
            raise NotOrderIsomorphic(f"no image given for source points {sorted(missing)}")
        tms = []
        for i in range(len(source.tails)):
            if i not in tail_rules:
                raise NotOrderIsomorphic(f"no correspondence given for source tail {i}")
            j, shift = tail_rules[i]
            ov = overrides.get(i, {})
            start = max([k + 1 for k in ov] + [max(0, -shift)])
            head = tuple(ov.get(k, ("tail", j, k + shift)) for k in range(start))
            tms.append(TailMap(j, shift, start, head))
        return cls(source, target, pm, tms)


def _blocks(S: MarkovSet) -> list[tuple]:
    """Maximal order blocks in ambient order.

    Each tail absorbs explicit points that continue its orbit backwards and
    sit directly next to it, so one set described two ways yields the same
    block sequence.
    """
    limits = {t.limit for t in S.tails}
    used: set = set()
    ext: dict[int, list] = {}
    for i, t in enumerate(S.tails):
        chain, cur = [], t.seed
        back = affine_invert(t.generator)
        while True:
            prev = back(cur)
            nb = S.successor(cur) if t.descending else S.predecessor(cur)
            if nb is None or nb != prev or prev not in S._point_set or prev in limits or prev in used:
                break
            chain.append(prev)
            used.add(prev)
            cur = prev
        ext[i] = chain
    blocks = [((p, 0), ("pt", p)) for p in S.points if p not in used]
    for i, t in enumerate(S.tails):
        kind = "desc" if t.descending else "asc"
        blocks.append(((t.limit, 1 if t.descending else -1), (kind, i, ext[i])))
    blocks.sort(key=lambda b: b[0])
    return [b[1] for b in blocks]


def ms_order_iso(S: MarkovSet, T: MarkovSet) -> OrderIso:
    """The canonical strictly increasing bijection S -> T (block matching)."""
    if S == T:
        return OrderIso.identity(S)
    bs, bt = _blocks(S), _blocks(T)
    kinds_s = [b[0] for b in bs]
    kinds_t = [b[0] for b in bt]
    if kinds_s != kinds_t:
        raise NotOrderIsomorphic(f"block structures differ: {kinds_s} vs {kinds_t}")
    pm: dict = {}
    tms: list = [None] * len(S.tails)
    for b, c in zip(bs, bt):
        if b[0] == "pt":
            pm[b[1]] = ("pt", c[1])
            continue
        i, ext_s = b[1], b[2]
        j, ext_t = c[1], c[2]
        e, f = len(ext_s), len(ext_t)

        def target_canon(n, j=j, ext_t=ext_t, f=f):
            return ("pt", ext_t[f - 1 - n]) if n < f else ("tail", j, n - f)

        for n in range(e):
            pm[ext_s[e - 1 - n]] = target_canon(n)
        shift = e - f
        start = max(0, f - e)
        tms[i] = TailMap(j, shift, start, tuple(target_canon(k + e) for k in range(start)))
    iso = OrderIso(S, T, pm, tms)
    iso.check()
    return iso
