"""Threads, image chains and emptiness certificates for inverse limits.

A thread prefix (x_1, ..., x_N) must satisfy x_n in F_n(x_{n+1}).  Emptiness
of the full limit is only semi-decided: either a finite intersection of the
image chain is already empty, or the chain is eventually self-similar under
an affine contraction whose fixed point it avoids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .conjugacy import Conjugacy
from .errors import InternalInvariantBreach, InvalidThread
from .numerics import AffineMap, FlaggedInterval, IntervalUnion, affine_apply, fmt, rat
from .pattern import InverseSequenceSpec
from .qm_function import QuasiMarkovFunction

CERTIFIED_EMPTY = "CertifiedEmpty"
NONEMPTY_WITNESS = "NonemptyWitness"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Thread:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(rat(x) for x in self.coords))

    @property
    def depth(self) -> int:
        return len(self.coords)

    def __getitem__(self, n: int) -> Fraction:
        """1-based coordinate x_n."""
        return self.coords[n - 1]

    def problems(self, spec: InverseSequenceSpec) -> list[str]:
        out = []
        for n, x in enumerate(self.coords, start=1):
            if x not in spec.interval(n):
                out.append(f"x_{n} = {x} is outside I_{n}")
            elif n < self.depth and x not in spec.function(n).eval(self.coords[n]):
                out.append(f"x_{n} = {x} is not in F_{n}(x_{n + 1}) = {spec.function(n).eval(self.coords[n])}")
        return out

    def is_valid(self, spec: InverseSequenceSpec) -> bool:
        return not self.problems(spec)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.coords) + ")"


def representative(u: IntervalUnion) -> Fraction:
    return u.parts[0].midpoint()


def thread_from_seed(spec: InverseSequenceSpec, seed, depth: int) -> Thread:
    """Fix x_depth = seed and map forward through F_{depth-1}, ..., F_1."""
    xs = [rat(seed)]
    for n in range(depth - 1, 0, -1):
        xs.append(representative(spec.function(n).eval(xs[-1])))
    return Thread(tuple(reversed(xs)))


def il_image_chain(spec: InverseSequenceSpec, depth: int) -> list[IntervalUnion]:
    """S_n = F_1(F_2(...F_n(I_{n+1})...)) for n = 1..depth."""
    if depth < 1:
        raise ValueError("depth must be positive")
    chain = []
    for n in range(1, depth + 1):
        s = IntervalUnion([spec.interval(n + 1)])
        for k in range(n, 0, -1):
            s = spec.function(k).image(s)
        chain.append(s)
    return chain


def _periodic_chain(spec: InverseSequenceSpec, length: int) -> list[IntervalUnion]:
    """T_k = F^k(I) for the repeating map of a period-1 spec, k = 1..length."""
    F = spec.function(spec.preperiod + 1)
    out = [F.image(IntervalUnion([F.domain]))]
    while len(out) < length:
        out.append(F.image(out[-1]))
    return out


def fixed_points(F: QuasiMarkovFunction) -> list[Fraction]:
    """Least solution of x in F(x) on every piece and override point, ascending."""
    sols = []
    for p in F.pieces:
        m = p.map
        if m.slope != 1:
            x = m.fixed_point()
            if x in p.on:
                sols.append(x)
        elif m.intercept == 0:
            sols.append(p.on.lo if p.on.lo_closed else p.on.midpoint())
    sols.extend(a for a, v in F.overrides.items() if a in v)
    return sorted(set(sols))


def il_fixed_thread(spec: InverseSequenceSpec, depth: int = 1) -> Thread | None:
    if spec.preperiod != 0 or spec.period != 1:
        return None
    sols = fixed_points(spec.function(1))
    if not sols:
        return None
    return Thread((sols[0],) * depth)


@dataclass(frozen=True)
class SelfSimilarity:
    """T_{k+1} = phi(T_k) for k >= start, where T is the image chain of the
    repeating map (equal to S when there is no preperiod)."""

    start: int
    phi: AffineMap
    fixed_point: Fraction
    checked_to: int
    offset: int = 0

    def to_dict(self) -> dict:
        return {
            "form": "self-similar",
            "N0": self.start,
            "phi": {"slope": fmt(self.phi.slope), "intercept": fmt(self.phi.intercept)},
            "z": fmt(self.fixed_point),
            "checked_to": self.checked_to,
            "preperiod_offset": self.offset,
        }


@dataclass(frozen=True)
class EmptyIntersection:
    depth: int

    def to_dict(self) -> dict:
        return {"form": "finite-intersection", "depth": self.depth}


@dataclass
class EmptinessVerdict:
    kind: str
    certificate: SelfSimilarity | EmptyIntersection | None = None
    witness: Thread | None = None
    depth: int = 0

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "depth": self.depth}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.witness is not None:
            out["witness"] = [fmt(x) for x in self.witness.coords]
        return out


def _commutes_on(F: QuasiMarkovFunction, phi: AffineMap, X: IntervalUnion) -> bool:
    """F(phi(x)) == phi(F(x)) for every x in X.

    X is cut at every point where F or F o phi could change formula; on each
    open cell both sides are single affine maps, compared symbolically, and
    the cut points are compared one by one.
    """
    marks = set(F.breakpoints()) | set(F.overrides)
    inv = AffineMap(1 / phi.slope, -phi.intercept / phi.slope)
    cuts = sorted(marks | {inv(c) for c in marks} | set(X.endpoints()))
    for x in cuts:
        if x in X and F.eval(phi(x)) != affine_apply(phi, F.eval(x)):
            return False
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        if mid not in X:
            continue
        p, q = F.piece_at(mid), F.piece_at(phi(mid))
        if p is None or q is None:
            return False
        if q.map.compose(phi) != phi.compose(p.map):
            return False
    return True


def verify_certificate(spec: InverseSequenceSpec, cert: SelfSimilarity | EmptyIntersection) -> bool:
    """Re-check a certificate from scratch."""
    if isinstance(cert, EmptyIntersection):
        chain = il_image_chain(spec, cert.depth)
        acc = chain[0]
        for s in chain[1:]:
            acc = acc.intersect(s)
        return not acc
    if spec.period != 1 or cert.offset != spec.preperiod:
        return False
    phi, z = cert.phi, cert.fixed_point
    if not (0 < abs(phi.slope) < 1) or phi(z) != z:
        return False
    T = _periodic_chain(spec, cert.checked_to)
    X = T[cert.start - 1]
    for k in range(cert.start, cert.checked_to):
        if affine_apply(phi, T[k - 1]) != T[k]:
            return False
    if z in X:
        return False
    # What makes the finite check extend to every later level.
    F = spec.function(spec.preperiod + 1)
    if not affine_apply(phi, X).issubset(X):
        return False
    return _commutes_on(F, phi, X)


def _find_self_similarity(spec: InverseSequenceSpec, depth: int) -> SelfSimilarity | None:
    T = _periodic_chain(spec, depth)
    for start in range(1, depth):
        X, Y = T[start - 1], T[start]
        if not X or not Y or X.inf() == X.sup():
            continue
        candidates = [AffineMap.through(X.inf(), Y.inf(), X.sup(), Y.sup()),
                      AffineMap.through(X.inf(), Y.sup(), X.sup(), Y.inf())]
        for phi in candidates:
            if not (0 < abs(phi.slope) < 1):
                continue
            if not all(affine_apply(phi, T[k - 1]) == T[k] for k in range(start, depth)):
                continue
            cert = SelfSimilarity(start, phi, phi.fixed_point(), depth, spec.preperiod)
            if verify_certificate(spec, cert):
                return cert
    return None


def il_detect_empty(spec: InverseSequenceSpec, depth: int) -> EmptinessVerdict:
    if depth < 2:
        raise ValueError("depth must be at least 2")
    chain = il_image_chain(spec, depth)
    acc = chain[0]
    for n, s in enumerate(chain[1:], start=2):
        acc = acc.intersect(s)
        if not acc:
            return EmptinessVerdict(CERTIFIED_EMPTY, EmptyIntersection(n), depth=depth)
    if spec.period == 1:
        cert = _find_self_similarity(spec, depth)
        if cert is not None:
            return EmptinessVerdict(CERTIFIED_EMPTY, cert, depth=depth)
    thread = il_fixed_thread(spec, depth)
    if thread is not None:
        return EmptinessVerdict(NONEMPTY_WITNESS, witness=thread, depth=depth)
    return EmptinessVerdict(UNKNOWN, depth=depth)


def il_sample_threads(spec: InverseSequenceSpec, depth: int, count: int) -> list[Thread]:
    I = spec.interval(depth)
    if count == 1:
        seeds = [I.midpoint()]
    else:
        seeds = [I.lo + (I.hi - I.lo) * Fraction(i, count - 1) for i in range(count)]
    seen, out = set(), []
    for s in seeds:
        t = thread_from_seed(spec, s, depth)
        if t.coords not in seen:
            seen.add(t.coords)
            out.append(t)
    return out


def il_map_thread(c: Conjugacy, t: Thread) -> Thread:
    bad = t.problems(c.source)
    if bad:
        raise InvalidThread("; ".join(bad))
    image = Thread(tuple(c.eval(n, x) for n, x in enumerate(t.coords, start=1)))
    bad = image.problems(c.target)
    if bad:
        raise InternalInvariantBreach("transported thread is invalid: " + "; ".join(bad))
    return image


def thread_rows(threads: Sequence[Thread]) -> list[tuple[Fraction, ...]]:
    return [t.coords for t in threads]
