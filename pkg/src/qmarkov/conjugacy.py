"""The homeomorphism tower h_n: I_n -> J_n with h_n o F_n = G_n o h_{n+1}.

h_1 interpolates tau_1 linearly on the closure of every component of
I_1 minus A_1.  For n >= 2, h_n agrees with tau_n on A_n and on a component
(a1, a2) it is the inverse of G_{n-1}'s branch over (tau_n(a1), tau_n(a2))
applied to h_{n-1}(F_{n-1}(t)).  Evaluation is exact and memoized per level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InternalInvariantBreach, OutOfDomain, PatternFailed
from .markov_set import ms_component, ms_enumerate
from .numerics import AffineMap, FlaggedInterval, IntervalUnion, affine_invert, rat
from .pattern import InverseSequenceSpec, PatternReport, PatternWitness, pattern_verify


class Conjugacy:
    def __init__(self, source: InverseSequenceSpec, target: InverseSequenceSpec, witness: PatternWitness, report: PatternReport | None = None):
        self.source = source
        self.target = target
        self.witness = witness
        self.report = report
        self._cache: dict = {}
        self._overrides: dict = {}
        self._inverse: Conjugacy | None = None

    def materialize(self, levels: int) -> "Conjugacy":
        """Build the tau tower up front so later evaluation is read-only."""
        self.witness.tau(levels + 1)
        return self

    def eval(self, n: int, t) -> Fraction:
        t = rat(t)
        key = (n, t)
        if key in self._overrides:
            return self._overrides[key]
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if n < 1:
            raise ValueError("levels are numbered from 1")
        if t not in self.source.interval(n):
            raise OutOfDomain(f"{t} lies outside I_{n} = {self.source.interval(n)}")
        A = self.source.markov_set(n)
        tau = self.witness.tau(n)
        pos = A.position(t)
        if pos is not None:
            y = tau.target.value(tau.apply_pos(pos))
        else:
            a1, a2 = ms_component(A, t)
            b1, b2 = tau(a1), tau(a2)
            if n == 1:
                y = AffineMap.through(a1, b1, a2, b2)(t)
            else:
                val = self.source.function(n - 1).eval(t)
                if not val.is_singleton:
                    raise InternalInvariantBreach(f"F_{n - 1}({t}) = {val} is set-valued off A_{n}")
                z = self.eval(n - 1, val.only_point())
                branch = self.target.function(n - 1).branch_on(b1, b2)
                if branch is None or branch.slope == 0:
                    raise InternalInvariantBreach(f"G_{n - 1} has no invertible branch over ({b1}, {b2})")
                y = affine_invert(branch)(z)
                if not b1 < y < b2:
                    raise InternalInvariantBreach(f"h_{n}({t}) = {y} escapes the component ({b1}, {b2})")
        self._cache[key] = y
        return y

    __call__ = eval

    def eval_set(self, n: int, u: IntervalUnion) -> IntervalUnion:
        """Image of a set under the increasing homeomorphism h_n."""
        return IntervalUnion(
            FlaggedInterval(self.eval(n, p.lo), self.eval(n, p.hi), p.lo_closed, p.hi_closed) for p in u
        )

    def inverse(self) -> "Conjugacy":
        """The tower h_n^-1, built from the reversed sequences and inverted witness."""
        if self._inverse is None:
            self._inverse = Conjugacy(self.target, self.source, self.witness.inverted())
            self._inverse._inverse = self
        return self._inverse

    def with_override(self, n: int, t, y) -> "Conjugacy":
        """Copy with h_n(t) forced to y (for negative controls)."""
        other = Conjugacy(self.source, self.target, self.witness, self.report)
        other._overrides = dict(self._overrides)
        other._overrides[(n, rat(t))] = rat(y)
        return other

    def verify(self, n: int, grid: Iterable) -> "CommutationReport":
        return conj_verify(self, n, grid)


@dataclass
class CommutationReport:
    level: int
    checked: int
    counterexample: tuple | None = None  # (t, h_n(F_n(t)), G_n(h_{n+1}(t)))

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def to_dict(self) -> dict:
        out = {"level": self.level, "checked": self.checked, "verdict": "pass" if self.passed else "fail"}
        if self.counterexample is not None:
            t, lhs, rhs = self.counterexample
            out["counterexample"] = {"t": str(t), "h_of_F": str(lhs), "G_of_h": str(rhs)}
        return out


def conj_build(S1: InverseSequenceSpec, S2: InverseSequenceSpec, w: PatternWitness, explicit_depth: int = 8) -> Conjugacy:
    report = pattern_verify(S1, S2, w, explicit_depth)
    if not report.passed:
        raise PatternFailed(report)
    return Conjugacy(S1, S2, w, report)


def conj_eval(c: Conjugacy, n: int, t) -> Fraction:
    return c.eval(n, t)


def conj_eval_inverse(c: Conjugacy, n: int, y) -> Fraction:
    return c.inverse().eval(n, y)


def conj_verify(c: Conjugacy, n: int, grid: Iterable) -> CommutationReport:
    """Exact check of h_n(F_n(t)) == G_n(h_{n+1}(t)) on grid points of I_{n+1}."""
    F, G = c.source.function(n), c.target.function(n)
    checked = 0
    for t in grid:
        t = rat(t)
        lhs = c.eval_set(n, F.eval(t))
        rhs = G.eval(c.eval(n + 1, t))
        checked += 1
        if lhs != rhs:
            return CommutationReport(n, checked, (t, lhs, rhs))
    return CommutationReport(n, checked)


def verification_grid(spec: InverseSequenceSpec, m: int, size: int, depth: int = 6) -> list[Fraction]:
    """Members of A_m to tail depth ``depth``, midpoints between them, and
    uniform rationals, at least ``size`` points in all."""
    I = spec.interval(m)
    members = ms_enumerate(spec.markov_set(m), depth)
    pts = set(members)
    pts.update((a + b) / 2 for a, b in zip(members, members[1:]))
    k = max(2, size - len(pts))
    while True:
        grid = pts | {I.lo + (I.hi - I.lo) * Fraction(i, k) for i in range(k + 1)}
        if len(grid) >= size:
            return sorted(grid)
        k += size - len(grid)


def conjugacy_rows(c: Conjugacy, levels: int, grid_size: int, depth: int = 6) -> list[tuple[int, Fraction, Fraction]]:
    rows = []
    for n in range(1, levels + 1):
        for t in verification_grid(c.source, n, grid_size, depth):
            rows.append((n, t, c.eval(n, t)))
    return rows
