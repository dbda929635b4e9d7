"""Eventually periodic inverse sequences and the same-pattern relation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import SpecError, WitnessDomainMismatch, NotOrderIsomorphic
from .markov_set import MarkovSet, OrderIso, ms_order_iso
from .numerics import FlaggedInterval, fmt
from .qm_function import PairReport, QuasiMarkovFunction, _tail_image, analyze_pair


def _slot(n: int, preperiod: int, period: int) -> int:
    """0-based storage slot of level n >= 1."""
    if n < 1:
        raise ValueError(f"levels are numbered from 1, got {n}")
    if n <= preperiod + period:
        return n - 1
    return preperiod + (n - preperiod - 1) % period


@dataclass(frozen=True)
class Level:
    interval: FlaggedInterval
    function: QuasiMarkovFunction  # I_{n+1} -> I_n
    markov_set: MarkovSet  # inside I_n


@dataclass(frozen=True)
class InverseSequenceSpec:
    levels: tuple
    preperiod: int = 0
    period: int = 1

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if self.preperiod < 0 or self.period < 1:
            raise SpecError("preperiod must be >= 0 and period >= 1")
        if len(self.levels) != self.preperiod + self.period:
            raise SpecError(f"expected {self.preperiod + self.period} levels, got {len(self.levels)}")
        for n in range(1, len(self.levels) + 1):
            lev, nxt = self.level(n), self.level(n + 1)
            if lev.markov_set.ambient != lev.interval:
                raise SpecError(f"level {n}: Markov set lives on {lev.markov_set.ambient}, not on {lev.interval}")
            if lev.function.codomain != lev.interval:
                raise SpecError(f"level {n}: function maps into {lev.function.codomain}, not into I_{n} = {lev.interval}")
            if lev.function.domain != nxt.interval:
                raise SpecError(f"level {n}: function is defined on {lev.function.domain}, not on I_{n + 1} = {nxt.interval}")

    @classmethod
    def constant(cls, function: QuasiMarkovFunction, markov_set: MarkovSet) -> "InverseSequenceSpec":
        return cls((Level(function.domain, function, markov_set),), 0, 1)

    def level(self, n: int) -> Level:
        return self.levels[_slot(n, self.preperiod, self.period)]

    def interval(self, n: int) -> FlaggedInterval:
        return self.level(n).interval

    def function(self, n: int) -> QuasiMarkovFunction:
        return self.level(n).function

    def markov_set(self, n: int) -> MarkovSet:
        return self.level(n).markov_set

    @property
    def is_constant(self) -> bool:
        return self.preperiod == 0 and self.period == 1

    def check_pairs(self, explicit_depth: int = 8) -> list[tuple[int, PairReport]]:
        """Markov pair report of (A_{n+1}, A_n) for F_n over the finite description."""
        out = []
        for n in range(1, len(self.levels) + 1):
            rep = PairReport(
                analyze_pair(self.function(n), self.markov_set(n + 1), self.markov_set(n), explicit_depth).violations
            )
            out.append((n, rep))
        return out


def seq_level(spec: InverseSequenceSpec, n: int) -> Level:
    return spec.level(n)


# ---------------------------------------------------------------------------
# witnesses

WitnessEntry = Union[str, OrderIso, dict]


def _resolve_entry(entry: WitnessEntry, source: MarkovSet, target: MarkovSet) -> OrderIso:
    if isinstance(entry, OrderIso):
        return entry
    if entry == "canonical":
        return ms_order_iso(source, target)
    if isinstance(entry, dict):
        return OrderIso.from_pairs(source, target, entry.get("pairs", ()), entry.get("tails", ()))
    raise ValueError(f"unrecognized witness entry {entry!r}")


class PatternWitness:
    """tau_1 plus the bonding bijections phi_n: A_{n+1} -> A_n and psi_n: B_{n+1} -> B_n.

    ``phis`` follow the periodicity of the first sequence, ``psis`` that of
    the second.  The tower tau_{n+1} = psi_n^-1 o tau_n o phi_n is cached.
    """

    def __init__(self, tau1: OrderIso, phis: Sequence[OrderIso], psis: Sequence[OrderIso], phi_shape=(0, 1), psi_shape=(0, 1)):
        self.tau1 = tau1
        self.phis = tuple(phis)
        self.psis = tuple(psis)
        self.phi_shape = tuple(phi_shape)
        self.psi_shape = tuple(psi_shape)
        if len(self.phis) != sum(self.phi_shape) or len(self.psis) != sum(self.psi_shape):
            raise ValueError("witness lists do not match their declared periodic shape")
        self._taus = [tau1]

    @classmethod
    def build(cls, S1: InverseSequenceSpec, S2: InverseSequenceSpec, tau1: WitnessEntry = "canonical", phis="canonical", psis="canonical") -> "PatternWitness":
        t1 = _resolve_entry(tau1, S1.markov_set(1), S2.markov_set(1))

        def expand(entries, S):
            count = len(S.levels)
            if isinstance(entries, (str, dict, OrderIso)):
                entries = [entries] * count
            entries = list(entries)
            if len(entries) == 1 and count > 1:
                entries = entries * count
            if len(entries) != count:
                raise ValueError(f"expected {count} witness entries, got {len(entries)}")
            return [_resolve_entry(e, S.markov_set(n + 1), S.markov_set(n)) for n, e in enumerate(entries, start=1)]

        return cls(t1, expand(phis, S1), expand(psis, S2), (S1.preperiod, S1.period), (S2.preperiod, S2.period))

    def phi(self, n: int) -> OrderIso:
        return self.phis[_slot(n, *self.phi_shape)]

    def psi(self, n: int) -> OrderIso:
        return self.psis[_slot(n, *self.psi_shape)]

    def tau(self, n: int) -> OrderIso:
        while len(self._taus) < n:
            m = len(self._taus)
            self._taus.append(self.psi(m).inverse().compose(self._taus[-1].compose(self.phi(m))))
        return self._taus[n - 1]

    def inverted(self) -> "PatternWitness":
        """Witness for the reversed pair of sequences."""
        return PatternWitness(self.tau1.inverse(), self.psis, self.phis, self.psi_shape, self.phi_shape)

    def to_dict(self) -> dict:
        def enc(iso):
            return "canonical" if iso.is_identity else iso.to_dict()

        return {
            "tau1": self.tau1.to_dict(),
            "phis": [enc(p) for p in self.phis],
            "psis": [enc(p) for p in self.psis],
        }


def pattern_tau(w: PatternWitness, n: int) -> OrderIso:
    return w.tau(n)


def pattern_witness_constant(A: MarkovSet, B: MarkovSet) -> PatternWitness:
    return PatternWitness(ms_order_iso(A, B), [OrderIso.identity(A)], [OrderIso.identity(B)])


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class PatternViolation:
    level: int
    condition: str  # "pair" | "tau-bijection" | "a" | "c"
    location: object
    detail: str

    def to_dict(self) -> dict:
        from .qm_function import _loc

        return {"level": self.level, "condition": self.condition, "location": _loc(self.location), "detail": self.detail}


@dataclass
class PatternReport:
    violations: list = field(default_factory=list)
    levels_checked: int = 0
    conclusive: bool = False

    @property
    def verdict(self) -> str:
        return "pass" if not self.violations else "fail"

    @property
    def passed(self) -> bool:
        return not self.violations

    def conditions(self) -> set:
        return {v.condition for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "levels_checked": self.levels_checked,
            "conclusive": self.conclusive,
            "violations": [v.to_dict() for v in self.violations],
        }


def _check_domains(S1, S2, w: PatternWitness, upto: int):
    if w.tau1.source != S1.markov_set(1) or w.tau1.target != S2.markov_set(1):
        raise WitnessDomainMismatch("tau_1 must map A_1 onto B_1")
    for n in range(1, upto + 1):
        phi, psi = w.phi(n), w.psi(n)
        if phi.source != S1.markov_set(n + 1) or phi.target != S1.markov_set(n):
            raise WitnessDomainMismatch(f"phi_{n} must map A_{n + 1} onto A_{n}")
        if psi.source != S2.markov_set(n + 1) or psi.target != S2.markov_set(n):
            raise WitnessDomainMismatch(f"psi_{n} must map B_{n + 1} onto B_{n}")


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _check_level(S1, S2, w: PatternWitness, n: int, explicit_depth: int, out: list) -> None:
    F, G = S1.function(n), S2.function(n)
    A_next, A_n = S1.markov_set(n + 1), S1.markov_set(n)
    B_next, B_n = S2.markov_set(n + 1), S2.markov_set(n)
    tau_next, tau_n = w.tau(n + 1), w.tau(n)

    # symbolic part: for deep tail elements the commutation reduces to an
    # identity between orbit indices, linear in k
    scratch: list = []
    g_images = {j: _tail_image(G, B_n, j, t, scratch)[1] for j, t in enumerate(B_next.tails)}
    min_depths = {}
    for i, t in enumerate(A_next.tails):
        img_f = _tail_image(F, A_n, i, t, scratch)[1]
        tm_next = tau_next.tail_maps[i]
        img_g = g_images[tm_next.target]
        if img_f is None or img_g is None:
            continue  # reported as a pair failure
        tm_n = tau_n.tail_maps[img_f.target]
        d, e, r = tm_next.shift, tm_n.shift, img_f.ratio
        k_star = max(img_f.threshold, tm_next.start, img_g.threshold - d)
        if tm_n.start > img_f.base:
            k_star = max(k_star, img_f.threshold + _ceil_div(tm_n.start - img_f.base, r))
        lhs = img_f.base - r * img_f.threshold + e
        rhs = img_g.base + img_g.ratio * (d - img_g.threshold)
        if tm_n.target != img_g.target or r != img_g.ratio or lhs != rhs:
            out.append(
                PatternViolation(
                    n,
                    "a",
                    f"tail {i} of A_{n + 1} from index {k_star}",
                    "images of deep tail elements do not correspond under tau "
                    f"(F side: tail {tm_n.target} index {r}k{lhs:+d}; G side: tail {img_g.target} index {img_g.ratio}k{rhs:+d})",
                )
            )
        min_depths[i] = k_star + 1

    fa = analyze_pair(F, A_next, A_n, explicit_depth, min_depths)
    ga = analyze_pair(G, B_next, B_n, explicit_depth)
    for v in fa.violations:
        out.append(PatternViolation(n, "pair", v.location, f"F_{n} with (A_{n + 1}, A_{n}), axiom {v.axiom}: {v.detail}"))
    for v in ga.violations:
        out.append(PatternViolation(n, "pair", v.location, f"G_{n} with (B_{n + 1}, B_{n}), axiom {v.axiom}: {v.detail}"))

    for a in fa.members:
        Fa = F.eval(a)
        b = tau_next(a)
        Gb = G.eval(b)
        if len(Fa) != len(Gb):
            out.append(PatternViolation(n, "a", a, f"F({a}) = {Fa} and G({b}) = {Gb} have different component counts"))
            continue
        for p, q in zip(Fa, Gb):
            if p.is_singleton != q.is_singleton:
                out.append(PatternViolation(n, "a", a, f"component {p} of F({a}) and {q} of G({b}) differ in kind"))
                continue
            for x, y in ((p.lo, q.lo), (p.hi, q.hi)):
                if x not in A_n:
                    continue  # reported as a pair failure
                if tau_n(x) != y:
                    out.append(
                        PatternViolation(n, "a", a, f"tau_{n}({x}) = {tau_n(x)} but the matching boundary point of G({b}) is {y}")
                    )
    for a, b in fa.components:
        for end, side in ((a, "right"), (b, "left")):
            c = F.limit(end, side)
            d = G.limit(tau_next(end), side)
            if c not in A_n:
                continue
            if tau_n(c) != d:
                sign = "+" if side == "right" else "-"
                out.append(
                    PatternViolation(
                        n,
                        "c",
                        (a, b),
                        f"lim F_{n} at {end}{sign} is {c} with tau_{n}({c}) = {tau_n(c)}, "
                        f"but lim G_{n} at {tau_next(end)}{sign} is {d}",
                    )
                )


def pattern_verify(
    S1: InverseSequenceSpec,
    S2: InverseSequenceSpec,
    w: PatternWitness,
    explicit_depth: int = 8,
    max_levels: int | None = None,
) -> PatternReport:
    """Check the same-pattern conditions level by level.

    Levels are checked until the tau tower is seen to repeat in step with
    the periodic data (then every later level repeats an earlier check and
    the report is conclusive) or until ``max_levels``.
    """
    pre = max(S1.preperiod, S2.preperiod, w.phi_shape[0], w.psi_shape[0])
    L = math.lcm(S1.period, S2.period, w.phi_shape[1], w.psi_shape[1])
    if max_levels is None:
        max_levels = pre + 4 * L + 2
    _check_domains(S1, S2, w, pre + L)
    report = PatternReport()
    out = report.violations
    checked_isos = set()
    for iso, label in [(w.tau1, (1, "tau_1"))] + [(w.phi(n), (n, f"phi_{n}")) for n in range(1, pre + L + 1)] + [
        (w.psi(n), (n, f"psi_{n}")) for n in range(1, pre + L + 1)
    ]:
        if id(iso) in checked_isos:
            continue
        checked_isos.add(id(iso))
        try:
            iso.check()
        except NotOrderIsomorphic as exc:
            out.append(PatternViolation(label[0], "tau-bijection", label[1], str(exc)))
    if out:
        report.levels_checked = 0
        return report
    n = 0
    while n < max_levels:
        n += 1
        try:
            _check_level(S1, S2, w, n, explicit_depth, out)
        except NotOrderIsomorphic as exc:
            out.append(PatternViolation(n, "tau-bijection", f"tau_{n + 1}", str(exc)))
            break
        m = n + 1
        if m - L > pre and w.tau(m) == w.tau(m - L):
            report.conclusive = True
            break
    report.levels_checked = n
    return report
