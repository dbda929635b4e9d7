"""JSON documents in, JSON and CSV out.

Rationals are written as ``"p/q"`` strings.  Parse failures raise
:class:`SchemaError` with a slash-separated path into the document.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import QMarkovError, SchemaError
from .markov_set import GeometricTail, MarkovSet
from .numerics import AffineMap, FlaggedInterval, IntervalUnion, fmt, rat, to_decimal
from .pattern import InverseSequenceSpec, Level, PatternWitness
from .qm_function import Piece, QuasiMarkovFunction


def _join(path: str, key) -> str:
    return f"{path}/{key}" if path else str(key)


def _need(doc, key, path, kind=None):
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    if key not in doc:
        raise SchemaError(path, f"missing key {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(_join(path, key), f"expected {getattr(kind, '__name__', kind)}")
    return val


def parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, float):
        raise SchemaError(path, f"{value!r} is a float; write rationals as \"p/q\" strings")
    try:
        return rat(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"not an exact rational: {value!r}") from exc


def parse_closed(value: Any, path: str) -> FlaggedInterval:
    if not isinstance(value, list) or len(value) != 2:
        raise SchemaError(path, "expected [lo, hi]")
    lo, hi = (parse_rational(v, _join(path, i)) for i, v in enumerate(value))
    if lo >= hi:
        raise SchemaError(path, f"need lo < hi, got [{lo}, {hi}]")
    return FlaggedInterval.closed(lo, hi)


def parse_flagged(value: Any, path: str) -> FlaggedInterval:
    if not isinstance(value, list) or len(value) != 3:
        raise SchemaError(path, "expected [lo, hi, flags]")
    lo, hi = (parse_rational(v, _join(path, i)) for i, v in enumerate(value[:2]))
    flags = value[2]
    if flags not in ("cc", "co", "oc", "oo"):
        raise SchemaError(_join(path, 2), f"flags must be one of cc, co, oc, oo; got {flags!r}")
    iv = FlaggedInterval.make(lo, hi, flags)
    if iv is None:
        raise SchemaError(path, "interval is empty")
    return iv


def parse_union(value: Any, path: str) -> IntervalUnion:
    if not isinstance(value, list) or not value:
        raise SchemaError(path, "expected a nonempty list of intervals")
    return IntervalUnion(parse_flagged(v, _join(path, i)) for i, v in enumerate(value))


def parse_markov_set(doc: Any, path: str = "") -> MarkovSet:
    ambient = parse_closed(_need(doc, "ambient", path), _join(path, "ambient"))
    points = doc.get("points", [])
    if not isinstance(points, list):
        raise SchemaError(_join(path, "points"), "expected a list")
    pts = tuple(parse_rational(p, _join(path, f"points/{i}")) for i, p in enumerate(points))
    tails = []
    for i, t in enumerate(doc.get("tails", [])):
        tp = _join(path, f"tails/{i}")
        seed = parse_rational(_need(t, "seed", tp), _join(tp, "seed"))
        slope = parse_rational(_need(t, "slope", tp), _join(tp, "slope"))
        intercept = parse_rational(t.get("intercept", "0"), _join(tp, "intercept"))
        limit = parse_rational(_need(t, "limit", tp), _join(tp, "limit"))
        try:
            tails.append(GeometricTail(seed, AffineMap(slope, intercept), limit))
        except QMarkovError as exc:
            raise SchemaError(tp, str(exc)) from exc
    try:
        return MarkovSet(ambient, pts, tuple(tails))
    except QMarkovError as exc:
        raise SchemaError(path, str(exc)) from exc


def parse_function(doc: Any, path: str = "") -> QuasiMarkovFunction:
    domain = parse_closed(_need(doc, "domain", path), _join(path, "domain"))
    codomain = parse_closed(_need(doc, "codomain", path), _join(path, "codomain"))
    pieces = []
    for i, p in enumerate(_need(doc, "pieces", path, list)):
        pp = _join(path, f"pieces/{i}")
        on = parse_flagged(_need(p, "on", pp), _join(pp, "on"))
        slope = parse_rational(_need(p, "slope", pp), _join(pp, "slope"))
        intercept = parse_rational(_need(p, "intercept", pp), _join(pp, "intercept"))
        pieces.append(Piece(on, AffineMap(slope, intercept)))
    overrides = {}
    for i, o in enumerate(doc.get("overrides", [])):
        op = _join(path, f"overrides/{i}")
        at = parse_rational(_need(o, "at", op), _join(op, "at"))
        if at in overrides:
            raise SchemaError(op, f"second override at {at}")
        overrides[at] = parse_union(_need(o, "value", op), _join(op, "value"))
    try:
        return QuasiMarkovFunction(domain, codomain, pieces, overrides)
    except QMarkovError as exc:
        raise SchemaError(path, str(exc)) from exc


def parse_system(doc: Any, path: str = "") -> InverseSequenceSpec:
    levels = []
    for i, lv in enumerate(_need(doc, "levels", path, list)):
        lp = _join(path, f"levels/{i}")
        interval = parse_closed(_need(lv, "interval", lp), _join(lp, "interval"))
        f = parse_function(_need(lv, "function", lp), _join(lp, "function"))
        A = parse_markov_set(_need(lv, "markov_set", lp), _join(lp, "markov_set"))
        levels.append(Level(interval, f, A))
    pre = doc.get("preperiod", 0)
    per = doc.get("period", len(levels) - pre)
    for key, val in (("preperiod", pre), ("period", per)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise SchemaError(_join(path, key), "expected an integer")
    try:
        return InverseSequenceSpec(tuple(levels), pre, per)
    except (QMarkovError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from exc


def system_to_dict(spec: InverseSequenceSpec) -> dict:
    return {
        "levels": [
            {
                "interval": [fmt(lv.interval.lo), fmt(lv.interval.hi)],
                "function": lv.function.to_dict(),
                "markov_set": lv.markov_set.to_dict(),
            }
            for lv in spec.levels
        ],
        "preperiod": spec.preperiod,
        "period": spec.period,
    }


def parse_witness(doc: Any, S1: InverseSequenceSpec, S2: InverseSequenceSpec, path: str = "") -> PatternWitness:
    if doc == "canonical" or doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object or \"canonical\"")
    try:
        return PatternWitness.build(
            S1, S2, doc.get("tau1", "canonical"), doc.get("phis", "canonical"), doc.get("psis", "canonical")
        )
    except (QMarkovError, ValueError, TypeError, IndexError) as exc:
        raise SchemaError(path, str(exc)) from exc


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError("", f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"{path} is not valid JSON: {exc}") from exc


def load_system(path: str | Path) -> InverseSequenceSpec:
    return parse_system(read_json(path))


def load_witness(path: str | None, S1: InverseSequenceSpec, S2: InverseSequenceSpec) -> PatternWitness:
    if path is None or path == "canonical":
        return parse_witness("canonical", S1, S2)
    return parse_witness(read_json(path), S1, S2)


def dump_json(obj: Any, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    n = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(row)
            n += 1
    return n


def exact_and_decimal(values: Sequence[Fraction], digits: int) -> list[str]:
    return [fmt(v) for v in values] + [to_decimal(v, digits) for v in values]


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
