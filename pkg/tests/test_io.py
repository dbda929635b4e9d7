from __future__ import annotations

import json
from fractions import Fraction as Q

import pytest

from qmarkov import systems
from qmarkov.errors import SchemaError
from qmarkov.io import (
    load_system,
    load_witness,
    parse_markov_set,
    parse_system,
    parse_witness,
    system_to_dict,
)


@pytest.mark.parametrize("name", sorted(systems.bundled()))
def test_system_roundtrip(name):
    S = systems.bundled()[name]
    doc = json.loads(json.dumps(system_to_dict(S)))
    assert parse_system(doc) == S


def _skew_doc():
    return system_to_dict(systems.skew_tent(Q(3, 5), Q(1, 2)))


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d["levels"][0]["function"]["pieces"][1].__setitem__("slope", 0.5), "levels/0/function/pieces/1/slope"),
        (lambda d: d["levels"][0]["markov_set"].pop("ambient"), "levels/0/markov_set"),
        (lambda d: d["levels"][0]["function"]["pieces"][0].__setitem__("on", ["0", "3/5", "cx"]), "levels/0/function/pieces/0/on/2"),
        (lambda d: d["levels"][0]["markov_set"]["tails"][0].__setitem__("slope", "3/2"), "levels/0/markov_set/tails/0"),
        (lambda d: d.__setitem__("period", "one"), "period"),
        (lambda d: d["levels"][0]["markov_set"].__setitem__("points", ["0", "3/5"]), "levels/0/markov_set"),
    ],
)
def test_schema_errors_are_located(mutate, path):
    doc = _skew_doc()
    mutate(doc)
    with pytest.raises(SchemaError) as info:
        parse_system(doc)
    assert info.value.path == path


def test_missing_endpoint_message_suggests_adjoining():
    with pytest.raises(SchemaError, match="adjoined"):
        parse_markov_set({"ambient": ["0", "1"], "points": ["0", "3/5"], "tails": [{"seed": "1/2", "slope": "5/6", "limit": "0"}]})


def test_override_value_must_be_closed():
    doc = system_to_dict(systems.halving())
    doc["levels"][0]["function"]["overrides"][0]["value"] = [["1/2", "1", "oc"]]
    with pytest.raises(SchemaError) as info:
        parse_system(doc)
    assert info.value.path == "levels/0/function"


def test_explicit_witness_document():
    S1, S2 = systems.skew_tent(Q(3, 5), Q(1, 2)), systems.skew_tent(Q(2, 3), Q(3, 5))
    doc = {"tau1": {"pairs": [["0", "0"], ["3/5", "2/3"], ["1", "1"]], "tails": [[0, 0]]}, "phis": ["canonical"], "psis": ["canonical"]}
    w = parse_witness(doc, S1, S2)
    assert w.tau1(Q(25, 72)) == Q(243, 500)
    canon = parse_witness("canonical", S1, S2)
    assert canon.tau1 == w.tau1
    assert parse_witness(json.loads(json.dumps(w.to_dict())), S1, S2).tau1 == w.tau1


def test_bad_witness_is_schema_error():
    S1, S2 = systems.skew_tent(Q(3, 5), Q(1, 2)), systems.skew_tent(Q(2, 3), Q(3, 5))
    with pytest.raises(SchemaError):
        parse_witness({"tau1": {"pairs": [["0", "0"], ["1/3", "2/3"], ["1", "1"]], "tails": [[0, 0]]}}, S1, S2)


def test_file_errors(tmp_path):
    with pytest.raises(SchemaError, match="cannot read"):
        load_system(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(SchemaError, match="not valid JSON"):
        load_system(bad)
    S = systems.fpq(Q(1, 2), Q(1, 4))
    assert load_witness(None, S, S).tau1.is_identity
