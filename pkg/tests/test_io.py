import json
from fractions import Fraction

import pytest

from conftest import corpus, worked_record
from mik.angles import Angle
from mik.certificate import certify
from mik.errors import SchemaError
from mik.io import (Table, emit_block, emit_rational, emit_report, emit_system, normalize_system,
                    parse_block, parse_system)
from mik.normal_form import D, N1, N2, R

MINIMAL = """{
  "schema": "mik/1",
  "n": 2,
  "orbits": [
    {"label": "g", "i1": 1,
     "blocks": [{"type": "N1", "lambda": 1, "b": 1}, {"type": "D", "lambda": 2}]}
  ]
}"""


def doc(**orbit):
    base = {"label": "g", "i1": 1,
            "blocks": [{"type": "N1", "lambda": 1, "b": 1}, {"type": "D", "lambda": 2}]}
    base.update(orbit)
    return json.dumps({"schema": "mik/1", "n": 2, "orbits": [base]})


def test_minimal_file():
    records, n = parse_system(MINIMAL)
    assert n == 2 and len(records) == 1
    r = records[0]
    assert (r.label, r.i1) == ("g", 1)
    assert r.decomposition == worked_record().decomposition


def test_n2_with_equal_off_diagonal_rejected():
    text = doc(blocks=[{"type": "N2", "theta": {"kind": "rational_pi", "num": 1, "den": 3},
                        "B": [0, 1, 1, 0]}])
    with pytest.raises(SchemaError) as exc:
        parse_system(text)
    assert exc.value.path == "$.orbits[0].blocks[0].B"


@pytest.mark.parametrize("bad,where", [
    ({"i1": "x"}, "$.orbits[0].i1"),
    ({"blocks": [{"type": "N1", "lambda": 2, "b": 1}, {"type": "D", "lambda": 2}]},
     "$.orbits[0].blocks[0].lambda"),
    ({"blocks": [{"type": "Q"}]}, "$.orbits[0].blocks[0].type"),
    ({"blocks": [{"type": "D", "lambda": 2}]}, "$.orbits[0].blocks"),
    ({"blocks": [{"type": "R", "theta": {"kind": "irrational", "value": 7}},
                 {"type": "D", "lambda": 2}]}, "$.orbits[0].blocks[0].theta.value"),
    ({"extra": 1}, "$.orbits[0]"),
])
def test_schema_errors_carry_paths(bad, where):
    with pytest.raises(SchemaError) as exc:
        parse_system(doc(**bad))
    assert exc.value.path == where


def test_dimension_message():
    with pytest.raises(SchemaError, match="blocks span dimension 2, expected 2n = 4"):
        parse_system(doc(blocks=[{"type": "D", "lambda": 2}]))


def test_duplicate_labels_and_bad_json():
    data = json.loads(doc())
    data["orbits"].append(dict(data["orbits"][0]))
    with pytest.raises(SchemaError, match="duplicate"):
        parse_system(json.dumps(data))
    with pytest.raises(SchemaError) as exc:
        parse_system('{"schema": "mik/1",\n "n": }')
    assert exc.value.path.startswith("line 2")


def test_round_trip_is_byte_stable():
    for n in (2, 3):
        text = emit_system(corpus(n), n, "ellipsoid")
        assert normalize_system(text) == text
        records, m = parse_system(text)
        assert [r.mean for r in records] == [r.mean for r in corpus(n)]


def test_rationals_are_exact():
    assert emit_rational(Fraction(3)) == 3
    assert emit_rational(Fraction(1, 8)) == "0.125"
    assert emit_rational(Fraction(-5, 2)) == "-2.5"
    assert emit_rational(Fraction(1, 3)) == "1/3"
    assert emit_rational(Fraction(1, 2**70)).startswith("0.000")


@pytest.mark.parametrize("block", [
    N1(1, Fraction(1, 3)), N1(-1, -2), D(Fraction(-7, 4)), R(Angle.rational(2, 3)),
    R(Angle.irrational("1.234567890123456789012345678901234567890")),
    N2.standard(Angle.rational(1, 3), 0, 1),
])
def test_block_round_trip(block):
    assert parse_block(json.loads(json.dumps(emit_block(block)))) == block


def test_decimal_numbers_parse_exactly():
    b = parse_block({"type": "N1", "lambda": 1, "b": json.loads("0.1", parse_float=__import__("decimal").Decimal)})
    assert b.b == Fraction(1, 10)


def test_tsv_table():
    text = emit_report(Table(["p", "M_p"], [[p, p % 2] for p in range(5)]), "tsv")
    lines = text.splitlines()
    assert lines[0] == "p\tM_p" and len(lines) == 6


def test_certificate_report_json():
    rep = certify(corpus(2), 2)
    text = emit_report(rep)
    assert json.loads(text)["verdict"] == "CERTIFIED"
    assert emit_report(certify(corpus(2), 2)) == text


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report({}, "xml")
