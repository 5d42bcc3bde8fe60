"""JSON system files (schema ``mik/1``) and report serialization.

A system file looks like::

    {"schema": "mik/1", "n": 2, "provenance": "...",
     "orbits": [{"label": "y1", "i1": 1,
                 "blocks": [{"type": "N1", "lambda": 1, "b": 1},
                            {"type": "D", "lambda": 2}],
                 "metadata": {}}]}

Exact rationals are written as JSON integers, terminating decimals ("0.25")
or "p/q" strings.  Angles are ``{"kind": "rational_pi", "num": p, "den": q}``
(theta = p*pi/q) or ``{"kind": "irrational", "value": "<radians>"}``.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
import json
from typing import Any, List, Sequence

import mpmath
import numpy as np

from .angles import Angle
from .errors import MikError, SchemaError
from .iteration import OrbitRecord
from .normal_form import D, N1, N2, R, NormalFormDecomposition

SCHEMA = "mik/1"
FORMATS = ("json", "tsv")


# -- numbers --------------------------------------------------------------------

def _decimal_places(q):
    """k with q | 10**k, or None when p/q has no finite decimal expansion."""
    k = 0
    for p in (2, 5):
        e = 0
        while q % p == 0:
            q //= p
            e += 1
        k = max(k, e)
    return k if q == 1 else None


def emit_rational(x):
    """Canonical JSON value for an exact rational."""
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    k = _decimal_places(x.denominator)
    if k is not None:
        digits = str(abs(x.numerator) * 10 ** k // x.denominator).rjust(k + 1, "0")
        sign = "-" if x < 0 else ""
        return f"{sign}{digits[:-k]}.{digits[-k:]}".rstrip("0")
    return f"{x.numerator}/{x.denominator}"


def _rational(value, path):
    if isinstance(value, bool):
        raise SchemaError("expected a number, got a boolean", path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"not an exact rational: {value!r}", path) from None
    raise SchemaError(f"expected a number or a rational string, got {type(value).__name__}", path)


def _integer(value, path):
    x = _rational(value, path)
    if x.denominator != 1:
        raise SchemaError(f"expected an integer, got {value!r}", path)
    return x.numerator


# -- angles and blocks -------------------------------------------------------

def emit_angle(theta):
    if theta.is_rational:
        q = theta.over_pi
        return {"kind": "rational_pi", "num": q.numerator, "den": q.denominator}
    return {"kind": "irrational", "value": theta.text}


def parse_angle(obj, path="theta"):
    if not isinstance(obj, dict):
        raise SchemaError("angle must be an object with a 'kind'", path)
    kind = obj.get("kind")
    try:
        if kind == "rational_pi":
            _keys(obj, {"kind", "num", "den"}, path)
            den = _integer(obj["den"], f"{path}.den")
            if den == 0:
                raise SchemaError("den must be non-zero", f"{path}.den")
            return Angle.rational(_integer(obj["num"], f"{path}.num"), den)
        if kind == "irrational":
            _keys(obj, {"kind", "value"}, path)
            value = obj["value"]
            if not isinstance(value, (str, Decimal)):
                raise SchemaError("irrational angles are decimal strings", f"{path}.value")
            return Angle.irrational(str(value))
    except SchemaError:
        raise
    except (MikError, ValueError) as exc:
        raise SchemaError(str(exc), path) from None
    raise SchemaError(f"angle kind must be 'rational_pi' or 'irrational', got {kind!r}", f"{path}.kind")


def _keys(obj, required, path, optional=()):
    missing = sorted(set(required) - set(obj))
    if missing:
        raise SchemaError(f"missing field {missing[0]!r}", path)
    extra = sorted(set(obj) - set(required) - set(optional))
    if extra:
        raise SchemaError(f"unknown field {extra[0]!r}", path)


def emit_block(block):
    if isinstance(block, N1):
        return {"type": "N1", "lambda": block.lam, "b": emit_rational(block.b)}
    if isinstance(block, D):
        return {"type": "D", "lambda": emit_rational(block.lam)}
    if isinstance(block, R):
        return {"type": "R", "theta": emit_angle(block.theta)}
    if isinstance(block, N2):
        return {"type": "N2", "theta": emit_angle(block.theta),
                "B": [emit_rational(b) for b in block.B]}
    raise TypeError(f"not a normal-form block: {block!r}")


def parse_block(obj, path="block"):
    if not isinstance(obj, dict):
        raise SchemaError("block must be an object", path)
    kind = obj.get("type")
    try:
        if kind == "N1":
            _keys(obj, {"type", "lambda", "b"}, path)
            lam = _integer(obj["lambda"], f"{path}.lambda")
            if lam not in (1, -1):
                raise SchemaError("N1 lambda must be 1 or -1", f"{path}.lambda")
            return N1(lam, _rational(obj["b"], f"{path}.b"))
        if kind == "D":
            _keys(obj, {"type", "lambda"}, path)
            return D(_rational(obj["lambda"], f"{path}.lambda"))
        if kind == "R":
            _keys(obj, {"type", "theta"}, path)
            return R(parse_angle(obj["theta"], f"{path}.theta"))
        if kind == "N2":
            _keys(obj, {"type", "theta", "B"}, path)
            B = obj["B"]
            if not isinstance(B, list) or len(B) != 4:
                raise SchemaError("B must be a list of four numbers", f"{path}.B")
            entries = [_rational(b, f"{path}.B[{i}]") for i, b in enumerate(B)]
            if entries[1] == entries[2]:
                raise SchemaError(
                    "N2 requires b2 != b3 (with b2 == b3 the block is not in normal form)",
                    f"{path}.B")
            return N2(parse_angle(obj["theta"], f"{path}.theta"), tuple(entries))
    except SchemaError:
        raise
    except (MikError, ValueError) as exc:
        raise SchemaError(str(exc), path) from None
    raise SchemaError(f"block type must be one of N1, D, R, N2, got {kind!r}", f"{path}.type")


# -- systems ----------------------------------------------------------------------

@dataclass
class System:
    n: int
    records: List[OrbitRecord]
    provenance: str = ""

    def __iter__(self):
        return iter((self.records, self.n))


def _load(text):
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None


def parse_system(text):
    """Parse a system file; returns a :class:`System` (unpacks as ``records, n``)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    doc = _load(text)
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", "$")
    _keys(doc, {"schema", "n", "orbits"}, "$", optional={"provenance"})
    if doc["schema"] != SCHEMA:
        raise SchemaError(f"unsupported schema {doc['schema']!r} (expected {SCHEMA!r})", "$.schema")
    n = _integer(doc["n"], "$.n")
    if n < 1:
        raise SchemaError("n must be positive", "$.n")
    provenance = doc.get("provenance", "")
    if not isinstance(provenance, str):
        raise SchemaError("provenance must be a string", "$.provenance")
    orbits = doc["orbits"]
    if not isinstance(orbits, list):
        raise SchemaError("orbits must be a list", "$.orbits")
    records, seen = [], set()
    for k, orbit in enumerate(orbits):
        path = f"$.orbits[{k}]"
        if not isinstance(orbit, dict):
            raise SchemaError("orbit must be an object", path)
        _keys(orbit, {"label", "i1", "blocks"}, path, optional={"metadata"})
        label = orbit["label"]
        if not isinstance(label, str) or not label:
            raise SchemaError("label must be a non-empty string", f"{path}.label")
        if label in seen:
            raise SchemaError(f"duplicate orbit label {label!r}", f"{path}.label")
        seen.add(label)
        i1 = _integer(orbit["i1"], f"{path}.i1")
        raw = orbit["blocks"]
        if not isinstance(raw, list) or not raw:
            raise SchemaError("blocks must be a non-empty list", f"{path}.blocks")
        blocks = [parse_block(b, f"{path}.blocks[{j}]") for j, b in enumerate(raw)]
        dim = sum(b.dim for b in blocks)
        if dim != 2 * n:
            raise SchemaError(
                f"orbit {label!r}: blocks span dimension {dim}, expected 2n = {2 * n}",
                f"{path}.blocks")
        metadata = orbit.get("metadata", {})
        if not isinstance(metadata, dict):
            raise SchemaError("metadata must be an object", f"{path}.metadata")
        records.append(OrbitRecord(label, n, i1, NormalFormDecomposition.of(*blocks),
                                   metadata=_plain(metadata)))
    return System(n, records, provenance)


def system_dict(records, n, provenance=""):
    return {
        "schema": SCHEMA,
        "n": n,
        "provenance": provenance,
        "orbits": [{"label": r.label, "i1": r.i1,
                    "blocks": [emit_block(b) for b in r.decomposition.blocks],
                    "metadata": _plain(r.metadata)} for r in records],
    }


def emit_system(records, n=None, provenance=""):
    """Canonical text of a system file; ``emit_system(*parse_system(x))`` is a fixed point."""
    if isinstance(records, System):
        records, n, provenance = records.records, records.n, records.provenance
    records = list(records)
    if n is None:
        if not records:
            raise ValueError("n is required for an empty system")
        n = records[0].n
    return json.dumps(system_dict(records, n, provenance), indent=2, sort_keys=False) + "\n"


def normalize_system(text):
    return emit_system(parse_system(text))


# -- reports ------------------------------------------------------------------------

@dataclass
class Table:
    """A tabular report: column names and rows of plain values."""

    columns: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)

    def as_dict(self):
        return {"columns": list(self.columns),
                "rows": [[_plain(v) for v in row] for row in self.rows]}


def _plain(v):
    """Convert to JSON-ready values with a stable textual form."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Decimal):
        return str(v)
    if isinstance(v, Fraction):
        return emit_rational(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, mpmath.mpf) or type(v).__name__ == "mpf":
        return mpmath.nstr(v, 30)
    if isinstance(v, Angle):
        return emit_angle(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "as_dict"):
        return _plain(v.as_dict())
    return str(v)


def _cell(v):
    v = _plain(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _flatten(prefix, v, out):
    if isinstance(v, dict):
        for k, x in v.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), x, out)
    else:
        out.append((prefix, _cell(v)))


def emit_report(report, format="json"):
    """Deterministic text for a report: a :class:`Table`, anything with ``as_dict``, or plain data."""
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    if format == "json":
        return json.dumps(_plain(report), indent=2, sort_keys=True) + "\n"
    if isinstance(report, Table):
        lines = ["\t".join(report.columns)]
        lines += ["\t".join(_cell(v) for v in row) for row in report.rows]
        return "\n".join(lines) + "\n"
    data = _plain(report)
    if isinstance(data, list) and all(isinstance(x, dict) for x in data):
        cols = sorted({k for row in data for k in row})
        return emit_report(Table(cols, [[row.get(c) for c in cols] for row in data]), "tsv")
    out = []
    _flatten("", data, out)
    return "\n".join(f"{k}\t{v}" for k, v in out) + "\n"
