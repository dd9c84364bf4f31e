"""Parsing and resolution of ``divisor-workbench/1`` scenario files.

Parsing happens in three passes. JSON decoding reports syntax errors with
their position. Structure is then checked against the bundled JSON schema,
and finally every object is built and every check argument resolved. All
problems from one pass are collected before stopping, and each carries the
JSON path and source line it refers to.
"""

from __future__ import annotations

import json
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from json.decoder import scanstring
from typing import Any

import jsonschema

from .. import cohomledger as ledger
from .. import surface, threefold
from ..lattice import Lattice
from . import values
from .ops import OPS, Op

SCHEMA_ID = "divisor-workbench/1"


@dataclass(frozen=True)
class Issue:
    """One problem found while parsing.

    ``kind`` is one of ``json``, ``schema``, ``number``, ``reference`` or
    ``semantic``.
    """

    kind: str
    message: str
    path: str = ""
    line: int | None = None
    column: int | None = None

    def __str__(self) -> str:
        where = f"line {self.line}" + (f", column {self.column}" if self.column else "") if self.line else "?"
        loc = f" at {self.path}" if self.path else ""
        return f"{where}: {self.kind} error{loc}: {self.message}"

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "message": self.message, "path": self.path,
                "line": self.line, "column": self.column}


class ScenarioError(ValueError):
    def __init__(self, issues: list[Issue]):
        self.issues = list(issues)
        super().__init__("\n".join(str(i) for i in self.issues))


@dataclass(frozen=True)
class Check:
    id: str
    op: str
    args: Mapping[str, Any]
    expected: Any
    result: tuple
    raw_expect: Any = field(repr=False, default=None)
    line: int | None = None


@dataclass
class Scenario:
    objects: dict[str, Any]
    kinds: dict[str, str]
    checks: tuple[Check, ...]
    description: str = ""


@dataclass(frozen=True)
class Expectation:
    """Parsed expected value of a check, tagged like the op result."""

    tag: str
    value: Any


# --------------------------------------------------------------------- positions

_WS = re.compile(r"[ \t\n\r]*")
_NUMBER = re.compile(r"-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][-+]?\d+)?")


def _locate(text: str) -> dict[tuple, int]:
    """Start offset of every value in already-valid JSON ``text``, keyed by path."""
    positions: dict[tuple, int] = {}

    def skip(i: int) -> int:
        return _WS.match(text, i).end()

    def value(i: int, path: tuple) -> int:
        i = skip(i)
        positions[path] = i
        c = text[i]
        if c == "{":
            i = skip(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = scanstring(text, skip(i) + 1)
                i = skip(i) + 1
                i = skip(value(i, path + (key,)))
                if text[i] == "}":
                    return i + 1
                i += 1
        if c == "[":
            i = skip(i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = skip(value(i, path + (k,)))
                k += 1
                if text[i] == "]":
                    return i + 1
                i += 1
        if c == '"':
            return scanstring(text, i + 1)[1]
        m = _NUMBER.match(text, i)
        if m:
            return m.end()
        for lit in ("true", "false", "null"):
            if text.startswith(lit, i):
                return i + len(lit)
        raise ValueError(f"unexpected character at offset {i}")

    value(0, ())
    return positions


class _Locator:
    def __init__(self, text: str):
        self.text = text
        try:
            self.positions = _locate(text)
        except (ValueError, IndexError):
            self.positions = {}

    def at(self, path: tuple) -> tuple[int | None, int | None]:
        path = tuple(path)
        while path not in self.positions and path:
            path = path[:-1]
        off = self.positions.get(path)
        if off is None:
            return None, None
        line = self.text.count("\n", 0, off) + 1
        return line, off - (self.text.rfind("\n", 0, off) + 1) + 1

    def issue(self, kind: str, message: str, path: tuple = ()) -> Issue:
        line, col = self.at(path)
        return Issue(kind, message, _pointer(path), line, col)


def _pointer(path: tuple) -> str:
    return "/" + "/".join(str(p) for p in path) if path else ""


# --------------------------------------------------------------------- schema

@lru_cache(maxsize=1)
def schema() -> dict[str, Any]:
    """The bundled JSON schema for scenario files."""
    text = resources.files(__package__).joinpath("scenario.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=1)
def _validator() -> jsonschema.Draft202012Validator:
    return jsonschema.Draft202012Validator(schema())


def _find_floats(node: Any, path: tuple = ()) -> list[tuple]:
    if isinstance(node, values.FloatLiteral):
        return [(path, str(node))]
    if isinstance(node, dict):
        return [p for k, v in node.items() for p in _find_floats(v, path + (k,))]
    if isinstance(node, list):
        return [p for i, v in enumerate(node) for p in _find_floats(v, path + (i,))]
    return []


# --------------------------------------------------------------------- objects

_BROKEN = "<broken>"


class _Fail(Exception):
    def __init__(self, kind: str, message: str, path: tuple):
        super().__init__(message)
        self.kind, self.message, self.path = kind, message, path


def _ref(objects: dict, kinds: dict, name: Any, allowed: tuple[str, ...], path: tuple) -> Any:
    if not isinstance(name, str) or name not in objects:
        raise _Fail("reference", f"undeclared object {name!r}", path)
    if kinds[name] == _BROKEN:
        raise _Fail("reference", f"object {name!r} could not be built", path)
    if kinds[name] not in allowed:
        raise _Fail("reference", f"{name!r} is a {kinds[name]}, expected one of {', '.join(allowed)}", path)
    return objects[name]


def _num(x: Any, path: tuple):
    try:
        return values.parse_number(x)
    except values.MalformedNumber as exc:
        raise _Fail("number", str(exc), path) from None


def _int_matrix(rows: list, path: tuple) -> list[list[int]]:
    out = []
    for i, row in enumerate(rows):
        out.append([])
        for j, x in enumerate(row):
            v = _num(x, path + (i, j))
            if not isinstance(v, int):
                raise _Fail("number", f"{x!r} must be an integer here", path + (i, j))
            out[-1].append(v)
    return out


def _build(decl: dict, objects: dict, kinds: dict, path: tuple) -> Any:
    kind = decl["kind"]
    if kind == "lattice":
        gram = _int_matrix(decl["gram"], path + ("gram",))
        rels = _int_matrix(decl.get("relations", []), path + ("relations",))
        canonical = decl.get("canonical")
        if canonical is not None:
            canonical = _int_matrix([canonical], path + ("canonical",))[0]
        conj = decl.get("conjugation")
        return Lattice(decl["id"], tuple(decl["labels"]), gram, rels, canonical,
                       tuple(tuple(p) for p in conj) if conj is not None else None)
    if kind == "surface":
        if "builder" in decl:
            s = surface.surface_from_name(decl["builder"])
        else:
            lat = _ref(objects, kinds, decl["lattice"], ("lattice",), path + ("lattice",))
            s = surface.SurfaceModel(lat, decl.get("chi_O", 1), decl.get("blowup_count"),
                                     decl.get("base_kind", "abstract"))
        curves = decl.get("curves")
        if curves:
            coords = {k: _class(s, v, path + ("curves", k)).coords for k, v in curves.items()}
            s = surface.with_curves(s, coords)
        return s
    if kind == "blowup_points":
        base = _ref(objects, kinds, decl["surface"], ("surface", "blowup_points"), path + ("surface",))
        specs = [surface.PointSpec(p["label"], p.get("multiplicities", {}), p.get("conjugate"))
                 for p in decl["points"]]
        return surface.blowup_points(base, specs, decl["id"])
    if kind == "ring":
        f3 = decl.get("F_cubed")
        return threefold.TwistorRing(decl["n"], None if f3 is None else _num(f3, path + ("F_cubed",)))
    if kind == "curve":
        inter = {k: _num(v, path + ("intersections", k)) for k, v in decl.get("intersections", {}).items()}
        return threefold.CurveData(decl["id"], decl["genus"], inter)
    if kind == "ring_blowup":
        ring = _ref(objects, kinds, decl["ring"], ("ring", "ring_blowup"), path + ("ring",))
        curve = _ref(objects, kinds, decl["curve"], ("curve",), path + ("curve",))
        split = tuple(_num(x, path + ("splitting", i)) for i, x in enumerate(decl["splitting"]))
        return threefold.blowup_along_curve(ring, curve, split, decl["label"])
    if kind == "sequence":
        return ledger.ExactSequence(decl["id"], decl["sequence_kind"], tuple(decl["terms"]), decl.get("dimension", 0))
    if kind == "facts":
        out = []
        for space, v in decl["values"].items():
            try:
                out.append(ledger.CohFact(space, ledger.LinExpr.parse(v)))
            except ledger.LedgerError as exc:
                raise _Fail("number", str(exc), path + ("values", space)) from None
        return tuple(out)
    raise _Fail("schema", f"unknown object kind {kind!r}", path + ("kind",))


def _class(obj: Any, expr: Any, path: tuple):
    try:
        return values.resolve_class(obj, expr)
    except values.MalformedNumber as exc:
        raise _Fail("number", str(exc), path) from None
    except KeyError as exc:
        raise _Fail("reference", str(exc.args[0]) if exc.args else "unknown class", path) from None
    except (TypeError, ValueError) as exc:
        raise _Fail("semantic", str(exc), path) from None


# --------------------------------------------------------------------- checks

def _decode_arg(spec: tuple, raw: Any, args: Mapping[str, Any], resolved: dict, objects: dict,
                kinds: dict, path: tuple) -> Any:
    tag = spec[0]
    if tag == "ref":
        return _ref(objects, kinds, raw, spec[1], path)
    if tag == "refs":
        if not isinstance(raw, list):
            raise _Fail("schema", "expected a list of object ids", path)
        return [_ref(objects, kinds, r, spec[1], path + (i,)) for i, r in enumerate(raw)]
    if tag in ("class", "classes", "images"):
        owner = resolved.get(spec[1])
        if owner is None:
            raise _Fail("schema", f"needs argument {spec[1]!r} to interpret classes", path)
        if tag == "class":
            return _class(owner, raw, path)
        if tag == "classes":
            if not isinstance(raw, list):
                raise _Fail("schema", "expected a list of class expressions", path)
            return [_class(owner, x, path + (i,)) for i, x in enumerate(raw)]
        if not isinstance(raw, Mapping):
            raise _Fail("schema", "expected a mapping of generator to class expression", path)
        return {k: _class(owner, v, path + (k,)) for k, v in raw.items()}
    if tag == "number":
        return _num(raw, path)
    if tag == "int":
        v = _num(raw, path)
        if not isinstance(v, int):
            raise _Fail("number", f"{raw!r} must be an integer", path)
        return v
    if tag == "vector":
        if not isinstance(raw, list):
            raise _Fail("schema", "expected a list of numbers", path)
        return [_num(x, path + (i,)) for i, x in enumerate(raw)]
    if tag == "matrix":
        if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
            raise _Fail("schema", "expected a list of rows", path)
        return [[_num(x, path + (i, j)) for j, x in enumerate(row)] for i, row in enumerate(raw)]
    if tag == "bool":
        if not isinstance(raw, bool):
            raise _Fail("schema", "expected true or false", path)
        return raw
    if tag == "label":
        if not isinstance(raw, str):
            raise _Fail("schema", "expected a label string", path)
        return raw
    if tag == "choice":
        if raw not in spec[1]:
            raise _Fail("schema", f"expected one of {', '.join(spec[1])}", path)
        return raw
    raise AssertionError(tag)


def _decode_expect(result: tuple, raw: Any, resolved: dict, path: tuple) -> Expectation:
    tag = result[0]
    if tag == "number":
        return Expectation(tag, _num(raw, path))
    if tag == "bool":
        if not isinstance(raw, bool):
            raise _Fail("schema", "expected value must be true or false", path)
        return Expectation(tag, raw)
    if tag == "numbers":
        if not isinstance(raw, list):
            raise _Fail("schema", "expected value must be a list of numbers", path)
        return Expectation(tag, [_num(x, path + (i,)) for i, x in enumerate(raw)])
    if tag == "matrix":
        if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
            raise _Fail("schema", "expected value must be a matrix", path)
        return Expectation(tag, [[_num(x, path + (i, j)) for j, x in enumerate(r)] for i, r in enumerate(raw)])
    if tag == "solution":
        if raw in ("inconsistent", "underdetermined"):
            return Expectation(tag, raw)
        if not isinstance(raw, list):
            raise _Fail("schema", "expected a vector, 'inconsistent' or 'underdetermined'", path)
        return Expectation(tag, [_num(x, path + (i,)) for i, x in enumerate(raw)])
    if tag == "class":
        return Expectation(tag, _class(resolved[result[1]], raw, path))
    if tag == "zariski":
        if not isinstance(raw, Mapping) or set(raw) != {"positive", "negative"}:
            raise _Fail("schema", "expected {\"positive\": ..., \"negative\": ...}", path)
        owner = resolved[result[1]]
        return Expectation(tag, (_class(owner, raw["positive"], path + ("positive",)),
                                 _class(owner, raw["negative"], path + ("negative",))))
    if tag == "hirzebruch":
        if raw == "anticanonical":
            return Expectation(tag, "anticanonical")
        if not isinstance(raw, Mapping) or not {"A", "fib"} <= set(raw) or not set(raw) <= {"A", "fib", "e"}:
            raise _Fail("schema", "expected 'anticanonical' or {\"A\": a, \"fib\": b[, \"e\": e]}", path)
        return Expectation(tag, {k: _num(v, path + (k,)) for k, v in raw.items()})
    if tag == "mapping":
        if not isinstance(raw, Mapping):
            raise _Fail("schema", "expected a mapping of space to dimension", path)
        out = {}
        for k, v in raw.items():
            try:
                out[k] = ledger.LinExpr.parse(v)
            except ledger.LedgerError as exc:
                raise _Fail("number", str(exc), path + (k,)) from None
        return Expectation(tag, out)
    raise AssertionError(tag)


def _resolve_check(raw: dict, objects: dict, kinds: dict, path: tuple) -> Check:
    op: Op | None = OPS.get(raw["op"])
    if op is None:
        raise _Fail("schema", f"unknown operation {raw['op']!r}", path + ("op",))
    args = raw["args"]
    unknown = sorted(set(args) - set(op.args))
    if unknown:
        raise _Fail("schema", f"{raw['op']} does not take argument(s) {', '.join(unknown)}", path + ("args",))
    missing = [a for a in op.args if a not in args and a not in op.optional]
    if missing:
        raise _Fail("schema", f"{raw['op']} is missing argument(s) {', '.join(missing)}", path + ("args",))
    resolved: dict[str, Any] = {}
    for name, spec in op.args.items():
        if name in args:
            resolved[name] = _decode_arg(spec, args[name], args, resolved, objects, kinds, path + ("args", name))
    result = op.result(args) if callable(op.result) else op.result
    expected = _decode_expect(result, raw["expect"], resolved, path + ("expect",))
    return Check(raw["id"], raw["op"], resolved, expected, result, raw["expect"])


# --------------------------------------------------------------------- entry point

def parse_scenario(text: str | bytes) -> Scenario:
    """Parse, validate and resolve a scenario.

    Raises:
        ScenarioError: with every :class:`Issue` found in the first failing pass.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioError([Issue("json", f"input is not UTF-8: {exc.reason}")]) from None
    try:
        doc = json.loads(text, parse_float=values.FloatLiteral, parse_constant=values.FloatLiteral)
    except json.JSONDecodeError as exc:
        raise ScenarioError([Issue("json", exc.msg, "", exc.lineno, exc.colno)]) from None
    loc = _Locator(text)

    floats = _find_floats(doc)
    if floats:
        raise ScenarioError([loc.issue("number", f"non-integer JSON number {lit}; write rationals as \"p/q\" strings", p)
                             for p, lit in floats])

    errors = sorted(_validator().iter_errors(doc), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        raise ScenarioError([loc.issue("schema", e.message, tuple(e.absolute_path)) for e in errors])

    issues: list[Issue] = []
    objects: dict[str, Any] = {}
    kinds: dict[str, str] = {}
    declared_ids = [d["id"] for d in doc["objects"]]
    for i, decl in enumerate(doc["objects"]):
        path = ("objects", i)
        if decl["id"] in objects:
            issues.append(loc.issue("semantic", f"duplicate object id {decl['id']!r}", path + ("id",)))
            continue
        try:
            objects[decl["id"]] = _build(decl, objects, kinds, path)
            kinds[decl["id"]] = decl["kind"]
        except _Fail as f:
            msg = f.message
            if f.kind == "reference" and "undeclared" in msg:
                name = msg.split("undeclared object ", 1)[1]
                if name.strip("'\"") in declared_ids:
                    msg += " (it is declared later; objects must be declared before use)"
            issues.append(loc.issue(f.kind, msg, f.path))
        except (ValueError, KeyError, ArithmeticError, TypeError) as exc:
            issues.append(loc.issue("semantic", f"cannot build {decl['kind']} {decl['id']!r}: {exc}", path))
        if decl["id"] not in objects:
            objects[decl["id"]], kinds[decl["id"]] = None, _BROKEN

    checks: list[Check] = []
    seen: set[str] = set()
    for i, raw in enumerate(doc["checks"]):
        path = ("checks", i)
        if raw["id"] in seen:
            issues.append(loc.issue("semantic", f"duplicate check id {raw['id']!r}", path + ("id",)))
            continue
        seen.add(raw["id"])
        try:
            chk = _resolve_check(raw, objects, kinds, path)
        except _Fail as f:
            issues.append(loc.issue(f.kind, f.message, f.path))
            continue
        line, _ = loc.at(path)
        checks.append(Check(chk.id, chk.op, chk.args, chk.expected, chk.result, chk.raw_expect, line))
    if issues:
        raise ScenarioError(issues)
    return Scenario(objects, kinds, tuple(checks), doc.get("description", ""))
