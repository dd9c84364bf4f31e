"""Number codec and class-expression resolution for scenario files."""

from __future__ import annotations

import re
from collections.abc import Mapping
from fractions import Fraction
from typing import Any

from ..lattice import ClassVector, Lattice, class_from_terms
from ..surface import SurfaceModel
from ..threefold import ExtendedRing, TwistorRing, divisor_X

_NUM = re.compile(r"^(-?)(\d+)(?:/(\d+))?$")
SAFE_INT = 2 ** 53


class MalformedNumber(ValueError):
    pass


class FloatLiteral(str):
    """A JSON number with a fraction or exponent, kept verbatim so it can be reported."""


def parse_number(x: Any) -> int | Fraction:
    """Decode an integer, a decimal string or a ``"p/q"`` string."""
    if isinstance(x, bool):
        raise MalformedNumber(f"{x!r} is a boolean, not a number")
    if isinstance(x, int):
        return x
    if isinstance(x, str) and not isinstance(x, FloatLiteral):
        m = _NUM.match(x.strip())
        if m:
            sign, num, den = m.groups()
            if den is not None and int(den) == 0:
                raise MalformedNumber(f"{x!r} has zero denominator")
            value = Fraction(int(num), int(den) if den else 1)
            value = -value if sign else value
            return int(value) if value.denominator == 1 else value
    raise MalformedNumber(f"{x!r} is not an integer or a p/q rational")


def encode_number(x: int | Fraction) -> int | str:
    """Inverse of :func:`parse_number`; large integers become decimal strings."""
    if isinstance(x, Fraction):
        if x.denominator != 1:
            return f"{x.numerator}/{x.denominator}"
        x = x.numerator
    return x if -SAFE_INT < x < SAFE_INT else str(x)


def ring_named(r: TwistorRing | ExtendedRing) -> dict[str, ClassVector]:
    n = r.twistor.n
    x = divisor_X(r)
    named = {
        "c1": r.c1_class,
        "X": x,
        "Xbar": ClassVector(r, (x.coords[0],) + tuple(-c for c in x.coords[1:])),
        "a5..n": r.cls({f"a{i}": 1 for i in range(5, n + 1)}),
    }
    if n >= 4:
        named["a1..4"] = r.cls({f"a{i}": 1 for i in range(1, 5)})
    return named


def class_space(obj: Any) -> tuple[Any, dict[str, ClassVector]]:
    """The coordinate space of ``obj`` and its named classes."""
    if isinstance(obj, SurfaceModel):
        return obj.lattice, obj.named_classes()
    if isinstance(obj, Lattice):
        named = {}
        if obj.canonical is not None:
            named = {"K": obj.canonical_class, "Kinv": -obj.canonical_class}
        return obj, named
    if isinstance(obj, (TwistorRing, ExtendedRing)):
        return obj, ring_named(obj)
    raise TypeError(f"{type(obj).__name__} has no divisor classes")


def resolve_class(obj: Any, expr: Any) -> ClassVector:
    """Turn a name, a ``{name: coefficient}`` mapping or a coordinate list into a class."""
    space, named = class_space(obj)
    if isinstance(expr, str):
        return class_from_terms(space, {expr: 1}, named)
    if isinstance(expr, Mapping):
        return class_from_terms(space, {k: parse_number(v) for k, v in expr.items()}, named)
    if isinstance(expr, list):
        if len(expr) != len(space.labels):
            raise ValueError(f"coordinate list has {len(expr)} entries, basis has {len(space.labels)}")
        return ClassVector(space, tuple(parse_number(v) for v in expr))
    raise ValueError(f"{expr!r} is not a class expression")


def encode_class(c: ClassVector) -> dict[str, int | str]:
    return {lab: encode_number(v) for lab, v in c.as_dict().items()}
