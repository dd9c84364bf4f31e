"""Divisor classes in a lattice with an integral intersection pairing.

A :class:`Lattice` carries its basis labels, a symmetric Gram matrix,
linear relations (classes declared equivalent to zero) and optionally a
canonical class and a conjugation involution. Relations are kept as
quotient data: classes stay in their natural coordinates and equivalence
is decided on demand.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from . import exact
from .exact import Rat

Coeff = Union[int, Fraction]


class LatticeMismatch(ValueError):
    """Two classes from different lattices were combined."""


class MissingStructure(ValueError):
    """An operation needs data (canonical class, conjugation) the lattice lacks."""


def _fmt_coeff(c: Coeff, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    body = "" if mag == 1 else str(mag)
    return f"{sign}{body}" if first else f" {sign} {body}"


@dataclass(frozen=True)
class ClassVector:
    """A class written in the basis of ``space``.

    ``space`` is anything with a ``labels`` tuple: a :class:`Lattice` or a
    threefold cohomology ring. Coordinates are integers, or fractions for
    the rational classes produced by Zariski decomposition.
    """

    space: Any = field(repr=False)
    coords: tuple[Coeff, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != len(self.space.labels):
            raise ValueError(f"class has {len(coords)} coordinates, basis has {len(self.space.labels)} elements")

    def _check(self, other: ClassVector) -> None:
        if not isinstance(other, ClassVector):
            raise TypeError(f"expected ClassVector, got {type(other).__name__}")
        if other.space is not self.space and other.space != self.space:
            raise LatticeMismatch(f"classes live in different lattices ({_name(self.space)} vs {_name(other.space)})")

    def __add__(self, other: ClassVector) -> ClassVector:
        self._check(other)
        return ClassVector(self.space, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: ClassVector) -> ClassVector:
        self._check(other)
        return ClassVector(self.space, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> ClassVector:
        return ClassVector(self.space, tuple(-a for a in self.coords))

    def __mul__(self, k: Coeff) -> ClassVector:
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return ClassVector(self.space, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def is_integral(self) -> bool:
        return all(isinstance(a, int) for a in self.coords)

    def as_dict(self) -> dict[str, Coeff]:
        return {lab: c for lab, c in zip(self.space.labels, self.coords) if c != 0}

    def __str__(self) -> str:
        terms = [(lab, c) for lab, c in zip(self.space.labels, self.coords) if c != 0]
        if not terms:
            return "0"
        return "".join(f"{_fmt_coeff(c, i == 0)}{lab}" for i, (lab, c) in enumerate(terms))


def _name(space: Any) -> str:
    return getattr(space, "name", type(space).__name__)


def class_from_terms(space: Any, terms: Mapping[str, Coeff] | str | Sequence[Coeff],
                     named: Mapping[str, ClassVector] | None = None) -> ClassVector:
    """Build a class from a label, a ``{name: coefficient}`` mapping or raw coordinates.

    Names are looked up first in ``named`` and then among the basis labels.
    """
    named = named or {}
    labels = list(space.labels)
    if isinstance(terms, str):
        terms = {terms: 1}
    if not isinstance(terms, Mapping):
        return ClassVector(space, tuple(terms))
    acc = [0] * len(labels)
    for key, coeff in terms.items():
        if key in named:
            vec = named[key].coords
        elif key in labels:
            vec = [1 if i == labels.index(key) else 0 for i in range(len(labels))]
        else:
            raise KeyError(f"unknown class name {key!r} in {_name(space)}")
        acc = [a + coeff * v for a, v in zip(acc, vec)]
    return ClassVector(space, tuple(acc))


@dataclass(frozen=True)
class Lattice:
    """Basis labels, Gram matrix, relations, canonical class and conjugation.

    ``conjugation`` is a signed basis permutation: entry ``i`` is the pair
    ``(j, s)`` meaning basis element ``i`` maps to ``s`` times element ``j``.
    """

    name: str
    labels: tuple[str, ...]
    gram: exact.IntMatrix
    relations: tuple[tuple[int, ...], ...] = ()
    canonical: tuple[int, ...] | None = None
    conjugation: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "gram", tuple(tuple(r) for r in self.gram))
        object.__setattr__(self, "relations", tuple(tuple(r) for r in self.relations))
        if self.canonical is not None:
            object.__setattr__(self, "canonical", tuple(self.canonical))
        if self.conjugation is not None:
            object.__setattr__(self, "conjugation", tuple((int(j), int(s)) for j, s in self.conjugation))

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    def basis_class(self, label: str) -> ClassVector:
        i = self.index(label)
        return ClassVector(self, tuple(int(j == i) for j in range(self.rank)))

    def zero(self) -> ClassVector:
        return ClassVector(self, (0,) * self.rank)

    def cls(self, terms: Mapping[str, Coeff] | str | Sequence[Coeff]) -> ClassVector:
        return class_from_terms(self, terms)

    @property
    def canonical_class(self) -> ClassVector:
        if self.canonical is None:
            raise MissingStructure(f"lattice {self.name} has no canonical class")
        return ClassVector(self, self.canonical)

    def relation_classes(self) -> list[ClassVector]:
        return [ClassVector(self, r) for r in self.relations]

    def gram_of(self, classes: Sequence[ClassVector]) -> exact.IntMatrix:
        """Gram matrix of the given classes under this lattice's pairing."""
        return tuple(tuple(pair(a, b) for b in classes) for a in classes)


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def validate_lattice(lat: Lattice) -> ValidationReport:
    """Check every structural invariant of ``lat`` and list the failures."""
    report = ValidationReport()
    fail = report.failures.append
    n = lat.rank
    if len(set(lat.labels)) != n:
        fail("basis labels are not distinct")
    if len(lat.gram) != n or any(len(row) != n for row in lat.gram):
        fail(f"gram matrix is not {n}x{n}")
        return report
    for i in range(n):
        for j in range(i + 1, n):
            if lat.gram[i][j] != lat.gram[j][i]:
                fail(f"gram not symmetric at ({lat.labels[i]}, {lat.labels[j]})")
    for k, rel in enumerate(lat.relations):
        if len(rel) != n:
            fail(f"relation {k} has length {len(rel)}, expected {n}")
            continue
        image = exact.mat_vec(lat.gram, rel)
        for i, v in enumerate(image):
            if v != 0:
                fail(f"relation {k} pairs to {v} with basis element {lat.labels[i]}")
    if lat.canonical is not None and len(lat.canonical) != n:
        fail(f"canonical class has length {len(lat.canonical)}, expected {n}")
    if lat.conjugation is not None:
        conj = lat.conjugation
        if len(conj) != n or any(not 0 <= j < n or s not in (1, -1) for j, s in conj):
            fail("conjugation is not a signed permutation of the basis")
            return report
        if sorted(j for j, _ in conj) != list(range(n)):
            fail("conjugation is not a permutation")
            return report
        for i, (j, s) in enumerate(conj):
            if conj[j] != (i, s):
                fail(f"conjugation is not an involution at {lat.labels[i]}")
        for i in range(n):
            for j in range(n):
                (a, s), (b, t) = conj[i], conj[j]
                if s * t * lat.gram[a][b] != lat.gram[i][j]:
                    fail(f"conjugation does not preserve the pairing of {lat.labels[i]} and {lat.labels[j]}")
        if lat.canonical is not None and len(lat.canonical) == n and report.ok:
            k = lat.canonical_class
            if not classes_equivalent(conjugate(k), k):
                fail("canonical class is not fixed by conjugation")
    return report


def pair(d1: ClassVector, d2: ClassVector) -> Rat:
    """Intersection number ``d1ᵀ G d2``."""
    d1._check(d2)
    return exact.bilinear(d1.space.gram, d1.coords, d2.coords)


def classes_equivalent(d1: ClassVector, d2: ClassVector) -> bool:
    """True iff ``d1 - d2`` is an integer combination of the lattice relations."""
    diff = d1 - d2
    if not diff.is_integral():
        return False
    return exact.in_integer_span(list(d1.space.relations), diff.coords)


def conjugate(d: ClassVector) -> ClassVector:
    conj = getattr(d.space, "conjugation", None)
    if conj is None:
        raise MissingStructure(f"{_name(d.space)} has no conjugation")
    out: list[Coeff] = [0] * len(d.coords)
    for i, c in enumerate(d.coords):
        j, s = conj[i]
        out[j] += s * c
    return ClassVector(d.space, tuple(out))


def total(classes: Iterable[ClassVector], space: Any) -> ClassVector:
    acc = ClassVector(space, (0,) * len(space.labels))
    for c in classes:
        acc = acc + c
    return acc
