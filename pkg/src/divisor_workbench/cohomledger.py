"""Bookkeeping of cohomology dimensions through exact sequences.

Dimensions are linear expressions in a single parameter ``n`` with rational
coefficients, so one ledger run can cover a whole family of surfaces.
Vanishing theorems and similar inputs are *declared* facts; the ledger only
propagates them.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import surface as surf

_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?n)?")


class LedgerError(ValueError):
    pass


class LedgerContradiction(LedgerError):
    """Declared or derived facts violate a sequence; ``sequence`` names it."""

    def __init__(self, sequence: str, message: str):
        super().__init__(f"{sequence}: {message}")
        self.sequence = sequence


@dataclass(frozen=True, order=True)
class LinExpr:
    """``coef·n + const``."""

    coef: Fraction = Fraction(0)
    const: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coef", Fraction(self.coef))
        object.__setattr__(self, "const", Fraction(self.const))

    @classmethod
    def parse(cls, value: Union[str, int, Fraction, LinExpr]) -> LinExpr:
        """Parse ``"7n-14"``, ``"5*n - 5"``, ``"-3/2 n + 1"`` or a plain number.

        Raises:
            LedgerError: for anything that is not linear in ``n``.
        """
        if isinstance(value, LinExpr):
            return value
        if isinstance(value, bool):
            raise LedgerError("booleans are not dimensions")
        if isinstance(value, (int, Fraction)):
            return cls(0, value)
        if re.search(r"[\d/]\s+[\d/]", str(value)):
            raise LedgerError(f"missing operator in {value!r}")
        text = str(value).replace(" ", "")
        if not text:
            raise LedgerError("empty dimension expression")
        coef, const, pos = Fraction(0), Fraction(0), 0
        while pos < len(text):
            m = _TERM.match(text, pos)
            if m is None or m.end() == pos or not (m.group(2) or m.group(3)):
                raise LedgerError(f"cannot parse {value!r} as a linear expression in n")
            if pos > 0 and not m.group(1):
                raise LedgerError(f"missing operator in {value!r}")
            if m.group(3) == "*n" and not m.group(2):
                raise LedgerError(f"dangling '*' in {value!r}")
            sign = -1 if m.group(1) == "-" else 1
            num = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(3):
                coef += sign * num
            else:
                const += sign * num
            pos = m.end()
        return cls(coef, const)

    @property
    def is_numeric(self) -> bool:
        return self.coef == 0

    def at(self, n: int) -> Fraction:
        return self.coef * n + self.const

    def numeric(self) -> Fraction:
        if not self.is_numeric:
            raise LedgerError(f"{self} depends on n")
        return self.const

    def __add__(self, other: LinExpr) -> LinExpr:
        other = LinExpr.parse(other)
        return LinExpr(self.coef + other.coef, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> LinExpr:
        return LinExpr(-self.coef, -self.const)

    def __sub__(self, other: LinExpr) -> LinExpr:
        return self + (-LinExpr.parse(other))

    def __rsub__(self, other: LinExpr) -> LinExpr:
        return LinExpr.parse(other) - self

    def __mul__(self, k: int | Fraction) -> LinExpr:
        return LinExpr(self.coef * k, self.const * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.coef == 0:
            return str(self.const)
        c = "" if self.coef == 1 else "-" if self.coef == -1 else str(self.coef)
        head = f"{c}n"
        if self.const == 0:
            return head
        sign = "-" if self.const < 0 else "+"
        return f"{head}{sign}{abs(self.const)}"


@dataclass(frozen=True)
class CohFact:
    space: str
    dim: LinExpr
    source: str = "declared"

    def __post_init__(self) -> None:
        object.__setattr__(self, "dim", LinExpr.parse(self.dim))
        if self.source not in ("declared", "derived"):
            raise LedgerError(f"unknown fact source {self.source!r}")


def h(q: int, sheaf: str) -> str:
    return f"H{q}({sheaf})"


def chi(sheaf: str) -> str:
    return f"chi({sheaf})"


@dataclass(frozen=True)
class ExactSequence:
    """A linear constraint among dimensions.

    kinds:
        ``vector-spaces``: ``0 -> V1 -> ... -> Vk -> 0`` exact, ``terms`` are
        cohomology spaces; the alternating sum of dimensions vanishes.
        ``sheaves``: ``0 -> A -> B -> C -> 0`` of sheaves; Euler
        characteristics are additive.
        ``euler``: ``chi(X) = Σ (-1)^q h^q(X)`` for ``q <= dimension``.
    """

    name: str
    kind: str
    terms: tuple[str, ...]
    dimension: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.kind == "sheaves" and len(self.terms) != 3:
            raise LedgerError(f"{self.name}: a short exact sequence of sheaves has three terms")
        if self.kind == "euler" and (len(self.terms) != 1 or self.dimension < 0):
            raise LedgerError(f"{self.name}: an euler relation names one sheaf and its dimension")
        if self.kind not in ("vector-spaces", "sheaves", "euler"):
            raise LedgerError(f"{self.name}: unknown sequence kind {self.kind!r}")
        if self.kind == "vector-spaces" and len(self.terms) < 2:
            raise LedgerError(f"{self.name}: exact sequence needs at least two terms")

    def constraint(self) -> list[tuple[str, int]]:
        """``(space, sign)`` pairs whose signed dimensions sum to zero."""
        if self.kind == "vector-spaces":
            return [(t, (-1) ** i) for i, t in enumerate(self.terms)]
        if self.kind == "sheaves":
            a, b, c = self.terms
            return [(chi(a), 1), (chi(b), -1), (chi(c), 1)]
        x = self.terms[0]
        return [(chi(x), 1)] + [(h(q, x), -((-1) ** q)) for q in range(self.dimension + 1)]


def _is_dimension(space: str) -> bool:
    return not space.startswith("chi(")


def _merge(facts: Iterable[CohFact]) -> dict[str, CohFact]:
    known: dict[str, CohFact] = {}
    for f in facts:
        if f.space in known and known[f.space].dim != f.dim:
            raise LedgerContradiction(f.space, f"declared twice with different values {known[f.space].dim} and {f.dim}")
        if _is_dimension(f.space) and f.dim.is_numeric and f.dim.const < 0:
            raise LedgerContradiction(f.space, f"negative dimension {f.dim}")
        known.setdefault(f.space, f)
    return known


def propagate(seqs: Sequence[ExactSequence], facts: Sequence[CohFact]) -> list[CohFact]:
    """Solve every constraint with a single unknown until nothing changes.

    Returns the input facts followed by the derived ones in derivation order.

    Raises:
        LedgerContradiction: a fully known constraint does not balance, or a
            derived numeric dimension is negative.
    """
    known = _merge(facts)
    changed = True
    while changed:
        changed = False
        for seq in seqs:
            cons = seq.constraint()
            unknown = [(s, sign) for s, sign in cons if s not in known]
            if len({s for s, _ in unknown}) > 1:
                continue
            total = LinExpr()
            for s, sign in cons:
                if s in known:
                    total = total + sign * known[s].dim
            if not unknown:
                if total != LinExpr():
                    raise LedgerContradiction(seq.name, f"alternating sum is {total}, not 0")
                continue
            space = unknown[0][0]
            weight = sum(sign for s, sign in unknown)
            if weight == 0:
                continue
            value = -total * Fraction(1, weight)
            if _is_dimension(space) and value.is_numeric and value.const < 0:
                raise LedgerContradiction(seq.name, f"forces {space} = {value} < 0")
            known[space] = CohFact(space, value, "derived")
            changed = True
    return list(known.values())


def unresolved(seqs: Sequence[ExactSequence], facts: Sequence[CohFact]) -> list[str]:
    """Spaces mentioned by some sequence whose dimension stays undetermined."""
    known = {f.space for f in propagate(seqs, facts)}
    seen: list[str] = []
    for seq in seqs:
        for s, _ in seq.constraint():
            if s not in known and s not in seen:
                seen.append(s)
    return seen


THETA_Z, THETA_ZS, THETA_S, THETA_Z_MINUS_S, KINV = (
    "Theta_Z", "Theta_Z,S", "Theta_S", "Theta_Z(-S)", "K_S^-1")

PIPELINE_SEQUENCES = (
    ExactSequence("euler(Theta_Z)", "euler", (THETA_Z,), 3),
    ExactSequence("euler(K_S^-1)", "euler", (KINV,), 2),
    ExactSequence("euler(Theta_S)", "euler", (THETA_S,), 2),
    ExactSequence("restrict_to_S", "vector-spaces", (h(1, THETA_ZS), h(1, THETA_Z), h(1, KINV))),
    ExactSequence("twist_by_S", "vector-spaces", (h(1, THETA_Z_MINUS_S), h(1, THETA_ZS), h(1, THETA_S))),
)


@dataclass
class ModuliReport:
    case: str
    n: int | None
    facts: dict[str, str]
    entries: list[dict[str, str]] = field(default_factory=list)

    def value(self, key: str) -> LinExpr:
        for e in self.entries:
            if e["key"] == key:
                return LinExpr.parse(e["value"])
        return LinExpr.parse(self.facts[key])

    def to_json(self) -> dict:
        return {"case": self.case, "n": self.n, "facts": dict(self.facts), "entries": [dict(e) for e in self.entries]}


def _declared(pairs: Iterable[tuple[str, object]], source: str = "declared") -> list[CohFact]:
    return [CohFact(space, LinExpr.parse(v), source) for space, v in pairs]


def moduli_pipeline(case: str, n: int | None = None, symbolic: bool = False) -> ModuliReport:
    """Moduli-dimension count for the elliptic family (``case="elliptic"``) or the K3 case.

    Numeric runs take the surface Euler characteristics from the surface
    module; ``symbolic=True`` declares their closed forms in ``n`` instead.
    """
    if case == "elliptic":
        if symbolic:
            n_val = None
            chi_kinv, chi_theta_s = LinExpr.parse("9-2n"), LinExpr.parse("6-4n")
            chi_theta_z = LinExpr.parse("15-7n")
        else:
            if n is None or n < 5:
                raise ValueError("the elliptic pipeline needs n >= 5")
            n_val = n
            s = surf.build_S_elliptic(n)
            chi_kinv = LinExpr.parse(surf.rr_chi(s, s.anticanonical))
            chi_theta_s = LinExpr.parse(surf.theta_chi(s))
            chi_theta_z = LinExpr.parse(15 - 7 * n)
        h0_theta_z, h0_theta_s = 1, 1
    elif case == "k3":
        if symbolic:
            raise ValueError("the K3 pipeline has no free parameter")
        n_val = 5
        s = surf.build_S_K3()
        chi_kinv = LinExpr.parse(surf.rr_chi(s, s.anticanonical))
        chi_theta_s = LinExpr.parse(surf.theta_chi(s))
        chi_theta_z = LinExpr.parse(15 - 7 * 5)
        h0_theta_z, h0_theta_s = 0, 0
    else:
        raise ValueError(f"unknown moduli case {case!r}")

    facts = _declared([
        (chi(THETA_Z), chi_theta_z),
        (h(0, THETA_Z), h0_theta_z), (h(2, THETA_Z), 0), (h(3, THETA_Z), 0),
        (h(0, KINV), 0), (h(2, KINV), 0),
        (h(0, THETA_S), h0_theta_s), (h(2, THETA_S), 0),
    ])
    facts += _declared([(chi(KINV), chi_kinv), (chi(THETA_S), chi_theta_s)], "derived")
    solved = {f.space: f.dim for f in propagate(PIPELINE_SEQUENCES, facts)}

    fixed_s = solved[h(1, THETA_Z_MINUS_S)]
    if case == "elliptic":
        surface_moduli = LinExpr.parse("2n-7") if symbolic else LinExpr.parse(1 + 2 * (n - 4))
    else:
        surface_moduli = LinExpr()
    entries = [
        {"key": "h1(Theta_Z)", "value": str(solved[h(1, THETA_Z)]), "kind": "complex"},
        {"key": "h1(K_S^-1)", "value": str(solved[h(1, KINV)]), "kind": "complex"},
        {"key": "h1(Theta_Z,S)", "value": str(solved[h(1, THETA_ZS)]), "kind": "complex"},
        {"key": "h1(Theta_S)", "value": str(solved[h(1, THETA_S)]), "kind": "complex"},
        {"key": "h1(Theta_Z(-S))", "value": str(fixed_s), "kind": "complex"},
        {"key": "surface_moduli", "value": str(surface_moduli), "kind": "real"},
        {"key": "total", "value": str(fixed_s + surface_moduli), "kind": "as stated (sum of the two lines above)"},
    ]
    return ModuliReport(case, n_val, {k: str(v) for k, v in solved.items()}, entries)
