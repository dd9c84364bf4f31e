"""Rational surface models: blowups, adjunction, Riemann-Roch, Zariski decomposition."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import exact
from .lattice import ClassVector, Coeff, Lattice, class_from_terms, pair, validate_lattice


class InconsistencyError(ValueError):
    """Numerical data that cannot come from an actual surface (e.g. odd adjunction parity)."""


class CertificateFailure(ArithmeticError):
    """A negative-definiteness certificate required by an algorithm did not hold."""


class Unsupported(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceModel:
    """A surface lattice plus the data needed for Riemann-Roch.

    ``named`` maps curve names to coordinate tuples. ``blowup_count`` is the
    number of points blown up on the quadric; for abstract lattices it may be
    declared as metadata or left ``None``.
    """

    lattice: Lattice
    chi_O: int = 1
    blowup_count: int | None = None
    base_kind: str = "abstract"
    named: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    @property
    def K(self) -> ClassVector:
        return self.lattice.canonical_class

    @property
    def anticanonical(self) -> ClassVector:
        return -self.K

    def named_classes(self) -> dict[str, ClassVector]:
        out = {name: ClassVector(self.lattice, coords) for name, coords in self.named.items()}
        if self.lattice.canonical is not None:
            out.setdefault("K", self.K)
            out.setdefault("Kinv", self.anticanonical)
        return out

    def cls(self, terms: Mapping[str, Coeff] | str | Sequence[Coeff]) -> ClassVector:
        return class_from_terms(self.lattice, terms, self.named_classes())

    def self_intersection(self, terms: Mapping[str, Coeff] | str) -> Coeff:
        c = self.cls(terms)
        return pair(c, c)


@dataclass(frozen=True)
class PointSpec:
    """A point to blow up, with its multiplicity on each named curve.

    ``conjugate`` names the exceptional label of the conjugate point when the
    surface carries a real structure; ``None`` marks a real point.
    """

    label: str
    multiplicities: Mapping[str, int] = field(default_factory=dict)
    conjugate: str | None = None


def quadric() -> SurfaceModel:
    lat = Lattice(
        name="quadric",
        labels=("f1", "f2"),
        gram=((0, 1), (1, 0)),
        canonical=(-2, -2),
        conjugation=((0, 1), (1, 1)),
    )
    return SurfaceModel(lattice=lat, chi_O=1, blowup_count=0, base_kind="quadric")


def hirzebruch(e: int) -> SurfaceModel:
    """The Hirzebruch surface ``F_e`` in the basis {section A with A² = -e, fiber}."""
    if e < 0:
        raise ValueError("Hirzebruch index must be non-negative")
    lat = Lattice(
        name=f"hirzebruch:{e}",
        labels=("A", "fib"),
        gram=((-e, 1), (1, 0)),
        canonical=(-2, -(2 + e)),
    )
    return SurfaceModel(lattice=lat, chi_O=1, blowup_count=None, base_kind="abstract")


def blowup_points(s: SurfaceModel, specs: Sequence[PointSpec], name: str | None = None) -> SurfaceModel:
    """Blow up one point per spec; named curves become strict transforms.

    Each new exceptional class E has E² = -1 and is orthogonal to the old
    basis; the canonical class becomes K + E. Incidence is taken verbatim
    from the specs' multiplicities.
    """
    old = s.lattice
    k, m = old.rank, len(specs)
    labels = old.labels + tuple(p.label for p in specs)
    if len(set(labels)) != len(labels):
        raise ValueError("exceptional labels clash with existing basis labels")
    gram = [list(row) + [0] * m for row in old.gram]
    gram += [[0] * k + [-1 if i == j else 0 for j in range(m)] for i in range(m)]
    pad = (0,) * m
    relations = tuple(r + pad for r in old.relations)
    canonical = None
    if old.canonical is not None:
        canonical = old.canonical + (1,) * m

    conjugation = None
    if old.conjugation is not None:
        index = {lab: i for i, lab in enumerate(labels)}
        conjugation = list(old.conjugation)
        for i, p in enumerate(specs):
            target = p.conjugate if p.conjugate is not None else p.label
            if target not in index:
                raise KeyError(f"conjugate point {target!r} of {p.label!r} is not blown up")
            conjugation.append((index[target], 1))

    named = {nm: tuple(v) + pad for nm, v in s.named.items()}
    for i, p in enumerate(specs):
        for curve, mult in p.multiplicities.items():
            if curve not in named:
                raise KeyError(f"point {p.label!r} declares multiplicity on unknown curve {curve!r}")
            if mult < 0:
                raise ValueError("multiplicities must be non-negative")
            v = list(named[curve])
            v[k + i] -= mult
            named[curve] = tuple(v)

    lat = Lattice(
        name=name or f"{old.name}+{m}",
        labels=labels,
        gram=gram,
        relations=relations,
        canonical=canonical,
        conjugation=tuple(conjugation) if conjugation is not None else None,
    )
    count = None if s.blowup_count is None else s.blowup_count + m
    return replace(s, lattice=lat, blowup_count=count, named=named)


def with_curves(s: SurfaceModel, curves: Mapping[str, Mapping[str, Coeff] | str | Sequence[Coeff]]) -> SurfaceModel:
    """Return ``s`` with additional named curve classes."""
    named = dict(s.named)
    for nm, terms in curves.items():
        named[nm] = s.cls(terms).coords
    return replace(s, named=named)


def _half(x: Coeff, what: str) -> Coeff:
    if x % 2:
        raise InconsistencyError(f"{what} is odd ({x}); not realizable on a surface")
    return x // 2 if isinstance(x, int) else x / 2


def adjunction_genus(s: SurfaceModel, d: ClassVector) -> Coeff:
    """Arithmetic genus ``1 + (d² + d·K)/2``."""
    return 1 + _half(pair(d, d) + pair(d, s.K), "d² + d·K")


def rr_chi(s: SurfaceModel, l: ClassVector) -> Coeff:
    """Riemann-Roch: ``χ(O) + (l² - l·K)/2``."""
    return s.chi_O + _half(pair(l, l) - pair(l, s.K), "l² - l·K")


def theta_chi(s: SurfaceModel) -> int:
    """Euler characteristic of the tangent sheaf of a blown-up quadric.

    Uses ``6 - 2k`` for ``k`` blown-up points and cross-checks it against the
    value ``2K² - 10χ(O)`` forced by Noether's formula.
    """
    if s.blowup_count is None:
        raise Unsupported(f"{s.lattice.name} is not declared as a blowup of the quadric")
    value = 6 - 2 * s.blowup_count
    k2 = pair(s.K, s.K)
    if 2 * k2 - 10 * s.chi_O != value:
        raise InconsistencyError(f"declared blowup count {s.blowup_count} disagrees with K² = {k2}")
    return value


@dataclass(frozen=True)
class ZariskiDecomposition:
    positive: ClassVector
    negative: ClassVector
    coefficients: tuple[Fraction, ...]
    """Coefficient of each listed component in the negative part."""

    def __iter__(self):
        return iter((self.positive, self.negative))


def _negative_part(gram: exact.IntMatrix, rhs: Sequence[Coeff], support: Sequence[int]) -> list[Fraction]:
    k = len(rhs)
    coeffs = [Fraction(0)] * k
    if not support:
        return coeffs
    sub = [[gram[i][j] for j in support] for i in support]
    if not exact.is_negative_definite(sub):
        raise CertificateFailure(f"Gram matrix on support {list(support)} is not negative definite")
    sol = exact.solve_linear(sub, [rhs[i] for i in support])
    for i, x in zip(support, sol):
        coeffs[i] = x
    return coeffs


def zariski_decompose(s: SurfaceModel, d: ClassVector, components: Sequence[ClassVector]) -> ZariskiDecomposition:
    """Zariski decomposition ``d = P + N`` relative to the listed prime components.

    Support-enlargement loop: start with the components ``d`` meets
    negatively, solve for the negative part on the current support, add the
    components the positive part still meets negatively, repeat.

    Raises:
        CertificateFailure: a support Gram matrix is not negative definite,
            or a negative-part coefficient comes out negative.
    """
    gram = s.lattice.gram_of(components)
    rhs = [pair(d, c) for c in components]
    support: list[int] = []
    coeffs = [Fraction(0)] * len(components)
    if not d.is_zero():
        while True:
            residual = [rhs[i] - sum(gram[i][j] * coeffs[j] for j in support) for i in range(len(components))]
            grow = [i for i, r in enumerate(residual) if r < 0 and i not in support]
            if not grow:
                break
            support = sorted(support + grow)
            coeffs = _negative_part(gram, rhs, support)
            if any(c < 0 for c in coeffs):
                raise CertificateFailure("negative part acquired a negative coefficient; input is not effective")
    negative = s.lattice.zero()
    for c, comp in zip(coeffs, components):
        if c:
            negative = negative + c * comp
    return ZariskiDecomposition(positive=d - negative, negative=negative, coefficients=tuple(coeffs))


def _sum_labels(labels: Sequence[str], index: Mapping[str, int], rank: int, weights: Mapping[str, int]) -> tuple[int, ...]:
    v = [0] * rank
    for lab in labels:
        v[index[lab]] += weights.get(lab, 1)
    return tuple(v)


def build_S_elliptic(n: int) -> SurfaceModel:
    """Blown-up elliptic-fibration surface with curves ``C0..Cn`` and conjugates.

    ``C0² = 2-n``, ``C1..C4`` are (-2)-curves and ``C5..Cn`` are (-1)-curves,
    each meeting ``C0`` once; the conjugate configuration is disjoint from it.
    The two fiber expressions ``2C0 + C1..4 + 2C5..n`` and its conjugate are
    identified by a relation, and ``K = -f + C5..n + Cbar5..n``.
    """
    if n < 5:
        raise ValueError(f"S_elliptic needs n >= 5, got {n}")
    side = [f"C{i}" for i in range(n + 1)]
    bar = [f"Cbar{i}" for i in range(n + 1)]
    labels = tuple(side + bar)
    rank = len(labels)
    half = n + 1
    gram = [[0] * rank for _ in range(rank)]
    for off in (0, half):
        gram[off][off] = 2 - n
        for i in range(1, n + 1):
            gram[off + i][off + i] = -2 if i <= 4 else -1
            gram[off][off + i] = gram[off + i][off] = 1
    index = {lab: i for i, lab in enumerate(labels)}
    weights = {"C0": 2, "Cbar0": 2, **{f"C{i}": 2 for i in range(5, n + 1)}, **{f"Cbar{i}": 2 for i in range(5, n + 1)}}
    fib = _sum_labels(side, index, rank, weights)
    fib_bar = _sum_labels(bar, index, rank, weights)
    tail = _sum_labels([f"C{i}" for i in range(5, n + 1)] + [f"Cbar{i}" for i in range(5, n + 1)], index, rank, {})
    canonical = tuple(t - f for f, t in zip(fib, tail))
    relation = tuple(a - b for a, b in zip(fib, fib_bar))
    conjugation = tuple((i + half, 1) if i < half else (i - half, 1) for i in range(rank))
    lat = Lattice(
        name=f"S_elliptic:{n}",
        labels=labels,
        gram=gram,
        relations=(relation,),
        canonical=canonical,
        conjugation=conjugation,
    )
    report = validate_lattice(lat)
    if not report.ok:
        raise AssertionError(f"S_elliptic({n}) failed validation: {report.failures}")
    named = {"f": fib, "fbar": fib_bar}
    for prefix in ("C", "Cbar"):
        named[f"{prefix}1..4"] = _sum_labels([f"{prefix}{i}" for i in range(1, 5)], index, rank, {})
        named[f"{prefix}5..n"] = _sum_labels([f"{prefix}{i}" for i in range(5, n + 1)], index, rank, {})
    return SurfaceModel(lattice=lat, chi_O=1, blowup_count=2 * n, base_kind="abstract", named=named)


K3_CHAIN = ("M1", "L2", "M2", "L1")


def build_S_K3() -> SurfaceModel:
    """The quadric blown up at the 8 points of D ∩ D̄ and at the double points p, p̄.

    ``D = L1 + L2 + M1 + M2`` with ``Li`` of bidegree (1,0) and ``Mj`` of
    bidegree (0,1); ``p = L1 ∩ M1``. Conjugation keeps both rulings and swaps
    each curve with its barred partner. The chain ``C`` is the strict
    transform of ``D``; ``C5`` and ``Cbar5`` are the exceptional curves over
    ``p`` and ``p̄``.
    """
    s = quadric()
    curves = {
        "L1": "f1", "L2": "f1", "M1": "f2", "M2": "f2",
        "L1bar": "f1", "L2bar": "f1", "M1bar": "f2", "M2bar": "f2",
        "D": {"f1": 2, "f2": 2}, "Dbar": {"f1": 2, "f2": 2},
    }
    s = with_curves(s, curves)
    specs = []
    for i in (1, 2):
        for j in (1, 2):
            # L_i meets Mbar_j; its conjugate is Lbar_i ∩ M_j.
            specs.append(PointSpec(f"Eq{i}{j}", {f"L{i}": 1, f"M{j}bar": 1, "D": 1, "Dbar": 1}, conjugate=f"Er{j}{i}"))
    for i in (1, 2):
        for j in (1, 2):
            specs.append(PointSpec(f"Er{i}{j}", {f"M{i}": 1, f"L{j}bar": 1, "D": 1, "Dbar": 1}, conjugate=f"Eq{j}{i}"))
    specs.append(PointSpec("Ep", {"L1": 1, "M1": 1, "D": 2}, conjugate="Epbar"))
    specs.append(PointSpec("Epbar", {"L1bar": 1, "M1bar": 1, "Dbar": 2}, conjugate="Ep"))
    s = blowup_points(s, specs, name="S_K3")
    named = dict(s.named)
    named["C"] = named.pop("D")
    named["Cbar"] = named.pop("Dbar")
    named["C5"] = s.lattice.basis_class("Ep").coords
    named["Cbar5"] = s.lattice.basis_class("Epbar").coords
    return replace(s, named=named)


def chain_classes(s: SurfaceModel, bar: bool = False) -> list[ClassVector]:
    """The four chain components of ``build_S_K3`` in chain order."""
    suffix = "bar" if bar else ""
    return [s.cls(f"{c}{suffix}") for c in K3_CHAIN]


def surface_from_name(spec: str) -> SurfaceModel:
    """Resolve ``quadric``, ``S_K3``, ``S_elliptic:<n>`` or ``hirzebruch:<e>``."""
    head, _, arg = spec.partition(":")
    if head == "quadric" and not arg:
        return quadric()
    if head == "S_K3" and not arg:
        return build_S_K3()
    if head == "S_elliptic" and arg:
        return build_S_elliptic(int(arg))
    if head == "hirzebruch" and arg:
        return hirzebruch(int(arg))
    raise ValueError(f"unknown surface builder {spec!r}")


def component_names(n: int, bar: bool = False) -> list[str]:
    prefix = "Cbar" if bar else "C"
    return [f"{prefix}{i}" for i in range(n + 1)]


def fiber_chain() -> dict[str, int]:
    """``2C0 + C1 + C2 + C3 + C4`` as a term mapping."""
    return {"C0": 2, **{f"C{i}": 1 for i in range(1, 5)}}


def exceptional_sum(n: int, bar: bool = False) -> dict[str, int]:
    prefix = "Cbar" if bar else "C"
    return {f"{prefix}{i}": 1 for i in range(5, n + 1)}

