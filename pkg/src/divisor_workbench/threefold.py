"""Intersection ring of a twistor space and its blowups along curves.

Classes of a ring are :class:`~divisor_workbench.lattice.ClassVector` values
over the ring's labels ``F, a1, ..., an`` followed by one label per
exceptional divisor. Degree-3 products are evaluated by a symmetric
trilinear form; the second Chern class is stored only as the linear
functional ``L -> L·c2``.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .lattice import ClassVector, Coeff, Lattice, class_from_terms
from .surface import SurfaceModel, Unsupported

Vec = Sequence[Coeff]


def _coords(x: ClassVector | Vec) -> tuple[Coeff, ...]:
    return x.coords if isinstance(x, ClassVector) else tuple(x)


def _dot(u: Vec, v: Vec) -> Coeff:
    return sum((a * b for a, b in zip(u, v)), 0)


class _RingOps:
    labels: tuple[str, ...]

    def cls(self, terms: Mapping[str, Coeff] | str | Vec) -> ClassVector:
        return class_from_terms(self, terms)

    def zero(self) -> ClassVector:
        return ClassVector(self, (0,) * len(self.labels))

    @property
    def c1_class(self) -> ClassVector:
        return ClassVector(self, self.c1)

    def c2_dot(self, x: ClassVector | Vec) -> Coeff:
        return _dot(_coords(x), self.c2)

    def pullback(self, x: ClassVector) -> ClassVector:
        """Pull a class of a lower ring in the same blowup tower up to this ring."""
        pad = len(self.labels) - len(x.coords)
        if pad < 0:
            raise ValueError("class lives in a larger ring")
        return ClassVector(self, tuple(x.coords) + (0,) * pad)


@dataclass(frozen=True, eq=True)
class TwistorRing(_RingOps):
    """Cohomology ring of a twistor space over the connected sum of ``n`` projective planes.

    Products: ``F³ = 8 - 2n``, ``F·ai² = -2``, all other monomials in the
    ``ai`` vanish, ``F²·ai = 0``. Chern data: ``c1 = 2F``, ``F·c2 = 12``,
    ``ai·c2 = 0``. ``f_cubed`` overrides ``F³`` for deliberately broken rings.
    """

    n: int
    f_cubed: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"twistor ring needs n >= 1, got {self.n}")

    @property
    def name(self) -> str:
        return f"Z({self.n})"

    @property
    def labels(self) -> tuple[str, ...]:
        return ("F",) + tuple(f"a{i}" for i in range(1, self.n + 1))

    @property
    def blowups(self) -> tuple[BlowupRecord, ...]:
        return ()

    @property
    def twistor(self) -> TwistorRing:
        return self

    @property
    def F_cubed(self) -> int:
        return 8 - 2 * self.n if self.f_cubed is None else self.f_cubed

    @property
    def c1(self) -> tuple[int, ...]:
        return (2,) + (0,) * self.n

    @property
    def c2(self) -> tuple[int, ...]:
        return (12,) + (0,) * self.n

    def triple(self, x: ClassVector | Vec, y: ClassVector | Vec, z: ClassVector | Vec) -> Coeff:
        x, y, z = _coords(x), _coords(y), _coords(z)
        ax, ay, az = x[1:], y[1:], z[1:]
        return (self.F_cubed * x[0] * y[0] * z[0]
                - 2 * (x[0] * _dot(ay, az) + y[0] * _dot(ax, az) + z[0] * _dot(ax, ay)))


@dataclass(frozen=True)
class CurveData:
    """A smooth curve in a threefold: genus and intersection numbers ``L·C``.

    Generators missing from ``intersections`` meet the curve in degree 0.
    """

    name: str
    genus: int
    intersections: Mapping[str, int] = field(default_factory=dict)

    def degree(self, ring: Ring, x: ClassVector | Vec) -> Coeff:
        """``x·C`` for a class of ``ring``."""
        unknown = set(self.intersections) - set(ring.labels)
        if unknown:
            raise KeyError(f"curve {self.name} lists unknown generators {sorted(unknown)}")
        return sum((c * self.intersections.get(lab, 0) for lab, c in zip(ring.labels, _coords(x))), 0)


@dataclass(frozen=True)
class BlowupRecord:
    label: str
    curve: CurveData
    splitting: tuple[int, int]
    normal_degree: int

    @property
    def e(self) -> int:
        return self.splitting[1] - self.splitting[0]


@dataclass(frozen=True)
class ExtendedRing(_RingOps):
    """``base`` blown up along one curve, adding the exceptional label ``record.label``.

    For pullbacks ``μ*A, μ*B`` and the exceptional class ``E`` over ``C``:
    ``μ*A·μ*B·E = 0``, ``μ*A·E² = -A·C``, ``E³ = -deg N``.
    """

    base: Ring
    record: BlowupRecord

    @property
    def name(self) -> str:
        return f"{self.base.name}+{self.record.label}"

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def labels(self) -> tuple[str, ...]:
        return self.base.labels + (self.record.label,)

    @property
    def blowups(self) -> tuple[BlowupRecord, ...]:
        return self.base.blowups + (self.record,)

    @property
    def twistor(self) -> TwistorRing:
        return self.base.twistor

    @property
    def c1(self) -> tuple[Coeff, ...]:
        return tuple(self.base.c1) + (-1,)

    @property
    def c2(self) -> tuple[Coeff, ...]:
        # c2' = μ*(c2 + [C]) - μ*c1·E, paired against each generator.
        rec, base = self.record, self.base
        pulled = tuple(v + rec.curve.intersections.get(lab, 0) for lab, v in zip(base.labels, base.c2))
        return pulled + (rec.normal_degree - (2 * rec.curve.genus - 2),)

    def triple(self, x: ClassVector | Vec, y: ClassVector | Vec, z: ClassVector | Vec) -> Coeff:
        x, y, z = _coords(x), _coords(y), _coords(z)
        xb, xe = x[:-1], x[-1]
        yb, ye = y[:-1], y[-1]
        zb, ze = z[:-1], z[-1]
        deg = self.record.curve.degree
        base = self.base
        return (base.triple(xb, yb, zb)
                - (xe * ye * deg(base, zb) + xe * ze * deg(base, yb) + ye * ze * deg(base, xb))
                - xe * ye * ze * self.record.normal_degree)


Ring = Union[TwistorRing, ExtendedRing]


def build_twistor_ring(n: int) -> TwistorRing:
    return TwistorRing(n)


def rr3_chi(r: Ring, l: ClassVector | Vec) -> Fraction:
    """Hirzebruch-Riemann-Roch on a threefold.

    ``l³/6 + l²·c1/4 + l·(c1² + c2)/12 + c1·c2/24``, evaluated exactly.
    """
    v, c1 = _coords(l), r.c1
    return (Fraction(r.triple(v, v, v), 6)
            + Fraction(r.triple(v, v, c1), 4)
            + Fraction(r.triple(v, c1, c1) + r.c2_dot(v), 12)
            + Fraction(r.c2_dot(c1), 24))


def c1c2(r: Ring) -> Coeff:
    return r.c2_dot(r.c1)


def chi_after_blowup(chi_L: Coeff, L_dot_C: Coeff, g_C: int) -> Coeff:
    """Euler characteristic of ``μ*L - E`` after blowing up a curve of genus ``g_C``."""
    return chi_L - L_dot_C - 1 + g_C


def normal_bundle_degree(r: Ring, c: CurveData) -> Coeff:
    """Degree of the normal bundle by adjunction: ``2g - 2 + c1·C``."""
    return 2 * c.genus - 2 + c.degree(r, r.c1)


def blowup_along_curve(r: Ring, c: CurveData, splitting: tuple[int, int], label: str = "E") -> ExtendedRing:
    """Blow up ``r`` along ``c`` whose normal bundle splits as ``O(a) + O(b)``, ``a <= b``.

    Raises:
        ValueError: if ``a + b`` differs from the normal degree, ``a > b``, or
            ``label`` is already taken.
    """
    a, b = splitting
    deg = normal_bundle_degree(r, c)
    if a + b != deg:
        raise ValueError(f"splitting ({a}, {b}) does not sum to deg N = {deg} for curve {c.name}")
    if a > b:
        raise ValueError(f"splitting must be ordered a <= b, got ({a}, {b})")
    if label in r.labels:
        raise ValueError(f"label {label!r} already used in {r.name}")
    c.degree(r, r.zero())
    return ExtendedRing(r, BlowupRecord(label, c, (a, b), deg))


def _levels(r: Ring) -> list[ExtendedRing]:
    out = []
    while isinstance(r, ExtendedRing):
        out.append(r)
        r = r.base
    return out[::-1]


def _level_of(r: Ring, label: str) -> ExtendedRing:
    for lvl in _levels(r):
        if lvl.record.label == label:
            return lvl
    raise KeyError(f"no blowup with exceptional label {label!r} in {r.name}")


@dataclass(frozen=True)
class HirzebruchClass:
    """A class ``A_coeff·A + fib_coeff·𝔣`` on ``F_e`` where ``A² = -e``.

    For ``e = 0`` this is the bidegree ``(A_coeff, fib_coeff)`` with ``𝔣`` the
    fiber of the projection to the blown-up curve.
    """

    e: int
    A: Coeff
    fib: Coeff

    @classmethod
    def anticanonical(cls, e: int) -> HirzebruchClass:
        return cls(e, 2, 2 + e)

    def dot(self, other: HirzebruchClass) -> Coeff:
        if other.e != self.e:
            raise ValueError("classes on different Hirzebruch surfaces")
        return -self.e * self.A * other.A + self.A * other.fib + self.fib * other.A

    def bidegree(self) -> tuple[Coeff, Coeff]:
        if self.e != 0:
            raise ValueError("bidegree notation only applies to F_0")
        return (self.A, self.fib)

    def to_surface(self) -> SurfaceModel:
        from .surface import hirzebruch
        return hirzebruch(self.e)


def exceptional_restriction(r: Ring, label: str, l: ClassVector | Vec) -> HirzebruchClass:
    """Restrict ``l = μ*M + k·E (+ disjoint later exceptionals)`` to ``E = label``.

    ``E|_E = -A + a·𝔣`` and ``μ*M|_E = (M·C)·𝔣`` where ``(a, b)`` is the
    splitting of the normal bundle of the centre ``C``.

    Raises:
        Unsupported: if ``l`` involves a later exceptional divisor whose
            centre meets ``E``.
    """
    v = _coords(l)
    lvl = _level_of(r, label)
    cut = len(lvl.base.labels)
    base_part, k, later = v[:cut], v[cut], v[cut + 1:]
    for lab, coeff in zip(r.labels[cut + 1:], later):
        if coeff and _level_of(r, lab).record.curve.intersections.get(label, 0) != 0:
            raise Unsupported(f"{lab} meets {label}; its restriction is not determined by class data")
    rec = lvl.record
    return HirzebruchClass(rec.e, -k, k * rec.splitting[0] + rec.curve.degree(lvl.base, base_part))


def _tail_sum(r: Ring, sign: int = 1) -> tuple[int, ...]:
    n = r.n
    v = [0] * len(r.labels)
    for i in range(5, n + 1):
        v[i] = sign
    return tuple(v)


def divisor_X(r: Ring) -> ClassVector:
    """``F - a5 - ... - an`` pulled back to ``r``."""
    v = list(_tail_sum(r, -1))
    v[0] = 1
    return ClassVector(r, tuple(v))


def homology_zero_check(r: TwistorRing) -> bool:
    """``X·X̄·y = 0`` for every generator ``y`` of H²(Z, ℤ).

    ``X = F - a5 - ... - an`` and ``X̄ = F + a5 + ... + an``. The generators
    are the ``ai`` and ``(F + a1 + ... + an)/2``; the last is tested as its
    double.
    """
    x = divisor_X(r)
    xbar = ClassVector(r, (x.coords[0],) + tuple(-c for c in x.coords[1:]))
    gens = [r.cls(f"a{i}") for i in range(1, r.n + 1)]
    gens.append(ClassVector(r, (1,) * len(r.labels)))
    return all(r.triple(x, xbar, y) == 0 for y in gens)


def exceptional_self_intersection_in_divisor(r: Ring, label: str = "E0", divisor: ClassVector | None = None) -> Coeff:
    """``E·E·D``: the self-intersection of ``E|_D`` inside the divisor ``D``.

    ``D`` defaults to ``μ*(F - a5 - ... - an) - 2E``.
    """
    _level_of(r, label)
    e_vec = r.cls(label)
    if divisor is None:
        divisor = divisor_X(r) - 2 * e_vec
    return r.triple(e_vec, e_vec, divisor)


def default_images(r: TwistorRing, s: SurfaceModel) -> dict[str, ClassVector]:
    """``F ↦ -K_S`` and ``ai ↦ Ci - Cbari`` for every ``i`` the surface names."""
    known = set(s.named_classes()) | set(s.lattice.labels)
    images = {"F": s.anticanonical}
    for i in range(5, r.n + 1):
        if f"C{i}" in known and f"Cbar{i}" in known:
            images[f"a{i}"] = s.cls({f"C{i}": 1, f"Cbar{i}": -1})
    return images


def restrict_to_surface(r: TwistorRing, l: ClassVector | Vec, s: SurfaceModel,
                        images: Mapping[str, ClassVector] | None = None) -> ClassVector:
    """Restrict a class of ``r`` to the divisor ``S ∈ |F|``.

    Extra generator images (for instance ``a1..a4``) may be supplied in
    ``images``; they override the defaults.

    Raises:
        KeyError: if ``l`` involves a generator with no declared image.
    """
    if not isinstance(r, TwistorRing):
        raise Unsupported("restriction is defined on the twistor ring itself, not on a blowup")
    table = default_images(r, s)
    table.update(images or {})
    out = s.lattice.zero()
    for lab, c in zip(r.labels, _coords(l)):
        if c == 0:
            continue
        if lab not in table:
            raise KeyError(f"no declared restriction image for generator {lab}")
        out = out + c * table[lab]
    return out


def curve_C0(n: int, bar: bool = False, exceptional_labels: Sequence[str] = ()) -> CurveData:
    """The rational curve ``C0`` (or its conjugate) of the divisor ``S``.

    ``F·C0 = K_S⁻¹·C0 = 4 - n`` and ``ai·C0 = (Ci - Cbari)·C0 = ±1`` for
    ``i >= 5``. ``a1..a4`` are taken to meet it in degree 0. Exceptional
    labels listed are declared disjoint from the curve.
    """
    sign = -1 if bar else 1
    inter = {"F": 4 - n, **{f"a{i}": sign for i in range(5, n + 1)}}
    inter.update({lab: 0 for lab in exceptional_labels})
    return CurveData("Cbar0" if bar else "C0", 0, inter)


def splittings_C0(n: int) -> dict[str, tuple[int, int]]:
    """Both possible normal bundle splittings of ``C0``: ``F_0`` and ``F_2`` cases."""
    return {"F0": (3 - n, 3 - n), "F2": (2 - n, 4 - n)}


def blowup_C0_pair(n: int, splitting: tuple[int, int], ring: TwistorRing | None = None) -> ExtendedRing:
    """Blow up ``C0`` and then its disjoint conjugate, labels ``E0`` and ``E0bar``."""
    z = ring or build_twistor_ring(n)
    z1 = blowup_along_curve(z, curve_C0(n), splitting, "E0")
    return blowup_along_curve(z1, curve_C0(n, bar=True, exceptional_labels=("E0",)), splitting, "E0bar")


def h2_lattice(r: TwistorRing) -> Lattice:
    """H²(Z, ℤ) with the half-integral generator ``h = (F + Σai)/2`` as an extra basis element.

    The pairing is ``(y, z) ↦ F·y·z`` and ``2h - F - Σai`` is a relation.
    """
    base = [tuple(int(i == j) for j in range(len(r.labels))) for i in range(len(r.labels))]
    half = tuple(Fraction(1, 2) for _ in r.labels)
    vecs = base + [half]
    f = base[0]
    gram = []
    for y in vecs:
        row = []
        for z in vecs:
            val = Fraction(r.triple(f, y, z))
            if val.denominator != 1:
                raise ValueError("restricted pairing is not integral")
            row.append(int(val))
        gram.append(row)
    relation = (-1,) * len(r.labels) + (2,)
    return Lattice(name=f"H2({r.name})", labels=r.labels + ("h",), gram=gram, relations=(relation,))
