"""The table of check operations a scenario may call.

Each entry declares how its arguments are decoded and what shape of value
it returns, so scenarios are fully resolved before anything runs.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .. import cohomledger as ledger
from .. import exact, threefold
from .. import surface as _surf
from .. import lattice as lat
from ..lattice import ClassVector

# Argument decoders, as (tag, detail) pairs:
#   ("ref", kinds)      id of an earlier object of one of ``kinds``
#   ("refs", kinds)     list of such ids
#   ("class", arg)      class expression in the space of object ``arg``
#   ("classes", arg)    list of class expressions
#   ("images", arg)     {generator: class expression} in the space of ``arg``
#   ("number",) ("matrix",) ("vector",) ("int",) ("bool",) ("label",)
#   ("choice", options)
SURFACES = ("surface", "blowup_points")
SPACES = SURFACES + ("lattice",)
RINGS = ("ring", "ring_blowup")


@dataclass(frozen=True)
class Op:
    fn: Callable[..., Any]
    args: Mapping[str, tuple]
    optional: frozenset[str] = field(default_factory=frozenset)
    # Result shape: a fixed tag, or a function of the raw args returning one.
    result: tuple | Callable[[Mapping[str, Any]], tuple] = ("number",)


def _gram_classes(on: Any, classes: list[ClassVector]) -> exact.IntMatrix:
    space = classes[0].space if classes else None
    return space.gram_of(classes) if space is not None else ()


def _neg_def(matrix=None, on=None, classes=None) -> bool:
    if matrix is None:
        if on is None or classes is None:
            raise ValueError("give either matrix or on + classes")
        matrix = _gram_classes(on, classes)
    return exact.is_negative_definite(matrix)


def _solve(matrix, rhs):
    try:
        return exact.solve_linear(matrix, rhs)
    except exact.NoUniqueSolution as exc:
        return exc.kind


def _lattice_of(obj: Any) -> lat.Lattice:
    return obj.lattice if isinstance(obj, _surf.SurfaceModel) else obj


def _validate(on) -> bool:
    return lat.validate_lattice(_lattice_of(on)).ok


def _restrict(ring, cls, surface, images=None, pair_with=None):
    image = threefold.restrict_to_surface(ring, cls, surface, images)
    return image if pair_with is None else lat.pair(image, pair_with)


def _self_int_in_divisor(ring, exceptional, divisor=None):
    return threefold.exceptional_self_intersection_in_divisor(ring, exceptional, divisor)


def _propagate(sequences, facts):
    flat = [f for group in facts for f in group]
    return {f.space: f.dim for f in ledger.propagate(sequences, flat)}


def _pipeline(case, n=None, symbolic=False):
    report = ledger.moduli_pipeline(case, n, symbolic)
    values = {k: ledger.LinExpr.parse(v) for k, v in report.facts.items()}
    values.update({e["key"]: ledger.LinExpr.parse(e["value"]) for e in report.entries})
    return values


def _restrict_result(args: Mapping[str, Any]) -> tuple:
    return ("number",) if "pair_with" in args else ("class", "surface")


OPS: dict[str, Op] = {
    "det": Op(lambda matrix: exact.det(matrix), {"matrix": ("matrix",)}),
    "is_negative_definite": Op(
        _neg_def,
        {"matrix": ("matrix",), "on": ("ref", SPACES), "classes": ("classes", "on")},
        frozenset({"matrix", "on", "classes"}), ("bool",)),
    "solve_linear": Op(_solve, {"matrix": ("matrix",), "rhs": ("vector",)}, result=("solution",)),
    "in_integer_span": Op(lambda vectors, target: exact.in_integer_span(vectors, target), {"vectors": ("matrix",), "target": ("vector",)}, result=("bool",)),
    "validate_lattice": Op(_validate, {"on": ("ref", SPACES)}, result=("bool",)),
    "pair": Op(lambda on, a, b: lat.pair(a, b), {"on": ("ref", SPACES), "a": ("class", "on"), "b": ("class", "on")}),
    "classes_equivalent": Op(
        lambda on, a, b: lat.classes_equivalent(a, b), {"on": ("ref", SPACES), "a": ("class", "on"), "b": ("class", "on")},
        result=("bool",)),
    "conjugate": Op(lambda on, a: lat.conjugate(a), {"on": ("ref", SPACES), "a": ("class", "on")}, result=("class", "on")),
    "self_intersections": Op(
        lambda on, classes: [lat.pair(c, c) for c in classes],
        {"on": ("ref", SPACES), "classes": ("classes", "on")}, result=("numbers",)),
    "gram": Op(_gram_classes, {"on": ("ref", SPACES), "classes": ("classes", "on")}, result=("matrix",)),
    "adjunction_genus": Op(
        lambda surface, cls: _surf.adjunction_genus(surface, cls),
        {"surface": ("ref", SURFACES), "cls": ("class", "surface")}),
    "rr_chi": Op(
        lambda surface, cls: _surf.rr_chi(surface, cls),
        {"surface": ("ref", SURFACES), "cls": ("class", "surface")}),
    "theta_chi": Op(lambda surface: _surf.theta_chi(surface), {"surface": ("ref", SURFACES)}),
    "zariski_decompose": Op(
        lambda surface, cls, components: _surf.zariski_decompose(surface, cls, components),
        {"surface": ("ref", SURFACES), "cls": ("class", "surface"), "components": ("classes", "surface")},
        result=("zariski", "surface")),
    "triple": Op(
        lambda ring, x, y, z: ring.triple(x, y, z),
        {"ring": ("ref", RINGS), "x": ("class", "ring"), "y": ("class", "ring"), "z": ("class", "ring")}),
    "rr3_chi": Op(lambda ring, cls: threefold.rr3_chi(ring, cls), {"ring": ("ref", RINGS), "cls": ("class", "ring")}),
    "c1c2": Op(lambda ring: threefold.c1c2(ring), {"ring": ("ref", RINGS)}),
    "chi_after_blowup": Op(
        lambda chi, degree, genus: threefold.chi_after_blowup(chi, degree, genus),
        {"chi": ("number",), "degree": ("number",), "genus": ("int",)}),
    "normal_bundle_degree": Op(lambda ring, curve: threefold.normal_bundle_degree(ring, curve), {"ring": ("ref", RINGS), "curve": ("ref", ("curve",))}),
    "restrict_to_surface": Op(
        _restrict,
        {"ring": ("ref", ("ring",)), "cls": ("class", "ring"), "surface": ("ref", SURFACES),
         "images": ("images", "surface"), "pair_with": ("class", "surface")},
        frozenset({"images", "pair_with"}), _restrict_result),
    "exceptional_restriction": Op(
        lambda ring, exceptional, cls: threefold.exceptional_restriction(ring, exceptional, cls),
        {"ring": ("ref", RINGS), "exceptional": ("label",), "cls": ("class", "ring")}, result=("hirzebruch",)),
    "homology_zero_check": Op(lambda ring: threefold.homology_zero_check(ring), {"ring": ("ref", ("ring",))}, result=("bool",)),
    "exceptional_self_intersection_in_divisor": Op(
        _self_int_in_divisor,
        {"ring": ("ref", ("ring_blowup",)), "exceptional": ("label",), "divisor": ("class", "ring")},
        frozenset({"divisor"})),
    "propagate": Op(
        _propagate, {"sequences": ("refs", ("sequence",)), "facts": ("refs", ("facts",))}, result=("mapping",)),
    "moduli_pipeline": Op(
        _pipeline, {"case": ("choice", ("elliptic", "k3")), "n": ("int",), "symbolic": ("bool",)},
        frozenset({"n", "symbolic"}), ("mapping",)),
}
