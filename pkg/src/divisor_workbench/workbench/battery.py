"""The built-in verification battery, generated as an ordinary scenario.

For each ``n`` it covers the surface ``S(n)``, the twistor ring ``Z(n)``,
both normal-bundle branches of the blowup along ``C0`` and its conjugate,
and the moduli ledger. The K3 configuration is checked once.
"""

from __future__ import annotations

import json
from typing import Any

from ..threefold import splittings_C0
from .report import Report
from .runner import run_suite
from .scenario import SCHEMA_ID, parse_scenario

N_MIN, N_MAX = 5, 12


def _chk(checks: list, cid: str, op: str, args: dict, expect: Any) -> None:
    checks.append({"id": cid, "op": op, "args": args, "expect": expect})


def _elliptic_block(n: int, objects: list, checks: list) -> None:
    s, z = f"S{n}", f"Z{n}"
    objects += [
        {"id": s, "kind": "surface", "builder": f"S_elliptic:{n}"},
        {"id": z, "kind": "ring", "n": n},
        {"id": f"C0_{n}", "kind": "curve", "genus": 0,
         "intersections": {"F": 4 - n, **{f"a{i}": 1 for i in range(5, n + 1)}}},
        {"id": f"C0bar_{n}", "kind": "curve", "genus": 0,
         "intersections": {"F": 4 - n, "E0": 0, **{f"a{i}": -1 for i in range(5, n + 1)}}},
    ]
    c = lambda name, *a, **kw: _chk(checks, f"{name}@n={n}", *a, **kw)  # noqa: E731
    chain = [f"C{i}" for i in range(5)]
    chain_bar = [f"Cbar{i}" for i in range(5)]
    fixed_part = {"C0": 2, "C1..4": 1}

    c("K_squared", "pair", {"on": s, "a": "K", "b": "K"}, 8 - 2 * n)
    c("lattice_valid", "validate_lattice", {"on": s}, True)
    c("fiber_chain_negative_definite", "is_negative_definite", {"on": s, "classes": chain}, True)
    c("fiber_chain_bar_negative_definite", "is_negative_definite", {"on": s, "classes": chain_bar}, True)
    c("fiber_chain_zariski", "zariski_decompose",
      {"surface": s, "cls": fixed_part, "components": chain},
      {"positive": {}, "negative": fixed_part})
    for m in (2, 3):
        residual = {"Kinv": 2 * m - 1, "C0": -1, "C1..4": -1, "Cbar0": -1, "Cbar1..4": -1}
        c(f"fixed_component_pairing_m={m}", "pair", {"on": s, "a": residual, "b": "C0"},
          2 * ((1 - m) * n + (4 * m - 5)))
    c("Kinv.C0", "pair", {"on": s, "a": "Kinv", "b": "C0"}, 4 - n)
    for i in range(1, 5):
        c(f"Kinv.C{i}", "pair", {"on": s, "a": "Kinv", "b": f"C{i}"}, 0)
    c("Kinv_from_exceptionals", "classes_equivalent",
      {"on": s, "a": "Kinv", "b": {"f": 1, "C5..n": -1, "Cbar5..n": -1}}, True)
    c("fiber_from_chain", "classes_equivalent", {"on": s, "a": "f", "b": {"C0": 2, "C1..4": 1, "C5..n": 2}}, True)
    c("fiber_from_chain_bar", "classes_equivalent", {"on": s, "a": "f", "b": {"Cbar0": 2, "Cbar1..4": 1, "Cbar5..n": 2}}, True)
    c("2Kinv_from_fibers", "classes_equivalent",
      {"on": s, "a": {"Kinv": 2}, "b": {"f": 1, "fbar": 1, "C5..n": -2, "Cbar5..n": -2}}, True)
    c("C1..4_from_Kinv", "classes_equivalent",
      {"on": s, "a": {"Kinv": 1, "C5..n": -1, "Cbar5..n": 1, "C0": -2}, "b": "C1..4"}, True)
    c("conjugation_swaps_C0", "conjugate", {"on": s, "a": "C0"}, "Cbar0")
    c("rr_chi_Kinv", "rr_chi", {"surface": s, "cls": "Kinv"}, 9 - 2 * n)
    c("theta_chi", "theta_chi", {"surface": s}, 6 - 4 * n)
    c("C0_rational", "adjunction_genus", {"surface": s, "cls": "C0"}, 0)

    c("F_cubed", "triple", {"ring": z, "x": "F", "y": "F", "z": "F"}, 8 - 2 * n)
    c("c1c2_Z", "c1c2", {"ring": z}, 24)
    c("rr3_chi_minus_alpha", "rr3_chi", {"ring": z, "cls": {"a5..n": -1}}, 5 - n)
    c("rr3_chi_F", "rr3_chi", {"ring": z, "cls": "F"}, 10 - 2 * n)
    c("chi_after_blowup", "chi_after_blowup", {"chi": 5 - n, "degree": 4 - n, "genus": 0}, 0)
    c("normal_bundle_degree_C0", "normal_bundle_degree", {"ring": z, "curve": f"C0_{n}"}, 6 - 2 * n)
    c("homology_zero_check", "homology_zero_check", {"ring": z}, True)
    c("restrict_X", "restrict_to_surface", {"ring": z, "cls": "X", "surface": s}, fixed_part)
    c("restrict_X.Cbar0", "restrict_to_surface",
      {"ring": z, "cls": "X", "surface": s, "pair_with": "Cbar0"}, 0)
    c("restrict_a5.C0", "restrict_to_surface",
      {"ring": z, "cls": "a5", "surface": s, "pair_with": "C0"}, 1)

    for branch, (a, b) in splittings_C0(n).items():
        z1, z2 = f"Z{n}_{branch}_E0", f"Z{n}_{branch}_E0E0bar"
        objects += [
            {"id": z1, "kind": "ring_blowup", "ring": z, "curve": f"C0_{n}", "splitting": [a, b], "label": "E0"},
            {"id": z2, "kind": "ring_blowup", "ring": z1, "curve": f"C0bar_{n}", "splitting": [a, b],
             "label": "E0bar"},
        ]
        e = b - a
        b_ = lambda name, *args: c(f"{name}[{branch}]", *args)  # noqa: E731
        b_("c1c2_Z1", "c1c2", {"ring": z1}, 24)
        b_("c1c2_Z2", "c1c2", {"ring": z2}, 24)
        b_("rr3_chi_minus_alpha_minus_E0", "rr3_chi", {"ring": z1, "cls": {"a5..n": -1, "E0": -1}}, 0)
        b_("E0_cubed", "triple", {"ring": z1, "x": "E0", "y": "E0", "z": "E0"}, 2 * (n - 3))
        b_("E0^2.F", "triple", {"ring": z1, "x": "E0", "y": "E0", "z": "F"}, n - 4)
        b_("E0^2.alpha", "triple", {"ring": z1, "x": "E0", "y": "E0", "z": "a5..n"}, -(n - 4))
        b_("E0_in_X1_squared", "exceptional_self_intersection_in_divisor",
           {"ring": z1, "exceptional": "E0"}, 2 * (2 - n))
        b_("E0_in_X2_squared", "exceptional_self_intersection_in_divisor",
           {"ring": z2, "exceptional": "E0",
            "divisor": {"X": 1, "E0": -2, "E0bar": -2}}, 2 * (2 - n))
        if e == 0:
            expect_2F = {"e": 0, "A": 1, "fib": 5 - n}
            expect_F = {"e": 0, "A": 1, "fib": 1}
        else:
            expect_2F = {"e": e, "A": 1, "fib": -(n - 6)}
            expect_F = {"e": e, "A": 1, "fib": 2}
        b_("restrict_2F-E0-E0bar", "exceptional_restriction",
           {"ring": z2, "exceptional": "E0", "cls": {"F": 2, "E0": -1, "E0bar": -1}}, expect_2F)
        b_("restrict_F-E0-E0bar", "exceptional_restriction",
           {"ring": z2, "exceptional": "E0", "cls": {"F": 1, "E0": -1, "E0bar": -1}}, expect_F)
        b_("L1_anticanonical", "exceptional_restriction",
           {"ring": z2, "exceptional": "E0", "cls": {"F": 2, "E0": -2, "E0bar": -2}}, "anticanonical")
        b_("adjunction_on_E0", "exceptional_restriction",
           {"ring": z1, "exceptional": "E0", "cls": {"c1": 1, "E0": -1}}, "anticanonical")

    c("moduli_pipeline", "moduli_pipeline", {"case": "elliptic", "n": n},
      {"h1(Theta_Z)": 7 * n - 14, "h1(K_S^-1)": 2 * n - 9, "h1(Theta_Z,S)": 5 * n - 5,
       "h1(Theta_S)": 4 * n - 5, "h1(Theta_Z(-S))": n, "total": 3 * n - 7})


def _k3_block(objects: list, checks: list) -> None:
    objects += [
        {"id": "SK3", "kind": "surface", "builder": "S_K3"},
        {"id": "Z5_K3", "kind": "ring", "n": 5},
    ]
    c = lambda name, *a, **kw: _chk(checks, f"{name}@K3", *a, **kw)  # noqa: E731
    chain = ["M1", "L2", "M2", "L1"]
    c("K_squared", "pair", {"on": "SK3", "a": "K", "b": "K"}, -2)
    c("lattice_valid", "validate_lattice", {"on": "SK3"}, True)
    c("chain_self_intersections", "self_intersections", {"on": "SK3", "classes": chain}, [-3, -2, -2, -3])
    c("chain_negative_definite", "is_negative_definite", {"on": "SK3", "classes": chain}, True)
    c("chain_bar_negative_definite", "is_negative_definite",
      {"on": "SK3", "classes": [f"{x}bar" for x in chain]}, True)
    c("chain2", "classes_equivalent", {"on": "SK3", "a": "C", "b": {"Kinv": 1, "C5": -1, "Cbar5": 1}}, True)
    c("chain2_bar", "classes_equivalent", {"on": "SK3", "a": "Cbar", "b": {"Kinv": 1, "C5": 1, "Cbar5": -1}}, True)
    c("2Kinv=C+Cbar", "classes_equivalent", {"on": "SK3", "a": {"Kinv": 2}, "b": {"C": 1, "Cbar": 1}}, True)
    c("C.Cbar", "pair", {"on": "SK3", "a": "C", "b": "Cbar"}, 0)
    c("rr_chi_Kinv", "rr_chi", {"surface": "SK3", "cls": "Kinv"}, -1)
    c("theta_chi", "theta_chi", {"surface": "SK3"}, -14)
    c("restrict_X", "restrict_to_surface", {"ring": "Z5_K3", "cls": "X", "surface": "SK3"}, "C")
    c("moduli_pipeline", "moduli_pipeline", {"case": "k3"},
      {"h1(Theta_Z)": 20, "h1(K_S^-1)": 1, "h1(Theta_Z,S)": 19, "h1(Theta_S)": 14,
       "h1(Theta_Z(-S))": 5, "total": 5})


def _ledger_block(objects: list, checks: list) -> None:
    objects += [
        {"id": "restrict_to_S", "kind": "sequence", "sequence_kind": "vector-spaces",
         "terms": ["H1(Theta_Z,S)", "H1(Theta_Z)", "H1(K_S^-1)"]},
        {"id": "twist_by_S", "kind": "sequence", "sequence_kind": "vector-spaces",
         "terms": ["H1(Theta_Z(-S))", "H1(Theta_Z,S)", "H1(Theta_S)"]},
        {"id": "facts_restrict", "kind": "facts", "values": {"H1(Theta_Z)": "7n-14", "H1(K_S^-1)": "2n-9"}},
        {"id": "facts_twist", "kind": "facts", "values": {"H1(Theta_Z,S)": "5n-5", "H1(Theta_S)": "4n-5"}},
    ]
    _chk(checks, "restrict_to_S_symbolic", "propagate", {"sequences": ["restrict_to_S"], "facts": ["facts_restrict"]},
         {"H1(Theta_Z,S)": "5n-5"})
    _chk(checks, "twist_by_S_symbolic", "propagate", {"sequences": ["twist_by_S"], "facts": ["facts_twist"]},
         {"H1(Theta_Z(-S))": "n"})
    _chk(checks, "moduli_pipeline_symbolic", "moduli_pipeline", {"case": "elliptic", "symbolic": True},
         {"h1(Theta_Z)": "7n-14", "h1(Theta_Z,S)": "5n-5", "h1(Theta_Z(-S))": "n", "total": "3n-7"})


def paper_scenario(n_min: int = N_MIN, n_max: int = N_MAX) -> dict[str, Any]:
    """The built-in battery for ``n_min <= n <= n_max`` as a scenario document."""
    if n_min < 5:
        raise ValueError(f"the elliptic family needs n >= 5, got n_min={n_min}")
    if n_max < n_min:
        raise ValueError(f"empty range {n_min}..{n_max}")
    objects: list[dict] = []
    checks: list[dict] = []
    for n in range(n_min, n_max + 1):
        _elliptic_block(n, objects, checks)
    _k3_block(objects, checks)
    _ledger_block(objects, checks)
    return {
        "schema": SCHEMA_ID,
        "description": f"built-in suite, n = {n_min}..{n_max} plus K3",
        "objects": objects,
        "checks": checks,
    }


def paper_scenario_text(n_min: int = N_MIN, n_max: int = N_MAX) -> str:
    return json.dumps(paper_scenario(n_min, n_max), indent=1, ensure_ascii=False) + "\n"


def paper_suite(n_min: int = N_MIN, n_max: int = N_MAX, workers: int = 1) -> Report:
    """Generate, parse and run the built-in battery."""
    return run_suite(parse_scenario(paper_scenario_text(n_min, n_max)), workers=workers)
