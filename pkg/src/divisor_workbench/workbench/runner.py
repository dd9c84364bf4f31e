"""Execute resolved checks and compare against their expectations."""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any

from ..lattice import ClassVector, Lattice, classes_equivalent
from ..cohomledger import LinExpr
from ..surface import ZariskiDecomposition
from ..threefold import HirzebruchClass
from .ops import OPS
from .report import CheckResult, Report
from .scenario import Check, Scenario
from .values import encode_class, encode_number


def _same_class(a: ClassVector, b: ClassVector) -> bool:
    if a.space != b.space:
        return False
    if a == b:
        return True
    return isinstance(a.space, Lattice) and classes_equivalent(a, b)


def _encode(tag: str, v: Any) -> Any:
    if tag in ("number",):
        return encode_number(v)
    if tag == "bool":
        return v
    if tag == "numbers":
        return [encode_number(x) for x in v]
    if tag == "matrix":
        return [[encode_number(x) for x in row] for row in v]
    if tag == "solution":
        return v if isinstance(v, str) else [encode_number(x) for x in v]
    if tag == "class":
        return encode_class(v)
    if tag == "zariski":
        pos, neg = v if isinstance(v, tuple) else (v.positive, v.negative)
        return {"positive": encode_class(pos), "negative": encode_class(neg)}
    if tag == "hirzebruch":
        if isinstance(v, HirzebruchClass):
            return {"e": v.e, "A": encode_number(v.A), "fib": encode_number(v.fib)}
        return v if isinstance(v, str) else {k: encode_number(x) for k, x in sorted(v.items())}
    if tag == "mapping":
        return {k: str(x) for k, x in sorted(v.items())}
    raise AssertionError(tag)


def _matches(tag: str, got: Any, want: Any) -> bool:
    if tag == "number":
        return isinstance(got, (int, Fraction)) and got == want
    if tag == "bool":
        return got is want
    if tag in ("numbers", "matrix", "solution"):
        if isinstance(got, str) or isinstance(want, str):
            return got == want
        if tag == "matrix":
            return [list(r) for r in got] == want
        return list(got) == want
    if tag == "class":
        return _same_class(got, want)
    if tag == "zariski":
        assert isinstance(got, ZariskiDecomposition)
        return got.positive == want[0] and got.negative == want[1]
    if tag == "hirzebruch":
        if want == "anticanonical":
            return got == HirzebruchClass.anticanonical(got.e)
        return (got.A, got.fib) == (want["A"], want["fib"]) and want.get("e", got.e) == got.e
    if tag == "mapping":
        return all(k in got and LinExpr.parse(got[k]) == v for k, v in want.items())
    raise AssertionError(tag)


def run_check(check: Check) -> CheckResult:
    """Evaluate one check. Exceptions become ``error`` results, never propagate."""
    tag = check.result[0]
    expected = _encode(tag, check.expected.value)
    try:
        got = OPS[check.op].fn(**check.args)
    except Exception as exc:  # noqa: BLE001 - every failure is reported
        return CheckResult(check.id, check.op, "error", None, expected, f"{type(exc).__name__}: {exc}")
    try:
        computed = _encode(tag, got)
        ok = _matches(tag, got, check.expected.value)
    except Exception as exc:  # noqa: BLE001
        return CheckResult(check.id, check.op, "error", None, expected,
                           f"result of unexpected shape ({type(exc).__name__}: {exc})")
    return CheckResult(check.id, check.op, "pass" if ok else "fail", computed, expected)


def run_suite(scenario: Scenario, title: str = "", workers: int = 1) -> Report:
    """Run every check of ``scenario``; results keep declaration order.

    With ``workers > 1`` the checks are evaluated on a thread pool. Ops are
    pure, so the report is identical either way.
    """
    checks: Sequence[Check] = scenario.checks
    if workers > 1 and len(checks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_check, checks))
    else:
        results = [run_check(c) for c in checks]
    return Report(title or scenario.description, tuple(results))
