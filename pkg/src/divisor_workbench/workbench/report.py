"""Check results and their JSON / plain-text renderings."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

STATUSES = ("pass", "fail", "error")
FORMAT_ID = "divisor-workbench-report/1"


@dataclass(frozen=True)
class CheckResult:
    id: str
    op: str
    status: str
    computed: Any = None
    expected: Any = None
    message: str = ""

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def to_json(self) -> dict[str, Any]:
        return {"id": self.id, "op": self.op, "status": self.status,
                "computed": self.computed, "expected": self.expected, "message": self.message}


@dataclass(frozen=True)
class Report:
    """Results in declaration order plus a summary.

    ``computed`` and ``expected`` hold plain JSON values, so a report
    survives a serialize/parse round trip unchanged.
    """

    title: str = ""
    results: tuple[CheckResult, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "results", tuple(self.results))

    @property
    def counts(self) -> dict[str, int]:
        c = Counter(r.status for r in self.results)
        return {s: c.get(s, 0) for s in STATUSES}

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def ok(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status != "pass"]

    def to_json(self) -> dict[str, Any]:
        return {
            "format": FORMAT_ID,
            "title": self.title,
            "summary": {"total": self.total, **self.counts},
            "results": [r.to_json() for r in self.results],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def loads(cls, text: str) -> Report:
        doc = json.loads(text)
        if doc.get("format") != FORMAT_ID:
            raise ValueError(f"not a {FORMAT_ID} document")
        results = tuple(CheckResult(r["id"], r["op"], r["status"], r.get("computed"), r.get("expected"),
                                    r.get("message", "")) for r in doc["results"])
        report = cls(doc.get("title", ""), results)
        if doc.get("summary") != {"total": report.total, **report.counts}:
            raise ValueError("summary does not match the listed results")
        return report

    def to_text(self) -> str:
        lines = [self.title] if self.title else []
        width = max((len(r.id) for r in self.results), default=0)
        for r in self.results:
            line = f"{r.status.upper():5} {r.id:<{width}}  {r.op}"
            if r.status != "pass":
                detail = r.message or f"computed {_compact(r.computed)}, expected {_compact(r.expected)}"
                line += f"  -- {detail}"
            lines.append(line.rstrip())
        c = self.counts
        lines.append(f"{self.total} checks: {c['pass']} passed, {c['fail']} failed, {c['error']} errors")
        return "\n".join(lines) + "\n"


def _compact(v: Any) -> str:
    return json.dumps(v, sort_keys=True, ensure_ascii=False)
