"""Verdicts and theorem reports.

A report is built once as a plain structured document; the markdown view is
rendered from that document only, so both always agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from ..scalar import RationalFunction, Scalar, scalar_str

__all__ = [
    "SCHEMA_VERSION",
    "Check",
    "Status",
    "Verdict",
    "render_markdown",
    "report_document",
    "show",
    "show_matrix",
    "to_json",
]

SCHEMA_VERSION = 1


class Status(str, Enum):
    VERIFIED = "VERIFIED"
    DISCREPANT = "DISCREPANT"
    SKIPPED = "SKIPPED"
    # Holds at every sampled instantiation; no identity certificate.
    SAMPLED = "SAMPLED"


def show(x: Scalar) -> str:
    """Display form in lowest terms."""
    if isinstance(x, RationalFunction):
        x = x.cancel()
    return scalar_str(x)


def show_matrix(m: Sequence[Sequence[Scalar]]) -> list[list[str]]:
    return [[show(x) for x in r] for r in m]


@dataclass(frozen=True)
class Check:
    """One condition of a verdict.

    ``sampled`` is the number of instantiations when the condition was only
    checked pointwise; ``None`` means it was decided exactly.
    """

    name: str
    passed: bool
    details: Mapping[str, Any] = field(default_factory=dict)
    sampled: int | None = None

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {"name": self.name, "passed": self.passed}
        doc["method"] = "exact" if self.sampled is None else f"sampled ({self.sampled} points)"
        if self.details:
            doc["details"] = dict(self.details)
        return doc


@dataclass(frozen=True)
class Verdict:
    item: str
    title: str
    status: Status
    checks: tuple[Check, ...] = ()
    references: tuple[Mapping[str, str], ...] = ()
    info: Mapping[str, Any] = field(default_factory=dict)
    note: str = ""

    @classmethod
    def from_checks(
        cls,
        item: str,
        title: str,
        checks: Iterable[Check],
        *,
        references: Iterable[Mapping[str, str]] = (),
        info: Mapping[str, Any] | None = None,
        note: str = "",
    ) -> Verdict:
        cs = tuple(checks)
        if not cs:
            raise ValueError(f"verdict {item!r} has no checks")
        if any(not c.passed for c in cs):
            status = Status.DISCREPANT
        elif any(c.sampled is not None for c in cs):
            status = Status.SAMPLED
        else:
            status = Status.VERIFIED
        return cls(item, title, status, cs, tuple(references), dict(info or {}), note)

    @classmethod
    def skipped(cls, item: str, title: str, note: str, *, references: Iterable[Mapping[str, str]] = ()) -> Verdict:
        return cls(item, title, Status.SKIPPED, (), tuple(references), {}, note)

    @property
    def failed_checks(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {"item": self.item, "title": self.title, "status": self.status.value}
        if self.references:
            doc["references"] = [dict(r) for r in self.references]
        doc["checks"] = [c.to_dict() for c in self.checks]
        if self.info:
            doc["info"] = dict(self.info)
        if self.note:
            doc["note"] = self.note
        return doc


def report_document(
    subject: str, verdicts: Iterable[Verdict], *, config: Mapping[str, Any], allowlist: Iterable[str] = ()
) -> dict:
    """Structured report; items sorted by id, with the allowlist outcome."""
    items = sorted(verdicts, key=lambda v: v.item)
    allowed = set(allowlist)
    counts = {s.value: 0 for s in Status}
    for v in items:
        counts[v.status.value] += 1
    unexpected = [v.item for v in items if v.status is Status.DISCREPANT and v.item not in allowed]
    known = [v.item for v in items if v.status is Status.DISCREPANT and v.item in allowed]
    return {
        "schema_version": SCHEMA_VERSION,
        "subject": subject,
        "config": dict(config),
        "summary": {"counts": counts, "known_discrepancies": known, "unexpected_discrepancies": unexpected},
        "items": [v.to_dict() for v in items],
    }


def to_json(doc: Mapping) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def _md_value(v: Any) -> str:
    if isinstance(v, list) and v and all(isinstance(r, list) for r in v):
        return "\n\n" + "\n".join("    " + "  ".join(f"{x:>10}" for x in r) for r in v) + "\n"
    if isinstance(v, (list, dict)):
        return "`" + json.dumps(v, ensure_ascii=False) + "`"
    return f"`{v}`"


def render_markdown(doc: Mapping) -> str:
    """Markdown view of a ``report_document`` result."""
    out = [f"# {doc['subject']}", ""]
    cfg = ", ".join(f"{k}={v}" for k, v in doc["config"].items())
    out += [f"schema {doc['schema_version']}; {cfg}", ""]
    counts = doc["summary"]["counts"]
    out += ["| status | count |", "|---|---|"] + [f"| {k} | {v} |" for k, v in counts.items()] + [""]
    for key, label in (("known_discrepancies", "Known discrepancies"), ("unexpected_discrepancies", "Unexpected discrepancies")):
        if doc["summary"][key]:
            out += [f"{label}: " + ", ".join(doc["summary"][key]), ""]
    for item in doc["items"]:
        out += [f"## {item['item']}: {item['status']}", "", item["title"], ""]
        for r in item.get("references", []):
            out.append(f"- anchor `{r['anchor']}` ({r['provenance']})")
        if item.get("references"):
            out.append("")
        for c in item["checks"]:
            mark = "ok" if c["passed"] else "FAIL"
            out.append(f"- [{mark}] {c['name']} ({c['method']})")
            for k, v in c.get("details", {}).items():
                out.append(f"  - {k}: {_md_value(v)}")
        for k, v in item.get("info", {}).items():
            out.append(f"- {k}: {_md_value(v)}")
        if item.get("note"):
            out += ["", f"Note: {item['note']}"]
        out.append("")
    return "\n".join(out).rstrip() + "\n"
