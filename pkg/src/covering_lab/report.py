"""Verification records shared by the lemma checks and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .rigorous import RigorousReal

PASS = "pass"
FAIL = "fail"
TOO_WIDE = "enclosure-too-wide"
SKIPPED = "skipped"


def jsonable(value: Any) -> Any:
    """Exact rationals become ``"p/q"`` strings, intervals become endpoint dicts."""
    if isinstance(value, RigorousReal):
        return value.to_json()
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return value if abs(value) < 2**53 else str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, LemmaReport):
        return value.to_json()
    return value


def compare(value: RigorousReal, relation: str, bound) -> str:
    """Three-way verdict for ``value <relation> bound`` over the whole enclosure.

    ``fail`` means the claim is false for every point of the enclosure,
    ``enclosure-too-wide`` means the enclosure straddles the bound.
    """
    if relation == "<":
        ok, bad = value.definitely_lt(bound), value.definitely_ge(bound)
    elif relation == "<=":
        ok, bad = value.definitely_le(bound), value.definitely_gt(bound)
    elif relation == ">":
        ok, bad = value.definitely_gt(bound), value.definitely_le(bound)
    elif relation == ">=":
        ok, bad = value.definitely_ge(bound), value.definitely_lt(bound)
    else:
        raise ValueError(f"unknown relation {relation!r}")
    if ok:
        return PASS
    return FAIL if bad else TOO_WIDE


@dataclass
class LemmaReport:
    name: str
    claim: str
    verdict: str = PASS
    inputs: dict = field(default_factory=dict)
    enclosures: dict = field(default_factory=dict)
    checks: list["LemmaReport"] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict in (PASS, SKIPPED)

    def add(self, sub: "LemmaReport") -> "LemmaReport":
        self.checks.append(sub)
        if not sub.passed:
            # a straddling enclosure is weaker than a definite failure
            if self.verdict != FAIL:
                self.verdict = FAIL if sub.verdict == FAIL else TOO_WIDE
        return sub

    def bound(self, name: str, value: RigorousReal, relation: str, bound, claim: str | None = None,
              **inputs) -> "LemmaReport":
        """Record ``value <relation> bound`` as a sub-check."""
        sub = LemmaReport(
            name=name,
            claim=claim or f"{name} {relation} {bound}",
            verdict=compare(value, relation, bound),
            inputs=dict(inputs),
            enclosures={"value": value},
        )
        return self.add(sub)

    def fact(self, name: str, holds: bool, claim: str, **data) -> "LemmaReport":
        """Record an exactly-decided sub-check."""
        sub = LemmaReport(name=name, claim=claim, verdict=PASS if holds else FAIL,
                          enclosures=dict(data))
        return self.add(sub)

    def skip(self, name: str, reason: str) -> "LemmaReport":
        return self.add(LemmaReport(name=name, claim=reason, verdict=SKIPPED))

    def failures(self) -> list["LemmaReport"]:
        out = []
        for c in self.checks:
            if not c.passed:
                out.append(c)
            out.extend(c.failures())
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "verdict": self.verdict,
            "inputs": jsonable(self.inputs),
            "enclosures": jsonable(self.enclosures),
            "checks": [c.to_json() for c in self.checks],
            "notes": list(self.notes),
        }

    def summary_lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        lines = [f"{pad}[{self.verdict}] {self.name}: {self.claim}"]
        for c in self.checks:
            lines.extend(c.summary_lines(indent + 1))
        return lines
