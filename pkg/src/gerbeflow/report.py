"""Check records and deterministic report plumbing shared by the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

ENGINE_VERSION = "0.1.0"

# keys stripped before golden comparison (timing and other volatile data)
VOLATILE_KEYS = ("wall_time_s",)


@dataclass
class Check:
    name: str
    status: str  # "pass" | "fail" | "inconclusive"
    value: str = ""
    expected: str = ""
    tolerance: str = "exact"
    provenance: str = ""

    @classmethod
    def make(cls, name, ok, value="", expected="", tolerance="exact", provenance="",
             inconclusive=False):
        status = "inconclusive" if inconclusive else ("pass" if ok else "fail")
        return cls(name, status, str(value), str(expected), str(tolerance), provenance)

    def to_dict(self):
        return {
            "name": self.name,
            "status": self.status,
            "value": self.value,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "provenance": self.provenance,
        }


@dataclass
class Report:
    command: str
    params: dict
    checks: List[Check] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    wall_time_s: Optional[float] = None

    def add(self, check: Check):
        self.checks.append(check)

    def extend(self, checks):
        self.checks.extend(checks)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks if c.status == "fail")

    def to_dict(self):
        body = {
            "command": self.command,
            "params": self.params,
            "engine_version": ENGINE_VERSION,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.extra:
            body["extra"] = self.extra
        if self.wall_time_s is not None:
            body["wall_time_s"] = self.wall_time_s
        return body

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    def table(self) -> str:
        lines = [f"# {self.command}"]
        for c in self.checks:
            mark = {"pass": "ok  ", "fail": "FAIL", "inconclusive": "inc "}[c.status]
            detail = f" value={c.value}" if c.value else ""
            exp = f" expected={c.expected}" if c.expected else ""
            lines.append(f"[{mark}] {c.name}{detail}{exp} (tol={c.tolerance})")
        lines.append(f"{len(self.checks)} checks, {self.failed} failed")
        return "\n".join(lines)


def strip_volatile(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k not in VOLATILE_KEYS}


def reports_equal(doc_a: dict, doc_b: dict) -> bool:
    return json.dumps(strip_volatile(doc_a), sort_keys=True) == json.dumps(
        strip_volatile(doc_b), sort_keys=True
    )
