"""Check records and the versioned JSON/CSV report."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from typing import Any

from . import __version__

SCHEMA = 1


@dataclass
class Check:
    name: str
    passed: bool
    data: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "status": "pass" if self.passed else "fail", **self.data}


@dataclass
class Finding:
    """Unexpected but not failing, e.g. an extra orbit at a small prime."""

    name: str
    data: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, **self.data}


@dataclass
class Report:
    config: dict[str, Any]
    checks: list[Check] = field(default_factory=list)
    findings: list[Finding] = field(default_factory=list)
    runtime: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, **data) -> Check:
        chk = Check(name, bool(passed), data)
        self.checks.append(chk)
        return chk

    def note(self, name: str, **data) -> None:
        self.findings.append(Finding(name, data))

    @property
    def failed(self) -> int:
        return sum(not c.passed for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self, timestamp: bool = True) -> dict:
        d = {
            "schema": SCHEMA,
            "tool": "rangesum",
            "version": __version__,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "findings": [f.to_dict() for f in self.findings],
            "summary": {
                "passed": len(self.checks) - self.failed,
                "failed": self.failed,
                "findings": len(self.findings),
            },
        }
        # wall-clock and worker-count fields are the only run-dependent content
        if timestamp:
            d["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
            d["runtime"] = self.runtime
        return d

    def to_json(self, timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(timestamp), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        """Long format: one ``section,name,field,value`` row per scalar leaf."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["section", "name", "field", "value"])
        for section, items in (("check", self.checks), ("finding", self.findings)):
            for item in items:
                d = item.to_dict()
                name = d.pop("name")
                for key, value in flatten(d):
                    w.writerow([section, name, key, value])
        return buf.getvalue()


def flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out += flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, (list, tuple)):
        out = []
        for i, v in enumerate(obj):
            out += flatten(v, f"{prefix}[{i}]")
        return out
    return [(prefix, obj)]
