"""Verification reports: named checks grouped into claims and suites, with a
deterministic text and JSON rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


PASS, FAIL, INCOMPLETE = "pass", "fail", "incomplete"


@dataclass
class Claim:
    id: str
    topic: str
    status: str
    payload: dict = field(default_factory=dict)

    def to_dict(self):
        return {"id": self.id, "topic": self.topic, "status": self.status,
                "payload": self.payload}


@dataclass
class Report:
    suite: str
    claims: list = field(default_factory=list)

    def add(self, cid, topic, ok, payload=None, complete=True):
        status = (PASS if ok else FAIL) if complete else INCOMPLETE
        self.claims.append(Claim(cid, topic, status, payload or {}))

    def add_checks(self, prefix, topic, checks, payload=None):
        """One claim per check, named prefix/check-name."""
        for c in checks:
            p = dict(payload or {})
            if c.detail and not c.ok:
                p["detail"] = c.detail
            self.add(f"{prefix}/{c.name}", topic, c.ok, p)

    @property
    def ok(self) -> bool:
        return all(c.status == PASS for c in self.claims)

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, INCOMPLETE: 0}
        for c in self.claims:
            out[c.status] += 1
        return out

    def to_dict(self):
        return {"suite": self.suite, "ok": self.ok, "counts": self.counts(),
                "claims": [c.to_dict() for c in self.claims]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1, default=str)

    def to_text(self, verbose=False) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.ok else 'FAIL'} "
                 + " ".join(f"{k}={v}" for k, v in self.counts().items())]
        for c in self.claims:
            if verbose or c.status != PASS:
                extra = f"  {json.dumps(c.payload, sort_keys=True, default=str)}" if c.payload else ""
                lines.append(f"  [{c.status}] {c.id} ({c.topic}){extra}")
        return "\n".join(lines)


def merge(suite: str, reports) -> Report:
    out = Report(suite)
    for r in reports:
        out.claims.extend(r.claims)
    return out
