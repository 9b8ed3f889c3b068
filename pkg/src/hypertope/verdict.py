from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class Verdict:
    """Three-valued check outcome.  ``skipped`` is never a pass."""

    status: str
    witness: Any = None
    note: str | None = None
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    @classmethod
    def ok(cls, note=None) -> "Verdict":
        return cls(PASS, note=note)

    @classmethod
    def fail(cls, witness=None, note=None) -> "Verdict":
        return cls(FAIL, witness, note)

    @classmethod
    def skip(cls, note) -> "Verdict":
        return cls(SKIPPED, note=note)

    def to_json(self) -> dict:
        doc = {"verdict": self.status}
        if self.witness is not None:
            doc["witness"] = self.witness
        if self.note:
            doc["note"] = self.note
        return doc
