"""Validation reports and three-valued verdicts shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple


class Violation(NamedTuple):
    kind: str
    message: str
    witness: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    """A list of violations; an empty report means the object is valid."""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def of_kind(self, kind: str) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "message": v.message, "witness": [str(w) for w in v.witness]}
                for v in self.violations
            ],
        }


class Status(str, Enum):
    PROVEN = "Proven"
    REFUTED = "Refuted"
    EVIDENCE = "EvidenceUpToHorizon"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a semi-decidable check.

    ``PROVEN`` and ``REFUTED`` always carry a finite witness in ``certificate``;
    ``EVIDENCE`` records what was examined up to ``horizon``.  ``value`` holds
    an optional payload such as the rank decided by a real-rank verdict.
    """

    status: Status
    certificate: dict = field(default_factory=dict)
    horizon: int = 0
    value: Any = None

    @property
    def proven(self) -> bool:
        return self.status is Status.PROVEN

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "certificate": self.certificate, "horizon": self.horizon}
        if self.value is not None:
            out["value"] = self.value
        return out
