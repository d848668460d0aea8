"""Verification report entries and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__

SCHEMA = 1

MATCH = "match"
MISMATCH = "mismatch"
DEGENERATE = "degenerate"
INAPPLICABLE = "inapplicable"

ENUMERATION = "exhaustive-enumeration"
SAMPLED = "sampled-enumeration"
CYCLOTOMIC = "exact-cyclotomic-identity"
NUMERIC = "numerical-embedding"


def verdict(ok: bool) -> str:
    return MATCH if ok else MISMATCH


@dataclass
class Entry:
    """One claim checked at one parameter tuple.

    ``measured`` always comes from the oracle named in ``oracle``;
    ``predicted`` from the closed form under test.
    """

    claim: str
    params: dict[str, Any]
    predicted: Any
    measured: Any
    verdict: str
    oracle: str
    residual: Any = None
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == MATCH

    def to_dict(self) -> dict[str, Any]:
        out = {
            "claim": self.claim,
            "params": self.params,
            "predicted": self.predicted,
            "measured": self.measured,
            "verdict": self.verdict,
            "oracle": self.oracle,
        }
        if self.residual is not None:
            out["residual"] = self.residual
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    entries: list[Entry] = field(default_factory=list)
    grid: dict[str, Any] = field(default_factory=dict)

    def add(self, entry: Entry) -> Entry:
        self.entries.append(entry)
        return entry

    def extend(self, entries) -> None:
        self.entries.extend(entries)

    def to_dict(self) -> dict[str, Any]:
        counts: dict[str, int] = {}
        for e in self.entries:
            counts[e.verdict] = counts.get(e.verdict, 0) + 1
        return {
            "schema": SCHEMA,
            "tool": "ccc-forge",
            "version": __version__,
            "grid": self.grid,
            "summary": counts,
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
