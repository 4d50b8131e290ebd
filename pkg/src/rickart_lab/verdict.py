"""Boolean verdicts that carry a re-checkable witness or counterexample."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class PropertyVerdict:
    """A decided property: exactly one of witness/counterexample is present.

    Witnesses and counterexamples are plain JSON-able dicts with a "kind" tag,
    so reports stay deterministic and every claim can be re-verified from its
    serialized form.
    """

    value: bool
    witness: dict[str, Any] | None = None
    counterexample: dict[str, Any] | None = None

    def __post_init__(self):
        if self.value and (self.witness is None or self.counterexample is not None):
            raise ValueError("true verdict must carry exactly a witness")
        if not self.value and (self.counterexample is None or self.witness is not None):
            raise ValueError("false verdict must carry exactly a counterexample")

    def __bool__(self) -> bool:
        return self.value

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"value": self.value}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def ok(witness: dict[str, Any]) -> PropertyVerdict:
    return PropertyVerdict(True, witness=witness)


def fail(counterexample: dict[str, Any]) -> PropertyVerdict:
    return PropertyVerdict(False, counterexample=counterexample)


def subgroup_json(s) -> list[list[int]]:
    """Subgroups serialize as lists of generator coordinate vectors."""
    return [list(g) for g in s.generators()]


def hom_json(h) -> dict[str, Any]:
    return {
        "source": h.source.spec_string(),
        "target": h.target.spec_string(),
        "matrix": [list(row) for row in h.matrix],
    }
