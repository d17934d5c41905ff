from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..groups import Group, PointSet
from ..predicates import Predicate, VerificationReport, verify


class ConstructionError(ValueError):
    """Parameters outside the range where a construction is defined."""


class HypothesisError(ConstructionError):
    """An input set does not satisfy a transfer hypothesis."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis failed: {hypothesis}" + (f" ({detail})" if detail else ""))


@dataclass
class ConstructionRecord:
    """A constructed point set together with what it is supposed to satisfy."""

    name: str
    params: dict[str, Any]
    space: Group
    points: PointSet
    claims: tuple[Predicate, ...] = ()
    predicted_size: int | None = None
    seed: int | None = None
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.points)

    def verify(self, threads: int | None = None) -> list[VerificationReport]:
        return [verify(self.space, self.points, pred, threads) for pred in self.claims]

    def holds(self, threads: int | None = None) -> bool:
        size_ok = self.predicted_size is None or self.predicted_size == self.size
        return size_ok and all(r.holds for r in self.verify(threads))

    def provenance(self) -> dict[str, Any]:
        return {"name": self.name, "params": dict(self.params), "seed": self.seed}
