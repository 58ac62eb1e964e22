"""Report records shared by the relation checkers, protocol checks and CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class RelationReport:
    """Outcome of checking a presentation (braid, TL, Brauer...) on matrices."""

    relation_id: str
    max_deviation: float
    tolerance: float
    passed: bool
    details: tuple[tuple[str, float], ...] = ()

    @classmethod
    def from_details(cls, relation_id: str, details, tolerance: float) -> "RelationReport":
        details = tuple((name, float(dev)) for name, dev in details)
        worst = max((dev for _, dev in details), default=0.0)
        return cls(relation_id, worst, tolerance, worst <= tolerance, details)

    def failed_relations(self) -> list[str]:
        return [name for name, dev in self.details if dev > self.tolerance]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one named protocol identity.

    ``diagram_confirmed`` is True when the same identity was re-derived by
    diagram reduction and agreed with the matrix side.
    """

    check_id: str
    lhs_descr: str
    rhs_descr: str
    max_deviation: float
    tolerance: float
    passed: bool
    diagram_confirmed: bool = False
    seed: int | None = None
    d: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        check_id: str,
        lhs_descr: str,
        rhs_descr: str,
        deviations,
        tolerance: float,
        *,
        diagram_deviation: float | None = None,
        seed: int | None = None,
        d: int | None = None,
        details: dict[str, Any] | None = None,
    ) -> "VerificationReport":
        devs = [float(x) for x in deviations]
        worst = max(devs, default=0.0)
        details = dict(details or {})
        confirmed = False
        if diagram_deviation is not None:
            details["diagram_deviation"] = float(diagram_deviation)
            confirmed = bool(diagram_deviation <= tolerance)
        return cls(
            check_id,
            lhs_descr,
            rhs_descr,
            worst,
            tolerance,
            bool(worst <= tolerance),
            confirmed,
            seed,
            d,
            details,
        )

    @property
    def ok(self) -> bool:
        """Matrix check passed and, where a diagram form exists, agreed with it."""
        if "diagram_deviation" in self.details:
            return self.passed and self.diagram_confirmed
        return self.passed
