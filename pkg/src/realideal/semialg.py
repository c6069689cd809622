"""Semialgebraic sets: disjunctions of conjunctions of polynomial sign
conditions (>, >=, =)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebraic import Point, sign_at
from .mpoly import MPoly, Ring

RELATIONS = (">", ">=", "=")


@dataclass(frozen=True)
class SignCondition:
    poly: MPoly
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}")

    def holds(self, sign: int) -> bool:
        if self.rel == ">":
            return sign > 0
        if self.rel == ">=":
            return sign >= 0
        return sign == 0

    def holds_strictly(self, sign: int) -> bool:
        """Interior version: equations have empty interior contribution."""
        if self.rel == "=":
            return False
        return sign > 0

    def render(self) -> str:
        return f"{self.poly.render()} {self.rel} 0"


@dataclass(frozen=True)
class SemialgebraicSet:
    """Union over conjuncts of {x : poly rel 0 for each condition}."""

    ring: Ring
    conjuncts: tuple[tuple[SignCondition, ...], ...]

    @staticmethod
    def whole_space(ring: Ring) -> "SemialgebraicSet":
        return SemialgebraicSet(ring, ((),))

    @staticmethod
    def conjunction(conditions: Sequence[SignCondition], ring: Ring | None = None) -> "SemialgebraicSet":
        conditions = tuple(conditions)
        if ring is None:
            if not conditions:
                raise ValueError("empty conjunction needs an explicit ring")
            ring = conditions[0].poly.ring
        return SemialgebraicSet(ring, (conditions,))

    @property
    def is_whole_space(self) -> bool:
        return any(len(c) == 0 for c in self.conjuncts)

    def inequality_polys(self) -> list[MPoly]:
        """All distinct condition polynomials, in first-seen order."""
        seen = []
        for conj in self.conjuncts:
            for cond in conj:
                if not any(cond.poly.terms == p.terms for p in seen):
                    seen.append(cond.poly)
        return seen

    def satisfied_at(self, point: Point) -> bool:
        for conj in self.conjuncts:
            if all(cond.holds(sign_at(cond.poly, point)) for cond in conj):
                return True
        return False

    def strictly_satisfied_at(self, point: Point) -> bool:
        for conj in self.conjuncts:
            if conj and all(cond.holds_strictly(sign_at(cond.poly, point)) for cond in conj):
                return True
        return self.is_whole_space

    def render(self) -> str:
        if self.is_whole_space:
            return "R^n (no constraints)"
        parts = []
        for conj in self.conjuncts:
            parts.append(" and ".join(c.render() for c in conj))
        return " or ".join(f"({p})" for p in parts) if len(parts) > 1 else parts[0]
