"""Air-weighted combination of air and water categories into six environment labels."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

from .errors import DomainError
from .indices import AirCategory, WaterCategory

AIR_WEIGHT = Fraction(3, 5)
WATER_WEIGHT = Fraction(2, 5)


class EnvLabel(IntEnum):
    GOOD = 1
    SATISFACTORY = 2
    FAIR = 3
    POOR = 4
    BAD = 5
    SEVERE = 6

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, name: str) -> "EnvLabel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise DomainError(f"unknown environment label {name!r}") from None


LABELS = tuple(EnvLabel)
N_CLASSES = len(LABELS)


def label_rank(label: EnvLabel) -> int:
    return int(EnvLabel(label))


def rank_label(rank: int) -> EnvLabel:
    try:
        return EnvLabel(rank)
    except ValueError:
        raise DomainError(f"label rank must be in 1..6, got {rank!r}") from None


A, W = AirCategory, WaterCategory

PINNED: Mapping[tuple[AirCategory, WaterCategory], EnvLabel] = MappingProxyType({
    # same-name pairs
    (A.GOOD, W.GOOD): EnvLabel.GOOD,
    (A.SATISFACTORY, W.SATISFACTORY): EnvLabel.SATISFACTORY,
    (A.POOR, W.POOR): EnvLabel.POOR,
    (A.SEVERE, W.SEVERE): EnvLabel.SEVERE,
    # the air=Good row; 'Excellent' has no overall counterpart and collapses to Good
    (A.GOOD, W.EXCELLENT): EnvLabel.GOOD,
    (A.GOOD, W.SATISFACTORY): EnvLabel.GOOD,
    (A.GOOD, W.POOR): EnvLabel.FAIR,
    (A.GOOD, W.SEVERE): EnvLabel.BAD,
})


def weighted_score(air: AirCategory, water: WaterCategory) -> Fraction:
    stretched = 1 + Fraction(5, 4) * (int(water) - 1)
    return AIR_WEIGHT * int(air) + WATER_WEIGHT * stretched


def formula_label(air: AirCategory, water: WaterCategory) -> EnvLabel:
    """Round-half-up of the weighted score, clamped to 1..6."""
    rank = math.floor(weighted_score(air, water) + Fraction(1, 2))
    return EnvLabel(min(max(rank, 1), N_CLASSES))


@dataclass(frozen=True)
class LabelCell:
    air: AirCategory
    water: WaterCategory
    label: EnvLabel
    provenance: str  # "pinned" | "derived"


@dataclass(frozen=True)
class LabelTable:
    cells: Mapping[tuple[AirCategory, WaterCategory], LabelCell]

    def __getitem__(self, key):
        return self.cells[key].label

    def __iter__(self):
        for air in AirCategory:
            for water in WaterCategory:
                yield self.cells[(air, water)]

    def __len__(self):
        return len(self.cells)

    def monotonicity_violations(self) -> list[tuple[LabelCell, LabelCell]]:
        """Adjacent cell pairs where a worse input category yields a better label."""
        bad = []
        for air in AirCategory:
            for water in WaterCategory:
                here = self.cells[(air, water)]
                if air < AirCategory.SEVERE:
                    nxt = self.cells[(AirCategory(air + 1), water)]
                    if nxt.label < here.label:
                        bad.append((here, nxt))
                if water < WaterCategory.SEVERE:
                    nxt = self.cells[(air, WaterCategory(water + 1))]
                    if nxt.label < here.label:
                        bad.append((here, nxt))
        return bad


@lru_cache(maxsize=1)
def build_label_table() -> LabelTable:
    cells = {}
    for air in AirCategory:
        for water in WaterCategory:
            if (air, water) in PINNED:
                cells[(air, water)] = LabelCell(air, water, PINNED[(air, water)], "pinned")
            else:
                cells[(air, water)] = LabelCell(air, water, formula_label(air, water), "derived")
    return LabelTable(MappingProxyType(cells))


def combine(air: AirCategory, water: WaterCategory) -> EnvLabel:
    return build_label_table()[(AirCategory(air), WaterCategory(water))]
