"""Air Quality Index (breakpoint sub-indices) and weighted-arithmetic Water Quality Index."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Mapping

from .errors import DomainError

POLLUTANTS = ("so2", "no2", "rspm", "spm")
WATER_PARAMETERS = ("do", "ph", "conductivity", "bod", "nitrate", "fecal_coliform", "total_coliform")

AQI_CAP = 500.0


class AirCategory(IntEnum):
    GOOD = 1
    SATISFACTORY = 2
    MODERATE = 3
    POOR = 4
    VERY_POOR = 5
    SEVERE = 6

    @property
    def label(self) -> str:
        return _AIR_NAMES[self]

    @classmethod
    def from_label(cls, name: str) -> "AirCategory":
        return _lookup(cls, _AIR_NAMES, name)


class WaterCategory(IntEnum):
    EXCELLENT = 1
    GOOD = 2
    SATISFACTORY = 3
    POOR = 4
    SEVERE = 5

    @property
    def label(self) -> str:
        return _WATER_NAMES[self]

    @classmethod
    def from_label(cls, name: str) -> "WaterCategory":
        return _lookup(cls, _WATER_NAMES, name)


_AIR_NAMES = {
    AirCategory.GOOD: "Good",
    AirCategory.SATISFACTORY: "Satisfactory",
    AirCategory.MODERATE: "Moderate",
    AirCategory.POOR: "Poor",
    AirCategory.VERY_POOR: "VeryPoor",
    AirCategory.SEVERE: "Severe",
}
_WATER_NAMES = {
    WaterCategory.EXCELLENT: "Excellent",
    WaterCategory.GOOD: "Good",
    WaterCategory.SATISFACTORY: "Satisfactory",
    WaterCategory.POOR: "Poor",
    WaterCategory.SEVERE: "Severe",
}


def _lookup(cls, names, name):
    key = name.strip().replace(" ", "").replace("_", "").casefold()
    for member, label in names.items():
        if label.casefold() == key:
            return member
    raise DomainError(f"unknown {cls.__name__} {name!r}")


# (conc_lo, conc_hi, index_lo, index_hi) in ug/m3 -> index points. The last
# segment's upper concentration is where the 500 cap is reached.
_SO2 = (
    (0.0, 40.0, 0.0, 50.0),
    (40.0, 80.0, 50.0, 100.0),
    (80.0, 380.0, 100.0, 200.0),
    (380.0, 800.0, 200.0, 300.0),
    (800.0, 1600.0, 300.0, 400.0),
    (1600.0, 2400.0, 400.0, 500.0),
)
_NO2 = (
    (0.0, 40.0, 0.0, 50.0),
    (40.0, 80.0, 50.0, 100.0),
    (80.0, 180.0, 100.0, 200.0),
    (180.0, 280.0, 200.0, 300.0),
    (280.0, 400.0, 300.0, 400.0),
    (400.0, 520.0, 400.0, 500.0),
)
_RSPM = (
    (0.0, 50.0, 0.0, 50.0),
    (50.0, 100.0, 50.0, 100.0),
    (100.0, 250.0, 100.0, 200.0),
    (250.0, 350.0, 200.0, 300.0),
    (350.0, 430.0, 300.0, 400.0),
    (430.0, 510.0, 400.0, 500.0),
)
_SPM = tuple((2 * lo, 2 * hi, ilo, ihi) for lo, hi, ilo, ihi in _RSPM)

BREAKPOINTS: dict[str, tuple[tuple[float, float, float, float], ...]] = {
    "so2": _SO2,
    "no2": _NO2,
    "rspm": _RSPM,
    "spm": _SPM,
}

# parameter -> (ideal value, permissible standard)
WQI_STANDARDS: dict[str, tuple[float, float]] = {
    "do": (14.6, 5.0),
    "ph": (7.0, 8.5),
    "conductivity": (0.0, 1000.0),
    "bod": (0.0, 5.0),
    "nitrate": (0.0, 45.0),
    "fecal_coliform": (0.0, 100.0),
    "total_coliform": (0.0, 1000.0),
}

# Unit weights proportional to 1/S; renormalised over the parameters present.
WQI_WEIGHTS: dict[str, float] = {p: 1.0 / s for p, (_, s) in WQI_STANDARDS.items()}

_AQI_BANDS = (
    (50.0, AirCategory.GOOD),
    (100.0, AirCategory.SATISFACTORY),
    (200.0, AirCategory.MODERATE),
    (300.0, AirCategory.POOR),
    (400.0, AirCategory.VERY_POOR),
)
_WQI_BANDS = (
    (25.0, WaterCategory.EXCELLENT),
    (50.0, WaterCategory.GOOD),
    (75.0, WaterCategory.SATISFACTORY),
    (100.0, WaterCategory.POOR),
)


@dataclass(frozen=True)
class AqiResult:
    value: float
    dominant_pollutant: str
    category: AirCategory


@dataclass(frozen=True)
class WqiResult:
    value: float
    category: WaterCategory


def _check_value(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
    return value


def pollutant_subindex(pollutant: str, concentration: float) -> float:
    """Linear interpolation inside the pollutant's breakpoint segment, capped at 500."""
    try:
        table = BREAKPOINTS[pollutant]
    except KeyError:
        raise DomainError(f"unknown pollutant {pollutant!r}") from None
    c = _check_value(pollutant, concentration)
    for c_lo, c_hi, i_lo, i_hi in table:
        if c <= c_hi:
            return i_lo + (i_hi - i_lo) * (c - c_lo) / (c_hi - c_lo)
    return AQI_CAP


def aqi_category(value: float) -> AirCategory:
    v = _check_value("AQI", value)
    for upper, cat in _AQI_BANDS:
        if v <= upper:
            return cat
    return AirCategory.SEVERE


def _present(record: Any, names) -> dict[str, float]:
    get = record.get if isinstance(record, Mapping) else lambda n: getattr(record, n, None)
    out = {}
    for name in names:
        v = get(name)
        if v is not None and not (isinstance(v, float) and math.isnan(v)):
            out[name] = float(v)
    return out


def compute_aqi(record: Any) -> AqiResult:
    """AQI of an AirRecord (or mapping of pollutant -> concentration).

    Ties for the dominant pollutant go to the earlier one in ``POLLUTANTS``.
    """
    present = _present(record, POLLUTANTS)
    if not present:
        raise DomainError("no pollutant present; AQI undefined")
    best_name, best = None, -1.0
    for name in POLLUTANTS:
        if name in present:
            sub = pollutant_subindex(name, present[name])
            if sub > best:
                best_name, best = name, sub
    return AqiResult(best, best_name, aqi_category(best))


def water_quality_rating(parameter: str, value: float) -> float:
    try:
        ideal, standard = WQI_STANDARDS[parameter]
    except KeyError:
        raise DomainError(f"unknown water parameter {parameter!r}") from None
    v = float(value)
    if not math.isfinite(v) or v < 0 or (parameter == "ph" and v > 14):
        raise DomainError(f"{parameter} value out of range: {value!r}")
    q = 100.0 * (v - ideal) / (standard - ideal)
    return max(q, 0.0)


def wqi_category(value: float) -> WaterCategory:
    v = _check_value("WQI", value)
    for upper, cat in _WQI_BANDS:
        if v <= upper:
            return cat
    return WaterCategory.SEVERE


def compute_wqi(aggregate: Any) -> WqiResult:
    """Weighted arithmetic WQI over the parameters present in ``aggregate``."""
    present = _present(aggregate, WATER_PARAMETERS)
    if not present:
        raise DomainError("no water parameter present; WQI undefined")
    if len(present) == 1:
        (name, v), = present.items()
        value = water_quality_rating(name, v)
    else:
        total_w = sum(WQI_WEIGHTS[p] for p in present)
        value = sum(WQI_WEIGHTS[p] * water_quality_rating(p, v) for p, v in present.items()) / total_w
    return WqiResult(value, wqi_category(value))
