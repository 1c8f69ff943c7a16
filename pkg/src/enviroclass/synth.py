"""Synthetic air and water datasets whose labels cover all six environment classes."""
from __future__ import annotations

import numpy as np

from .indices import BREAKPOINTS, POLLUTANTS, WATER_PARAMETERS, WQI_STANDARDS, AirCategory, WaterCategory
from .ingest import AirRecord, WaterRecord
from .labeler import LABELS, build_label_table

STATES = (
    "Andhra Pradesh", "Assam", "Bihar", "Chhattisgarh", "Delhi",
    "Goa", "Gujarat", "Haryana", "Himachal Pradesh", "Jharkhand",
    "Karnataka", "Kerala", "Madhya Pradesh", "Maharashtra", "Odisha",
    "Punjab", "Rajasthan", "Tamil Nadu", "Uttar Pradesh", "West Bengal",
)
WATER_SAMPLES_PER_STATE = 8

# Sub-index / WQI ranges kept clear of the band edges.
_AQI_TARGET = {
    AirCategory.GOOD: (3.0, 47.0),
    AirCategory.SATISFACTORY: (53.0, 97.0),
    AirCategory.MODERATE: (105.0, 195.0),
    AirCategory.POOR: (205.0, 295.0),
    AirCategory.VERY_POOR: (305.0, 395.0),
    AirCategory.SEVERE: (405.0, 495.0),
}
_WQI_TARGET = {
    WaterCategory.EXCELLENT: (2.0, 22.0),
    WaterCategory.GOOD: (30.0, 45.0),
    WaterCategory.SATISFACTORY: (55.0, 70.0),
    WaterCategory.POOR: (80.0, 95.0),
    WaterCategory.SEVERE: (110.0, 140.0),
}
_WATER_NOISE = 0.05


def concentration_for_subindex(pollutant: str, index: float) -> float:
    """Inverse of the breakpoint interpolation (index below the 500 cap)."""
    for c_lo, c_hi, i_lo, i_hi in BREAKPOINTS[pollutant]:
        if index <= i_hi:
            return c_lo + (c_hi - c_lo) * (index - i_lo) / (i_hi - i_lo)
    raise ValueError(f"index {index} outside the breakpoint table")


def water_state_category(i: int) -> WaterCategory:
    return WaterCategory(i % len(WaterCategory) + 1)


def _water_records(rng: np.random.Generator) -> list[WaterRecord]:
    out = []
    for i, state in enumerate(STATES):
        target = rng.uniform(*_WQI_TARGET[water_state_category(i)])
        for k in range(WATER_SAMPLES_PER_STATE):
            values = {}
            for p in WATER_PARAMETERS:
                ideal, standard = WQI_STANDARDS[p]
                q = target * (1.0 + rng.uniform(-_WATER_NOISE, _WATER_NOISE))
                values[p] = round(ideal + q / 100.0 * (standard - ideal), 4)
            out.append(WaterRecord(state=state, location=f"{state} station {k + 1}", **values))
    return out


def _air_record(rng: np.random.Generator, state: str, category: AirCategory, n: int) -> AirRecord:
    # pollutants co-vary: every sub-index falls inside the same band
    lo, hi = _AQI_TARGET[category]
    values = {p: round(concentration_for_subindex(p, rng.uniform(lo, hi)), 3) for p in POLLUTANTS}
    return AirRecord(state=state, location=f"{state} monitor {n}", **values)


def generate(n_rows: int, seed: int) -> tuple[list[AirRecord], list[WaterRecord]]:
    """``n_rows`` air records and a fixed water panel (empty when ``n_rows`` is 0).

    Target labels cycle through the six classes; each row draws an (air, water) category
    pair that the label table maps to its target, then a state with that water category.
    """
    if n_rows <= 0:
        return [], []
    rng = np.random.default_rng(seed)
    water = _water_records(rng)
    table = build_label_table()
    pairs = {label: [(c.air, c.water) for c in table if c.label == label] for label in LABELS}
    states_by_water = {w: [s for i, s in enumerate(STATES) if water_state_category(i) == w] for w in WaterCategory}

    targets = rng.permutation(np.arange(n_rows) % len(LABELS))
    air = []
    for n, t in enumerate(targets):
        options = pairs[LABELS[t]]
        air_cat, water_cat = options[rng.integers(len(options))]
        candidates = states_by_water[water_cat]
        state = candidates[rng.integers(len(candidates))]
        air.append(_air_record(rng, state, air_cat, n + 1))
    return air, water
