"""CSV parsing for the air and water datasets, and per-state water averaging."""
from __future__ import annotations

import csv
import io
import math
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Union

from .errors import SchemaError
from .indices import POLLUTANTS, WATER_PARAMETERS

Source = Union[str, os.PathLike, bytes, IO[bytes]]

DEFAULT_AIR_COLUMNS: dict[str, str] = {
    "state": "state",
    "location": "location",
    "so2": "so2",
    "no2": "no2",
    "rspm": "rspm",
    "spm": "spm",
}

DEFAULT_WATER_COLUMNS: dict[str, str] = {
    "state": "STATE",
    "location": "LOCATIONS",
    "do": "D.O. (mg/l)",
    "ph": "PH",
    "conductivity": "CONDUCTIVITY (µmhos/cm)",
    "bod": "B.O.D. (mg/l)",
    "nitrate": "NITRATENAN N+ NITRITENANN (mg/l)",
    "fecal_coliform": "FECAL COLIFORM (MPN/100ml)",
    "total_coliform": "TOTAL COLIFORM (MPN/100ml)Mean",
}

_WS = re.compile(r"\s+")


def normalize_state(name: str) -> str:
    """Trimmed, whitespace-collapsed display form."""
    return _WS.sub(" ", name.strip())


def state_key(name: str) -> str:
    """Join key: display form, case-folded."""
    return normalize_state(name).casefold()


@dataclass(frozen=True)
class AirRecord:
    state: str
    location: str = ""
    so2: float | None = None
    no2: float | None = None
    rspm: float | None = None
    spm: float | None = None

    @property
    def key(self) -> str:
        return state_key(self.state)

    def measurements(self) -> dict[str, float]:
        return {p: getattr(self, p) for p in POLLUTANTS if getattr(self, p) is not None}


@dataclass(frozen=True)
class WaterRecord:
    state: str
    location: str = ""
    do: float | None = None
    ph: float | None = None
    conductivity: float | None = None
    bod: float | None = None
    nitrate: float | None = None
    fecal_coliform: float | None = None
    total_coliform: float | None = None

    @property
    def key(self) -> str:
        return state_key(self.state)

    def measurements(self) -> dict[str, float]:
        return {p: getattr(self, p) for p in WATER_PARAMETERS if getattr(self, p) is not None}


@dataclass(frozen=True)
class WaterAggregate:
    state: str
    sample_count: int
    do: float | None = None
    ph: float | None = None
    conductivity: float | None = None
    bod: float | None = None
    nitrate: float | None = None
    fecal_coliform: float | None = None
    total_coliform: float | None = None

    @property
    def key(self) -> str:
        return state_key(self.state)

    def measurements(self) -> dict[str, float]:
        return {p: getattr(self, p) for p in WATER_PARAMETERS if getattr(self, p) is not None}


@dataclass
class ParseReport:
    rows_read: int = 0
    rows_kept: int = 0
    rows_dropped: int = 0
    dropped_no_state: int = 0
    missing: Counter = field(default_factory=Counter)
    unparseable: Counter = field(default_factory=Counter)
    out_of_range: Counter = field(default_factory=Counter)

    def as_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_kept": self.rows_kept,
            "rows_dropped": self.rows_dropped,
            "dropped_no_state": self.dropped_no_state,
            "missing": dict(sorted(self.missing.items())),
            "unparseable": dict(sorted(self.unparseable.items())),
            "out_of_range": dict(sorted(self.out_of_range.items())),
        }


def _open_text(source: Source) -> IO[str]:
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    if isinstance(source, (str, os.PathLike)):
        return open(source, encoding="utf-8-sig", newline="")
    return io.TextIOWrapper(source, encoding="utf-8-sig", newline="")


def _parse_number(cell: str) -> float | None:
    """None for blank cells; raises ValueError for text or non-finite values."""
    cell = cell.strip()
    if not cell:
        return None
    v = float(cell)
    if not math.isfinite(v):
        raise ValueError(cell)
    return v


def _parse(source: Source, mapping: Mapping[str, str], measures: tuple[str, ...], record_cls):
    report = ParseReport()
    records = []
    fh = _open_text(source)
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return records, report
        positions = {name.strip(): i for i, name in enumerate(header)}
        cols = {}
        for logical in ("state", "location", *measures):
            column = mapping[logical]
            if column.strip() not in positions:
                raise SchemaError(f"missing column {column!r} (mapped from {logical!r})")
            cols[logical] = positions[column.strip()]

        for row in reader:
            if not row:
                continue
            report.rows_read += 1
            cell = lambda logical: row[cols[logical]] if cols[logical] < len(row) else ""  # noqa: E731
            values = {}
            for name in measures:
                try:
                    v = _parse_number(cell(name))
                except ValueError:
                    report.unparseable[name] += 1
                    v = None
                if v is not None and (v < 0 or (name == "ph" and v > 14)):
                    # sensor sentinels such as -1 become missing
                    report.out_of_range[name] += 1
                    v = None
                if v is None:
                    report.missing[name] += 1
                values[name] = v
            state = normalize_state(cell("state"))
            if not state:
                report.dropped_no_state += 1
                report.rows_dropped += 1
                continue
            if all(v is None for v in values.values()):
                report.rows_dropped += 1
                continue
            records.append(record_cls(state=state, location=cell("location").strip(), **values))
            report.rows_kept += 1
    finally:
        if not isinstance(source, (str, os.PathLike)):
            fh.detach()
        else:
            fh.close()
    return records, report


def parse_air_csv(source: Source, mapping: Mapping[str, str] | None = None):
    """Parse an air-quality CSV. Returns ``(records, report)``."""
    return _parse(source, {**DEFAULT_AIR_COLUMNS, **(mapping or {})}, POLLUTANTS, AirRecord)


def parse_water_csv(source: Source, mapping: Mapping[str, str] | None = None):
    """Parse a water-quality CSV. Returns ``(records, report)``."""
    return _parse(source, {**DEFAULT_WATER_COLUMNS, **(mapping or {})}, WATER_PARAMETERS, WaterRecord)


def average_water_by_state(records: Iterable[WaterRecord]) -> dict[str, WaterAggregate]:
    """One aggregate per state key; each parameter averaged over the records where it is present."""
    groups: dict[str, list[WaterRecord]] = {}
    for rec in records:
        groups.setdefault(rec.key, []).append(rec)
    out = {}
    for key in sorted(groups):
        recs = groups[key]
        means = {}
        for p in WATER_PARAMETERS:
            vals = [getattr(r, p) for r in recs if getattr(r, p) is not None]
            if vals:
                # clamp guards the last-ulp rounding of the division
                means[p] = min(max(math.fsum(vals) / len(vals), min(vals)), max(vals))
            else:
                means[p] = None
        display = min(r.state for r in recs)
        out[key] = WaterAggregate(state=display, sample_count=len(recs), **means)
    return out

