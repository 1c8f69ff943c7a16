"""CSV writers: canonical record files and the derived artefacts (joined data, predictions, tables)."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .dataset import FeatureMatrix
from .errors import SchemaError
from .indices import BREAKPOINTS, WQI_STANDARDS, WQI_WEIGHTS
from .ingest import AirRecord, WaterRecord
from .labeler import LABELS, EnvLabel, LabelTable


def fmt(v) -> str:
    """Derived numeric output: 9 significant digits, blank for missing."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return f"{float(v):.9g}"


def _exact(v) -> str:
    return "" if v is None else repr(float(v))


def write_rows(path: str | Path, rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def record_rows(records: Sequence[AirRecord | WaterRecord], mapping: Mapping[str, str], measures: Sequence[str]):
    """Canonical record layout: header from ``mapping``, exact (round-trip) floats."""
    yield [mapping["state"], mapping["location"], *(mapping[m] for m in measures)]
    for r in records:
        yield [r.state, r.location, *(_exact(getattr(r, m)) for m in measures)]


def matrix_rows(matrix: FeatureMatrix, with_labels: bool = False):
    header = ["state", *matrix.feature_names]
    if with_labels:
        header.append("label")
    yield header
    for i, state in enumerate(matrix.states):
        row = [state, *(fmt(v) for v in matrix.rows[i])]
        if with_labels:
            row.append(matrix.labels[i].label)
        yield row


def read_matrix(path: str | Path, feature_names: Sequence[str] | None = None) -> FeatureMatrix:
    """Read a ``state,<features...>[,label]`` file; blank cells become NaN."""
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        body = [row for row in reader if row]
    if not header or header[0] != "state":
        raise SchemaError(f"{path}: first column must be 'state'")
    names = list(feature_names) if feature_names is not None else [h for h in header[1:] if h != "label"]
    pos = {h: i for i, h in enumerate(header)}
    for n in names:
        if n not in pos:
            raise SchemaError(f"{path}: missing column {n!r}")
    rows = np.full((len(body), len(names)), np.nan)
    for i, row in enumerate(body):
        for j, n in enumerate(names):
            cell = row[pos[n]].strip() if pos[n] < len(row) else ""
            if cell:
                try:
                    rows[i, j] = float(cell)
                except ValueError:
                    pass
    labels = None
    if "label" in pos:
        labels = tuple(EnvLabel.from_label(row[pos["label"]]) for row in body)
    return FeatureMatrix(tuple(names), rows, tuple(row[0] for row in body), labels)


def probability_header() -> list[str]:
    return [f"p_{c.label.lower()}" for c in LABELS]


def breakpoint_rows():
    yield ["pollutant", "conc_lo", "conc_hi", "index_lo", "index_hi"]
    for pollutant, table in BREAKPOINTS.items():
        for seg in table:
            yield [pollutant, *(fmt(v) for v in seg)]


def wqi_parameter_rows():
    total = sum(WQI_WEIGHTS.values())
    yield ["parameter", "ideal", "standard", "weight", "relative_weight"]
    for p, (ideal, standard) in WQI_STANDARDS.items():
        yield [p, fmt(ideal), fmt(standard), fmt(WQI_WEIGHTS[p]), fmt(WQI_WEIGHTS[p] / total)]


def label_table_rows(table: LabelTable):
    yield ["air", "water", "label", "rank", "provenance"]
    for cell in table:
        yield [cell.air.label, cell.water.label, cell.label.label, str(int(cell.label)), cell.provenance]
