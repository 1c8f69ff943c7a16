"""State join, labelling, imputation, standardisation and train/test splitting."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, NoOverlapError
from .indices import POLLUTANTS, WATER_PARAMETERS, AqiResult, WqiResult
from .ingest import AirRecord, WaterAggregate, state_key
from .labeler import EnvLabel, combine

FEATURES = POLLUTANTS + WATER_PARAMETERS


@dataclass(frozen=True)
class FeatureMatrix:
    feature_names: tuple[str, ...]
    rows: np.ndarray  # (n, d) float, NaN marks a missing cell
    states: tuple[str, ...]
    labels: tuple[EnvLabel, ...] | None = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float).reshape(len(self.states), len(self.feature_names))
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "states", tuple(self.states))
        if self.labels is not None:
            labels = tuple(EnvLabel(v) for v in self.labels)
            if len(labels) != len(self.states):
                raise ConsistencyError("labels and rows differ in length")
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def state_keys(self) -> tuple[str, ...]:
        return tuple(state_key(s) for s in self.states)

    @property
    def label_ranks(self) -> np.ndarray:
        if self.labels is None:
            raise DomainError("matrix is unlabeled")
        return np.array([int(v) for v in self.labels], dtype=int)

    def take(self, indices) -> "FeatureMatrix":
        idx = np.asarray(indices, dtype=int)
        return FeatureMatrix(
            self.feature_names,
            self.rows[idx],
            tuple(self.states[i] for i in idx),
            None if self.labels is None else tuple(self.labels[i] for i in idx),
        )

    def with_labels(self, labels) -> "FeatureMatrix":
        return FeatureMatrix(self.feature_names, self.rows, self.states, tuple(labels))


@dataclass(frozen=True)
class JoinResult:
    matrix: FeatureMatrix
    air: tuple[AirRecord, ...]  # the air records that found a partner, row-aligned
    dropped: int


def join_by_state(air: Sequence[AirRecord], water: Mapping[str, WaterAggregate]) -> JoinResult:
    """One row per air record whose state has a water aggregate; water features are shared per state."""
    by_key = {state_key(k): v for k, v in water.items()}
    kept, rows = [], []
    for rec in air:
        agg = by_key.get(rec.key)
        if agg is None:
            continue
        kept.append(rec)
        rows.append([_nan(getattr(rec, p)) for p in POLLUTANTS] + [_nan(getattr(agg, p)) for p in WATER_PARAMETERS])
    if air and by_key and not kept:
        raise NoOverlapError("no state appears in both the air and water datasets")
    matrix = FeatureMatrix(FEATURES, np.array(rows, dtype=float).reshape(len(rows), len(FEATURES)),
                           tuple(r.state for r in kept))
    return JoinResult(matrix, tuple(kept), len(air) - len(kept))


def _nan(v):
    return np.nan if v is None else v


def attach_labels(matrix: FeatureMatrix, aqi_per_row: Sequence[AqiResult],
                  wqi_per_state: Mapping[str, WqiResult]) -> FeatureMatrix:
    if len(aqi_per_row) != len(matrix):
        raise ConsistencyError("AQI results are not aligned with matrix rows")
    wqi = {state_key(k): v for k, v in wqi_per_state.items()}
    labels = []
    for aqi, key in zip(aqi_per_row, matrix.state_keys):
        if key not in wqi:
            raise ConsistencyError(f"no WQI for state {key!r}")
        labels.append(combine(aqi.category, wqi[key].category))
    return matrix.with_labels(labels)


def column_means(matrix: FeatureMatrix) -> np.ndarray:
    """Per-feature mean over non-missing cells (NaN where a column is entirely missing)."""
    rows = matrix.rows
    present = ~np.isnan(rows)
    counts = present.sum(axis=0)
    sums = np.where(present, rows, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def impute_missing(matrix: FeatureMatrix) -> FeatureMatrix:
    """Fill missing cells with the column mean; drop columns with no values at all."""
    means = column_means(matrix)
    keep = ~np.isnan(means)
    if len(matrix) and not keep.all():
        dropped = [n for n, k in zip(matrix.feature_names, keep) if not k]
        warnings.warn(f"dropping features with no values: {', '.join(dropped)}", stacklevel=2)
    elif not len(matrix):
        keep[:] = True
    rows = matrix.rows[:, keep]
    rows = np.where(np.isnan(rows), means[keep], rows)
    names = tuple(n for n, k in zip(matrix.feature_names, keep) if k)
    return FeatureMatrix(names, rows, matrix.states, matrix.labels)


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    def transform(self, rows) -> np.ndarray:
        return (np.asarray(rows, dtype=float) - self.mean) / self.std


def fit_standardizer(train_rows) -> Standardizer:
    """Population statistics; constant features get std 1."""
    x = np.asarray(train_rows, dtype=float)
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    return Standardizer(mean, std)


def apply_standardizer(standardizer: Standardizer, rows) -> np.ndarray:
    return standardizer.transform(rows)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise DomainError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def _largest_remainder(quotas: np.ndarray, total: int, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Integer allocation close to ``quotas`` summing to ``total`` within per-class bounds."""
    alloc = np.clip(np.floor(quotas).astype(int), lo, hi)
    rem = quotas - np.floor(quotas)
    # stable sort: equal remainders resolve toward the lower class index
    up = np.argsort(-rem, kind="stable")
    down = np.argsort(rem, kind="stable")
    while alloc.sum() < total:
        for i in up:
            if alloc[i] < hi[i]:
                alloc[i] += 1
                break
        else:
            break
    while alloc.sum() > total:
        for i in down:
            if alloc[i] > lo[i]:
                alloc[i] -= 1
                break
        else:
            break
    return alloc


def split_indices(n: int, spec: SplitSpec, labels: Sequence[int] | None = None) -> tuple[np.ndarray, np.ndarray]:
    if n < 2:
        raise DomainError("need at least 2 rows to split")
    rng = np.random.default_rng(spec.seed)
    target = int(round(spec.train_fraction * n))
    if not spec.stratified or labels is None:
        perm = rng.permutation(n)
        return np.sort(perm[:target]), np.sort(perm[target:])

    labels = np.asarray([int(v) for v in labels])
    classes = np.unique(labels)
    members = [np.flatnonzero(labels == c) for c in classes]
    sizes = np.array([len(m) for m in members])
    for c, size in zip(classes, sizes):
        if size == 1:
            warnings.warn(f"class {c} has a single row; it goes to the training side", stacklevel=2)
    quotas = spec.train_fraction * sizes
    # within one row of the quota, and both sides non-empty for classes of size >= 2
    lo = np.where(sizes >= 2, np.maximum(np.floor(quotas), 1), sizes).astype(int)
    hi = np.where(sizes >= 2, np.minimum(np.ceil(quotas), sizes - 1), sizes).astype(int)
    counts = _largest_remainder(quotas, target, lo, hi)
    train, test = [], []
    for m, k in zip(members, counts):
        perm = rng.permutation(m)
        train.append(perm[:k])
        test.append(perm[k:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def train_test_split(matrix: FeatureMatrix, spec: SplitSpec) -> tuple[FeatureMatrix, FeatureMatrix]:
    labels = matrix.label_ranks if (spec.stratified and matrix.labels is not None) else None
    train, test = split_indices(len(matrix), spec, labels)
    return matrix.take(train), matrix.take(test)
