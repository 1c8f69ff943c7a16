"""Accuracy, confusion matrix, Pearson correlation and correlation-based feature ranking."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import FeatureMatrix
from .errors import DomainError
from .labeler import LABELS, EnvLabel


def _check_pair(predicted, actual):
    if len(predicted) != len(actual):
        raise DomainError(f"length mismatch: {len(predicted)} predicted vs {len(actual)} actual")
    if len(actual) == 0:
        raise DomainError("nothing to evaluate")


def accuracy(predicted: Sequence[EnvLabel], actual: Sequence[EnvLabel]) -> float:
    _check_pair(predicted, actual)
    hits = sum(int(p) == int(a) for p, a in zip(predicted, actual))
    return hits / len(actual)


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # rows: actual rank 1..6, columns: predicted rank 1..6
    classes: tuple[EnvLabel, ...] = LABELS

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def accuracy(self) -> float:
        return float(np.trace(self.counts)) / self.total

    def to_rows(self) -> list[list[str]]:
        header = ["actual\\predicted"] + [c.label for c in self.classes]
        return [header] + [[c.label] + [str(int(v)) for v in row] for c, row in zip(self.classes, self.counts)]


def confusion(predicted: Sequence[EnvLabel], actual: Sequence[EnvLabel]) -> ConfusionMatrix:
    _check_pair(predicted, actual)
    counts = np.zeros((len(LABELS), len(LABELS)), dtype=int)
    for p, a in zip(predicted, actual):
        counts[int(a) - 1, int(p) - 1] += 1
    return ConfusionMatrix(counts)


def pearson(x, y) -> float | None:
    """Two-pass Pearson r. Returns None when either vector is constant (not computable)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("pearson needs two 1-D vectors of equal length")
    if len(x) < 2:
        raise DomainError("pearson needs at least 2 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = math.fsum(dx * dx)
    syy = math.fsum(dy * dy)
    if sxx == 0.0 or syy == 0.0:
        return None
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class RankedFeature:
    name: str
    r: float | None

    @property
    def computable(self) -> bool:
        return self.r is not None


def rank_features(matrix: FeatureMatrix) -> list[RankedFeature]:
    """Correlate each feature with the label rank (Good=1 .. Severe=6).

    Sorted by |r| descending, ties by name; non-computable features come last.
    Missing cells are skipped pairwise.
    """
    if matrix.labels is None:
        raise DomainError("feature ranking needs a labeled matrix")
    target = matrix.label_ranks.astype(float)
    out = []
    for j, name in enumerate(matrix.feature_names):
        col = matrix.rows[:, j]
        ok = ~np.isnan(col)
        r = pearson(col[ok], target[ok]) if ok.sum() >= 2 else None
        out.append(RankedFeature(name, r))
    return sorted(out, key=lambda f: (f.r is None, -abs(f.r) if f.r is not None else 0.0, f.name))
