"""Linear one-vs-rest SVM trained with the Pegasos stochastic subgradient method."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from .logreg import softmax
from .tree import N_CLASSES


@dataclass(frozen=True)
class SvcParams:
    lam: float = 0.01
    epochs: int = 40
    seed: int = 0


@dataclass
class SvcModel:
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    params: SvcParams = field(default_factory=SvcParams)
    loss_history: list[float] = field(default_factory=list)

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    def margins(self, rows) -> np.ndarray:
        X = np.asarray(rows, dtype=float)
        if X.shape[-1] != self.n_features:
            raise DomainError(f"row width {X.shape[-1]} != training width {self.n_features}")
        return X @ self.weights.T + self.bias


def _targets(y: np.ndarray, n_classes: int) -> np.ndarray:
    return np.where(np.arange(n_classes)[None, :] == y[:, None], 1.0, -1.0)


def svc_objective(W_aug: np.ndarray, X_aug: np.ndarray, Y: np.ndarray, lam: float) -> float:
    """Sum over detectors of (lam/2)|w|^2 + mean hinge loss. Bias is the last column of ``W_aug``."""
    margins = Y * (X_aug @ W_aug.T)
    hinge = np.maximum(0.0, 1.0 - margins).mean(axis=0)
    return float(np.sum(0.5 * lam * (W_aug ** 2).sum(axis=1) + hinge))


def train_svc(rows, labels, params: SvcParams = SvcParams(), n_classes: int = N_CLASSES) -> SvcModel:
    """One detector per class, all updated on the same seeded sample order.

    The bias is handled as an extra constant feature and is therefore regularised with
    the weights. The returned parameters are the average of all iterates, and
    ``loss_history`` holds the objective at that running average after each epoch.
    """
    X = np.asarray(rows, dtype=float)
    y = np.asarray(labels, dtype=int)
    if X.ndim != 2 or len(X) == 0:
        raise DomainError("train_svc needs at least one row")
    n, d = X.shape
    present = np.unique(y)
    if len(present) == 1:
        bias = np.full(n_classes, -1.0)
        bias[present[0]] = 1.0
        return SvcModel(np.zeros((n_classes, d)), bias, params)

    X_aug = np.hstack([X, np.ones((n, 1))])
    Y = _targets(y, n_classes)
    W = np.zeros((n_classes, d + 1))
    W_avg = np.zeros_like(W)
    rng = np.random.default_rng(params.seed)
    lam = params.lam
    history = []
    t = 0
    for _ in range(params.epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            x, yi = X_aug[i], Y[i]
            violated = yi * (W @ x) < 1.0
            W *= 1.0 - eta * lam
            if violated.any():
                W[violated] += eta * yi[violated, None] * x
            W_avg += (W - W_avg) / t
        history.append(svc_objective(W_avg, X_aug, Y, lam))
    return SvcModel(W_avg[:, :d].copy(), W_avg[:, d].copy(), params, history)


def predict_svc(model: SvcModel, rows) -> np.ndarray:
    """Softmax over the per-class margins."""
    return softmax(model.margins(rows))
