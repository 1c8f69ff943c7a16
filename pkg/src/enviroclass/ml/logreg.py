"""Multinomial logistic regression fitted by full-batch gradient descent."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from .tree import N_CLASSES


@dataclass(frozen=True)
class LogRegParams:
    l2: float = 1e-3
    learning_rate: float = 0.5
    epochs: int = 500


@dataclass
class LogRegModel:
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    params: LogRegParams = field(default_factory=LogRegParams)

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]


def softmax(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def loss_and_grad(W: np.ndarray, b: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float):
    """Mean cross-entropy plus (l2/2)|W|^2, and its gradients with respect to W and b."""
    n, k = len(X), W.shape[0]
    z = X @ W.T + b
    z = z - z.max(axis=1, keepdims=True)
    log_p = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
    loss = -log_p[np.arange(n), y].mean() + 0.5 * l2 * np.sum(W * W)
    delta = np.exp(log_p)
    delta[np.arange(n), y] -= 1.0
    delta /= n
    return float(loss), delta.T @ X + l2 * W, delta.sum(axis=0)


def train_logreg(rows, labels, params: LogRegParams = LogRegParams(), n_classes: int = N_CLASSES) -> LogRegModel:
    X = np.asarray(rows, dtype=float)
    y = np.asarray(labels, dtype=int)
    if X.ndim != 2 or len(X) == 0:
        raise DomainError("train_logreg needs at least one row")
    W = np.zeros((n_classes, X.shape[1]))
    b = np.zeros(n_classes)
    for _ in range(params.epochs):
        _, gW, gb = loss_and_grad(W, b, X, y, params.l2)
        W -= params.learning_rate * gW
        b -= params.learning_rate * gb
    if not (np.isfinite(W).all() and np.isfinite(b).all()):
        raise DomainError("logistic regression diverged; lower the learning rate")
    return LogRegModel(W, b, params)


def predict_logreg(model: LogRegModel, rows) -> np.ndarray:
    X = np.asarray(rows, dtype=float)
    if X.shape[-1] != model.n_features:
        raise DomainError(f"row width {X.shape[-1]} != training width {model.n_features}")
    return softmax(X @ model.weights.T + model.bias)
