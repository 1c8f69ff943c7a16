"""Two-level stacking: forest, SVC and logistic regression feed a logistic meta-learner."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..dataset import Standardizer, fit_standardizer
from ..errors import DomainError
from ..labeler import LABELS, EnvLabel
from .forest import ForestParams, RandomForest, derive_seeds, predict_forest, train_forest
from .logreg import LogRegModel, LogRegParams, predict_logreg, train_logreg
from .svc import SvcModel, SvcParams, predict_svc, train_svc
from .tree import N_CLASSES

BASE_MODELS = ("forest", "svc", "logreg")


@dataclass(frozen=True)
class StackingParams:
    k_folds: int = 5
    seed: int = 0
    forest: ForestParams = field(default_factory=ForestParams)
    svc: SvcParams = field(default_factory=SvcParams)
    logreg: LogRegParams = field(default_factory=LogRegParams)
    meta: LogRegParams = field(default_factory=lambda: LogRegParams(l2=1e-3, learning_rate=1.0, epochs=1000))


@dataclass
class StackingEnsemble:
    forest: RandomForest
    svc: SvcModel
    logreg: LogRegModel
    meta: LogRegModel
    standardizer: Standardizer
    k_folds: int
    classes: tuple[EnvLabel, ...] = LABELS

    @property
    def meta_width(self) -> int:
        return len(BASE_MODELS) * len(self.classes)


def stratified_folds(labels, k: int, seed: int) -> np.ndarray:
    """Fold id per row. Each class is shuffled and dealt round-robin, continuing across classes."""
    y = np.asarray(labels, dtype=int)
    rng = np.random.default_rng(seed)
    fold = np.empty(len(y), dtype=int)
    offset = 0
    for c in np.unique(y):
        members = rng.permutation(np.flatnonzero(y == c))
        fold[members] = (offset + np.arange(len(members))) % k
        offset += len(members)
    return fold


def _base_params(params: StackingParams, seeds):
    forest_seed, svc_seed = seeds
    return (
        replace(params.forest, seed=forest_seed),
        replace(params.svc, seed=svc_seed),
    )


def _fit_bases(X, y, forest_params, svc_params, logreg_params):
    return (
        train_forest(X, y, forest_params),
        train_svc(X, y, svc_params),
        train_logreg(X, y, logreg_params),
    )


def base_probabilities(forest, svc, logreg, X) -> np.ndarray:
    """Meta-features: probability blocks in BASE_MODELS order."""
    return np.hstack([predict_forest(forest, X), predict_svc(svc, X), predict_logreg(logreg, X)])


def _class_indices(labels) -> np.ndarray:
    return np.array([int(EnvLabel(v)) - 1 for v in labels], dtype=int)


def train_stacking(rows, labels, params: StackingParams = StackingParams()) -> StackingEnsemble:
    """Train on training rows only. ``labels`` are EnvLabels or ranks 1..6."""
    X_raw = np.asarray(rows, dtype=float)
    y = _class_indices(labels)
    n = len(X_raw)
    if params.k_folds < 2:
        raise DomainError("k_folds must be >= 2")
    if params.k_folds > n:
        raise DomainError(f"k_folds={params.k_folds} exceeds the {n} training rows")
    standardizer = fit_standardizer(X_raw)
    X = standardizer.transform(X_raw)

    fold_seed, *model_seeds = derive_seeds(params.seed, 1 + 2 * (params.k_folds + 1))
    fold = stratified_folds(y, params.k_folds, fold_seed)
    meta_X = np.zeros((n, len(BASE_MODELS) * N_CLASSES))
    for k in range(params.k_folds):
        held = fold == k
        fp, sp = _base_params(params, model_seeds[2 * k: 2 * k + 2])
        bases = _fit_bases(X[~held], y[~held], fp, sp, params.logreg)
        meta_X[held] = base_probabilities(*bases, X[held])

    meta = train_logreg(meta_X, y, params.meta)
    fp, sp = _base_params(params, model_seeds[-2:])
    forest, svc, logreg = _fit_bases(X, y, fp, sp, params.logreg)
    return StackingEnsemble(forest, svc, logreg, meta, standardizer, params.k_folds)


def predict_stacking_proba(ensemble: StackingEnsemble, rows) -> np.ndarray:
    X = ensemble.standardizer.transform(np.atleast_2d(np.asarray(rows, dtype=float)))
    meta_X = base_probabilities(ensemble.forest, ensemble.svc, ensemble.logreg, X)
    return predict_logreg(ensemble.meta, meta_X)


def predict_stacking(ensemble: StackingEnsemble, rows):
    """Hard label(s) and probability vector(s); argmax ties go to the lowest rank."""
    single = np.ndim(rows) == 1
    proba = predict_stacking_proba(ensemble, rows)
    labels = [ensemble.classes[i] for i in np.argmax(proba, axis=1)]
    return (labels[0], proba[0]) if single else (labels, proba)
