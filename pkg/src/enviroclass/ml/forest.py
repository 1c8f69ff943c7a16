from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tree import N_CLASSES, DecisionTree, TreeParams, predict_tree, train_tree


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 10
    max_depth: int = 12
    min_samples_split: int = 2
    features_per_split: int | None = None  # None: ceil(sqrt(d))
    bootstrap: bool = True
    seed: int = 0


@dataclass
class RandomForest:
    trees: list[DecisionTree]
    tree_seeds: list[int]
    bootstrap_seeds: list[int]
    features_per_split: int
    bootstrap: bool = True
    n_classes: int = N_CLASSES
    params: ForestParams = field(default_factory=ForestParams)

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def derive_seeds(seed: int, n: int) -> list[int]:
    """``n`` independent 32-bit seeds derived from a master seed."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def train_forest(rows, labels, params: ForestParams = ForestParams(), n_classes: int = N_CLASSES) -> RandomForest:
    X = np.asarray(rows, dtype=float)
    y = np.asarray(labels, dtype=int)
    d = X.shape[1] if X.ndim == 2 else 0
    fps = params.features_per_split or max(1, math.ceil(math.sqrt(d)))
    seeds = derive_seeds(params.seed, 2 * params.n_trees)
    tree_seeds, boot_seeds = seeds[: params.n_trees], seeds[params.n_trees:]
    trees = []
    for tree_seed, boot_seed in zip(tree_seeds, boot_seeds):
        if params.bootstrap:
            idx = np.random.default_rng(boot_seed).integers(0, len(X), size=len(X))
            Xb, yb = X[idx], y[idx]
        else:
            Xb, yb = X, y
        tp = TreeParams(params.max_depth, params.min_samples_split, fps, tree_seed)
        trees.append(train_tree(Xb, yb, tp, n_classes))
    return RandomForest(trees, tree_seeds, boot_seeds, fps, params.bootstrap, n_classes, params)


def predict_forest(forest: RandomForest, rows) -> np.ndarray:
    """Mean of the trees' probability vectors."""
    return np.mean([predict_tree(t, rows) for t in forest.trees], axis=0)
