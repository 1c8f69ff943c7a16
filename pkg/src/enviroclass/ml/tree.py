"""CART classification tree grown by greedy weighted-Gini minimisation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

N_CLASSES = 6


@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 12
    min_samples_split: int = 2
    features_per_split: int | None = None  # None: all features
    seed: int = 0


@dataclass
class DecisionTree:
    """Flat node arrays. Leaves have ``feature == -1``; ``counts`` holds per-class training counts."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray
    n_features: int

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def depth(self) -> int:
        best, stack = 0, [(0, 0)]
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            if self.feature[node] >= 0:
                stack += [(self.left[node], d + 1), (self.right[node], d + 1)]
        return best


def gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return 1.0 - float(np.dot(p, p))


def _best_split_on_feature(x: np.ndarray, y_onehot: np.ndarray):
    """Lowest weighted Gini split on one feature. Returns (score, threshold) or None."""
    n = len(x)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    left = np.cumsum(y_onehot[order], axis=0)[:-1]  # left counts for sizes 1..n-1
    valid = xs[1:] > xs[:-1]
    if not valid.any():
        return None
    total = left[-1] + y_onehot[order[-1]]
    right = total - left
    n_left = np.arange(1, n, dtype=float)
    n_right = n - n_left
    # n_l * gini_l = n_l - sum(l^2)/n_l
    score = (n_left - (left ** 2).sum(axis=1) / n_left) + (n_right - (right ** 2).sum(axis=1) / n_right)
    score = np.where(valid, score, np.inf)
    i = int(np.argmin(score))
    lo, hi = xs[i], xs[i + 1]
    thr = lo + (hi - lo) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return float(score[i]) / n, float(thr)


def train_tree(rows, labels, params: TreeParams = TreeParams(), n_classes: int = N_CLASSES) -> DecisionTree:
    """Grow a tree on ``rows`` with integer class indices ``labels`` in ``[0, n_classes)``."""
    X = np.asarray(rows, dtype=float)
    y = np.asarray(labels, dtype=int)
    if X.ndim != 2 or len(X) == 0:
        raise DomainError("train_tree needs at least one row")
    if len(y) != len(X):
        raise DomainError("rows and labels differ in length")
    if y.min() < 0 or y.max() >= n_classes:
        raise DomainError("label outside class range")
    n, d = X.shape
    k = d if params.features_per_split is None else max(1, min(d, params.features_per_split))
    rng = np.random.default_rng(params.seed)
    onehot = np.eye(n_classes)[y]

    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(idx):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(onehot[idx].sum(axis=0))
        return len(feature) - 1

    stack = [(new_node(np.arange(n)), np.arange(n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        node_counts = counts[node]
        if depth >= params.max_depth or len(idx) < params.min_samples_split or np.count_nonzero(node_counts) <= 1:
            continue
        best = None
        order = rng.permutation(d)
        for j, f in enumerate(order):
            if j >= k and best is not None:
                break
            found = _best_split_on_feature(X[idx, f], onehot[idx])
            if found is not None and (best is None or found[0] < best[0]):
                best = (found[0], int(f), found[1])
        if best is None:
            continue
        _, f, thr = best
        go_left = X[idx, f] <= thr
        feature[node], threshold[node] = f, thr
        li, ri = idx[go_left], idx[~go_left]
        left[node] = new_node(li)
        right[node] = new_node(ri)
        # right pushed first so the left subtree is expanded first
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))

    return DecisionTree(
        feature=np.array(feature, dtype=int),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=int),
        right=np.array(right, dtype=int),
        counts=np.array(counts, dtype=float).reshape(len(feature), n_classes),
        n_features=d,
    )


def apply_tree(tree: DecisionTree, rows) -> np.ndarray:
    """Leaf index reached by each row."""
    X = np.atleast_2d(np.asarray(rows, dtype=float))
    if X.shape[1] != tree.n_features:
        raise DomainError(f"row width {X.shape[1]} != training width {tree.n_features}")
    node = np.zeros(len(X), dtype=int)
    active = tree.feature[node] >= 0
    while active.any():
        f = tree.feature[node[active]]
        go_left = X[active, f] <= tree.threshold[node[active]]
        node[active] = np.where(go_left, tree.left[node[active]], tree.right[node[active]])
        active = tree.feature[node] >= 0
    return node


def predict_tree(tree: DecisionTree, rows) -> np.ndarray:
    """Normalised leaf counts. A 1-D ``rows`` gives one vector, a 2-D one gives a matrix."""
    single = np.ndim(rows) == 1
    leaf_counts = tree.counts[apply_tree(tree, rows)]
    proba = leaf_counts / leaf_counts.sum(axis=1, keepdims=True)
    return proba[0] if single else proba
