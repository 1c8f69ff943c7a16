
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from enviroclass.errors import DomainError
from enviroclass.ml.forest import ForestParams, predict_forest, train_forest
from enviroclass.ml.tree import TreeParams, apply_tree, predict_tree, train_tree


def brute_force_root(X, y, k=6):
    """Lowest weighted Gini over every feature and every midpoint between distinct values."""
    def gini(labels):
        if len(labels) == 0:
            return 0.0
        p = np.bincount(labels, minlength=k) / len(labels)
        return 1 - (p ** 2).sum()

    best = np.inf
    for f in range(X.shape[1]):
        vals = np.unique(X[:, f])
        for a, b in zip(vals, vals[1:]):
            t = (a + b) / 2
            left, right = y[X[:, f] <= t], y[X[:, f] > t]
            best = min(best, (len(left) * gini(left) + len(right) * gini(right)) / len(y))
    return best


def tree_root_score(tree, X, y):
    left = y[X[:, tree.feature[0]] <= tree.threshold[0]]
    right = y[X[:, tree.feature[0]] > tree.threshold[0]]
    g = lambda c: 1 - ((c / c.sum()) ** 2).sum() if c.sum() else 0.0  # noqa: E731
    cl, cr = np.bincount(left, minlength=6), np.bincount(right, minlength=6)
    return (len(left) * g(cl) + len(right) * g(cr)) / len(y)


def test_single_class_is_single_leaf():
    tree = train_tree(np.arange(5.0).reshape(-1, 1), [2] * 5)
    assert tree.n_nodes == 1
    np.testing.assert_array_equal(predict_tree(tree, [0.0]), np.eye(6)[2])


def test_four_point_split():
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    y = np.array([0, 0, 1, 1])
    tree = train_tree(X, y)
    assert 2.0 < tree.threshold[0] < 3.0
    assert (predict_tree(tree, X).argmax(axis=1) == y).all()


def test_depth_zero_is_majority_leaf():
    tree = train_tree(np.arange(4.0).reshape(-1, 1), [1, 1, 1, 4], TreeParams(max_depth=0))
    assert tree.n_nodes == 1
    np.testing.assert_allclose(predict_tree(tree, [9.0]), [0, 0.75, 0, 0, 0.25, 0])


def test_leaf_proportions():
    # identical rows cannot be separated, so the leaf keeps counts 3:1
    tree = train_tree(np.zeros((4, 1)), [0, 0, 0, 1])
    np.testing.assert_allclose(predict_tree(tree, [0.0])[:2], [0.75, 0.25])


def test_empty_input_rejected():
    with pytest.raises(DomainError):
        train_tree(np.zeros((0, 2)), [])


def test_width_mismatch_rejected():
    tree = train_tree(np.eye(3), [0, 1, 2])
    with pytest.raises(DomainError):
        predict_tree(tree, [1.0, 2.0])


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.tuples(st.integers(2, 12), st.integers(1, 3)), elements=st.integers(0, 5).map(float)),
       st.data())
def test_root_split_matches_brute_force(X, data):
    y = np.array(data.draw(st.lists(st.integers(0, 5), min_size=len(X), max_size=len(X))))
    tree = train_tree(X, y, TreeParams(max_depth=1))
    oracle = brute_force_root(X, y)
    if tree.n_nodes == 1:
        assert oracle == np.inf or len(np.unique(y)) == 1
    else:
        assert tree_root_score(tree, X, y) == pytest.approx(oracle, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 30), st.integers(1, 4)), elements=st.floats(-10, 10)), st.data())
def test_tree_invariants(X, data):
    y = np.array(data.draw(st.lists(st.integers(0, 5), min_size=len(X), max_size=len(X))))
    tree = train_tree(X, y, TreeParams(features_per_split=2, seed=data.draw(st.integers(0, 100))))
    internal = tree.feature >= 0
    assert ((tree.left[internal] > 0) & (tree.right[internal] > 0)).all()
    assert np.isfinite(tree.threshold[internal]).all()
    leaves = apply_tree(tree, X)
    for leaf in np.unique(leaves):
        np.testing.assert_array_equal(tree.counts[leaf], np.bincount(y[leaves == leaf], minlength=6))
    proba = predict_tree(tree, X)
    np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-9)


def test_forest_has_ten_trees_by_default():
    X = np.random.default_rng(0).normal(size=(40, 3))
    forest = train_forest(X, (X[:, 0] > 0).astype(int))
    assert forest.n_trees == 10 and forest.features_per_split == 2


def test_forest_of_one_without_bootstrap_equals_tree():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(60, 5))
    y = rng.integers(0, 6, size=60)
    forest = train_forest(X, y, ForestParams(n_trees=1, bootstrap=False, seed=5))
    tree = train_tree(X, y, TreeParams(12, 2, forest.features_per_split, forest.tree_seeds[0]))
    probe = rng.normal(size=(200, 5))
    np.testing.assert_array_equal(predict_forest(forest, probe), predict_tree(tree, probe))


def test_forest_deterministic():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(50, 4))
    y = rng.integers(0, 6, size=50)
    a = train_forest(X, y, ForestParams(seed=11))
    b = train_forest(X, y, ForestParams(seed=11))
    probe = rng.normal(size=(30, 4))
    np.testing.assert_array_equal(predict_forest(a, probe), predict_forest(b, probe))
    assert a.tree_seeds == b.tree_seeds


def test_forest_is_mean_of_trees():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(30, 2))
    y = rng.integers(0, 3, size=30)
    forest = train_forest(X, y, ForestParams(n_trees=2, seed=4))
    row = np.array([0.1, -0.2])
    by_hand = (predict_tree(forest.trees[0], row) + predict_tree(forest.trees[1], row)) / 2
    np.testing.assert_allclose(predict_forest(forest, row), by_hand)
    assert predict_forest(forest, row).shape == (6,)
