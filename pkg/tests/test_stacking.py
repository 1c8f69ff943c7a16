from dataclasses import replace

import numpy as np
import pytest

from enviroclass.dataset import SplitSpec, Standardizer, train_test_split
from enviroclass.errors import DomainError, ModelFormatError
from enviroclass.evaluation import accuracy
from enviroclass.labeler import EnvLabel
from enviroclass.ml import persist
from enviroclass.ml.forest import predict_forest
from enviroclass.ml.logreg import LogRegModel, predict_logreg
from enviroclass.ml.stacking import (StackingEnsemble, StackingParams, base_probabilities, predict_stacking,
                                     stratified_folds, train_stacking)
from enviroclass.ml.svc import predict_svc


@pytest.fixture(scope="module")
def trained(synthetic_600):
    train, test = train_test_split(synthetic_600, SplitSpec(0.8, 42))
    return train_stacking(train.rows, train.labels, StackingParams(seed=42)), train, test


def test_meta_width(trained):
    ens, _, _ = trained
    assert ens.meta_width == 18 and ens.meta.weights.shape == (6, 18)


def test_learns_labeler_function(trained):
    ens, _, test = trained
    labels, proba = predict_stacking(ens, test.rows)
    assert accuracy(labels, test.labels) >= 0.95
    np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-9)


def test_deterministic(trained, synthetic_600):
    ens, train, test = trained
    again = train_stacking(train.rows, train.labels, StackingParams(seed=42))
    np.testing.assert_array_equal(predict_stacking(ens, test.rows)[1], predict_stacking(again, test.rows)[1])


def test_meta_input_order(trained):
    ens, _, test = trained
    X = ens.standardizer.transform(test.rows[:5])
    meta_X = base_probabilities(ens.forest, ens.svc, ens.logreg, X)
    np.testing.assert_array_equal(meta_X[:, :6], predict_forest(ens.forest, X))
    np.testing.assert_array_equal(meta_X[:, 6:12], predict_svc(ens.svc, X))
    np.testing.assert_array_equal(meta_X[:, 12:], predict_logreg(ens.logreg, X))


def test_hand_composed_meta(trained):
    """A meta-learner that reads only the svc block follows the svc's preferred class."""
    ens, _, test = trained
    W = np.zeros((6, 18))
    W[:, 6:12] = 50 * np.eye(6)
    svc_only = replace(ens, meta=LogRegModel(W, np.zeros(6)))
    X = ens.standardizer.transform(test.rows)
    labels, _ = predict_stacking(svc_only, test.rows)
    assert [int(l) - 1 for l in labels] == predict_svc(ens.svc, X).argmax(axis=1).tolist()


def test_single_row_prediction(trained):
    ens, _, test = trained
    label, proba = predict_stacking(ens, test.rows[0])
    assert isinstance(label, EnvLabel) and proba.shape == (6,)


def test_argmax_tie_goes_to_lowest_rank(trained):
    ens, _, test = trained
    flat = replace(ens, meta=LogRegModel(np.zeros((6, 18)), np.zeros(6)))
    label, proba = predict_stacking(flat, test.rows[0])
    np.testing.assert_allclose(proba, 1 / 6)
    assert label is EnvLabel.GOOD


def test_k_folds_validation():
    with pytest.raises(DomainError):
        train_stacking(np.zeros((3, 2)), [1, 2, 3], StackingParams(k_folds=5))
    with pytest.raises(DomainError):
        train_stacking(np.zeros((3, 2)), [1, 2, 3], StackingParams(k_folds=1))


def test_stratified_folds_balanced():
    y = np.repeat(np.arange(6), 10)
    fold = stratified_folds(y, 5, 0)
    for c in range(6):
        assert np.bincount(fold[y == c], minlength=5).tolist() == [2] * 5


def test_persistence_round_trip(trained):
    ens, _, test = trained
    text = persist.dumps(ens, {"feature_names": ["a"]})
    loaded, meta = persist.loads(text)
    assert meta == {"feature_names": ["a"]}
    np.testing.assert_array_equal(predict_stacking(ens, test.rows)[1], predict_stacking(loaded, test.rows)[1])
    assert persist.dumps(loaded, meta) == text


def test_persistence_rejects_unknown_version(trained):
    doc = persist.ensemble_to_dict(trained[0])
    doc["format_version"] = 99
    with pytest.raises(ModelFormatError, match="format_version"):
        persist.ensemble_from_dict(doc)
    with pytest.raises(ModelFormatError):
        persist.loads("not json")
    with pytest.raises(ModelFormatError):
        persist.loads('{"format_version": 1}')


def test_standardizer_is_stored(trained):
    ens, train, _ = trained
    assert isinstance(ens.standardizer, Standardizer)
    np.testing.assert_allclose(ens.standardizer.mean, train.rows.mean(axis=0))
