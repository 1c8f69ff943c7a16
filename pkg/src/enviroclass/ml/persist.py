"""Versioned JSON serialisation of a trained StackingEnsemble."""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from ..dataset import Standardizer
from ..errors import ModelFormatError
from ..labeler import EnvLabel
from .forest import ForestParams, RandomForest
from .logreg import LogRegModel, LogRegParams
from .stacking import StackingEnsemble
from .svc import SvcModel, SvcParams
from .tree import DecisionTree

FORMAT_VERSION = 1


def _tree(t: DecisionTree) -> dict:
    return {
        "n_features": t.n_features,
        "feature": t.feature.tolist(),
        "threshold": t.threshold.tolist(),
        "left": t.left.tolist(),
        "right": t.right.tolist(),
        "counts": t.counts.tolist(),
    }


def _logreg(m: LogRegModel) -> dict:
    return {"params": m.params.__dict__, "weights": m.weights.tolist(), "bias": m.bias.tolist()}


def ensemble_to_dict(ens: StackingEnsemble, metadata: dict[str, Any] | None = None) -> dict:
    f = ens.forest
    return {
        "format_version": FORMAT_VERSION,
        "classes": [c.label for c in ens.classes],
        "k_folds": ens.k_folds,
        "metadata": metadata or {},
        "standardizer": {"mean": ens.standardizer.mean.tolist(), "std": ens.standardizer.std.tolist()},
        "forest": {
            "params": f.params.__dict__,
            "features_per_split": f.features_per_split,
            "bootstrap": f.bootstrap,
            "tree_seeds": f.tree_seeds,
            "bootstrap_seeds": f.bootstrap_seeds,
            "trees": [_tree(t) for t in f.trees],
        },
        "svc": {
            "params": ens.svc.params.__dict__,
            "weights": ens.svc.weights.tolist(),
            "bias": ens.svc.bias.tolist(),
            "loss_history": ens.svc.loss_history,
        },
        "logreg": _logreg(ens.logreg),
        "meta": _logreg(ens.meta),
    }


def dumps(ens: StackingEnsemble, metadata: dict[str, Any] | None = None) -> str:
    return json.dumps(ensemble_to_dict(ens, metadata), indent=1, sort_keys=True) + "\n"


def _arr(v, dtype=float):
    return np.array(v, dtype=dtype)


def ensemble_from_dict(doc: dict) -> StackingEnsemble:
    version = doc.get("format_version") if isinstance(doc, dict) else None
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format_version {version!r} (expected {FORMAT_VERSION})")
    try:
        fd = doc["forest"]
        trees = [
            DecisionTree(_arr(t["feature"], int), _arr(t["threshold"]), _arr(t["left"], int),
                         _arr(t["right"], int), _arr(t["counts"]), int(t["n_features"]))
            for t in fd["trees"]
        ]
        forest = RandomForest(trees, list(fd["tree_seeds"]), list(fd["bootstrap_seeds"]),
                              int(fd["features_per_split"]), bool(fd["bootstrap"]),
                              params=ForestParams(**fd["params"]))
        sd = doc["svc"]
        svc = SvcModel(_arr(sd["weights"]), _arr(sd["bias"]), SvcParams(**sd["params"]), list(sd["loss_history"]))
        logreg, meta = (
            LogRegModel(_arr(d["weights"]), _arr(d["bias"]), LogRegParams(**d["params"]))
            for d in (doc["logreg"], doc["meta"])
        )
        std = Standardizer(_arr(doc["standardizer"]["mean"]), _arr(doc["standardizer"]["std"]))
        classes = tuple(EnvLabel.from_label(c) for c in doc["classes"])
        return StackingEnsemble(forest, svc, logreg, meta, std, int(doc["k_folds"]), classes)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from None


def loads(text: str) -> tuple[StackingEnsemble, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"unreadable model file (format_version unknown): {exc}") from None
    ens = ensemble_from_dict(doc)
    return ens, doc.get("metadata", {})
