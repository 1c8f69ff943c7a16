"""Held-out accuracy of each base learner on its own versus the stacked ensemble.

    python scripts/compare_base_models.py --rows 600 --seed 42
"""
import argparse

import numpy as np

from enviroclass.dataset import SplitSpec, attach_labels, fit_standardizer, impute_missing, join_by_state, train_test_split
from enviroclass.indices import compute_aqi, compute_wqi
from enviroclass.ingest import average_water_by_state
from enviroclass.ml.forest import ForestParams, predict_forest, train_forest
from enviroclass.ml.logreg import LogRegParams, predict_logreg, train_logreg
from enviroclass.ml.stacking import StackingParams, predict_stacking_proba, train_stacking
from enviroclass.ml.svc import SvcParams, predict_svc, train_svc
from enviroclass.synth import generate


def labeled(rows, seed):
    air, water = generate(rows, seed)
    aggregates = average_water_by_state(water)
    join = join_by_state(air, aggregates)
    wqi = {k: compute_wqi(v) for k, v in aggregates.items()}
    return impute_missing(attach_labels(join.matrix, [compute_aqi(r) for r in join.air], wqi))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=600)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--noise", type=float, default=0.0,
                    help="std of Gaussian noise added to standardized features (harder task)")
    args = ap.parse_args()

    train, test = train_test_split(labeled(args.rows, args.seed), SplitSpec(0.8, args.seed))
    rng = np.random.default_rng(args.seed)
    scale = train.rows.std(axis=0)
    Xtr = train.rows + rng.normal(scale=args.noise, size=train.rows.shape) * scale
    Xte = test.rows + rng.normal(scale=args.noise, size=test.rows.shape) * scale
    ytr, yte = train.label_ranks - 1, test.label_ranks - 1

    std = fit_standardizer(Xtr)
    Ztr, Zte = std.transform(Xtr), std.transform(Xte)
    models = {
        "forest": predict_forest(train_forest(Ztr, ytr, ForestParams(seed=args.seed)), Zte),
        "svc": predict_svc(train_svc(Ztr, ytr, SvcParams(seed=args.seed)), Zte),
        "logreg": predict_logreg(train_logreg(Ztr, ytr, LogRegParams()), Zte),
        "stacking": predict_stacking_proba(train_stacking(Xtr, train.labels, StackingParams(seed=args.seed)), Xte),
    }
    for name, proba in models.items():
        print(f"{name:9s} accuracy={np.mean(np.argmax(proba, axis=1) == yte):.4f}")


if __name__ == "__main__":
    main()
