"""End-to-end orchestration shared by the CLI commands."""
from __future__ import annotations

import hashlib
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import RunConfig
from .dataset import FeatureMatrix, JoinResult, attach_labels, column_means, impute_missing, join_by_state, train_test_split
from .evaluation import ConfusionMatrix, RankedFeature, accuracy, confusion, rank_features
from .indices import WqiResult, compute_aqi, compute_wqi
from .ingest import ParseReport, average_water_by_state, parse_air_csv, parse_water_csv
from .labeler import LABELS, EnvLabel
from .ml.stacking import StackingEnsemble, predict_stacking, train_stacking


@dataclass
class Inputs:
    air_report: ParseReport
    water_report: ParseReport
    join: JoinResult
    wqi: dict[str, WqiResult]
    digests: dict[str, str]


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def load_inputs(cfg: RunConfig) -> Inputs:
    air_path, water_path = cfg.path("air_csv"), cfg.path("water_csv")
    for p in (air_path, water_path):
        if not p.is_file():
            raise FileNotFoundError(2, "No such file", str(p))
    with ThreadPoolExecutor(max_workers=2) as pool:
        air_job = pool.submit(parse_air_csv, air_path, cfg.air_columns)
        water_job = pool.submit(parse_water_csv, water_path, cfg.water_columns)
        air, air_report = air_job.result()
        water, water_report = water_job.result()
    aggregates = average_water_by_state(water)
    join = join_by_state(air, aggregates)
    wqi = {k: compute_wqi(v) for k, v in aggregates.items()}
    return Inputs(air_report, water_report, join, wqi,
                  {"air_csv": sha256(air_path), "water_csv": sha256(water_path)})


def label_matrix(inputs: Inputs) -> FeatureMatrix:
    join = inputs.join
    aqi = [compute_aqi(r) for r in join.air]
    return attach_labels(join.matrix, aqi, inputs.wqi)


@dataclass
class TrainResult:
    ensemble: StackingEnsemble
    feature_names: tuple[str, ...]
    impute_means: np.ndarray
    labeled: FeatureMatrix
    train: FeatureMatrix
    test: FeatureMatrix
    predicted: list[EnvLabel]
    probabilities: np.ndarray
    accuracy: float | None
    confusion: ConfusionMatrix | None
    ranking: list[RankedFeature]


def train(cfg: RunConfig, inputs: Inputs) -> TrainResult:
    labeled = label_matrix(inputs)
    full = impute_missing(labeled)
    means = column_means(full)
    train_m, test_m = train_test_split(full, cfg.split_spec())
    ensemble = train_stacking(train_m.rows, train_m.labels, cfg.stacking_params())
    if len(test_m):
        predicted, proba = predict_stacking(ensemble, test_m.rows)
        acc = accuracy(predicted, test_m.labels)
        cm = confusion(predicted, test_m.labels)
    else:
        predicted, proba, acc, cm = [], np.zeros((0, len(LABELS))), None, None
    return TrainResult(ensemble, full.feature_names, means, labeled, train_m, test_m,
                       list(predicted), proba, acc, cm, rank_features(full))


def model_metadata(result: TrainResult) -> dict:
    return {
        "tool_version": __version__,
        "feature_names": list(result.feature_names),
        "impute_means": result.impute_means.tolist(),
    }


def prepare_rows(matrix: FeatureMatrix, impute_means) -> np.ndarray:
    """Fill missing cells with the training means stored in the model."""
    return np.where(np.isnan(matrix.rows), np.asarray(impute_means, dtype=float), matrix.rows)


def stage_counts(inputs: Inputs, result: TrainResult | None = None) -> list[tuple[str, str]]:
    out = [
        ("air_rows_read", inputs.air_report.rows_read),
        ("air_rows_kept", inputs.air_report.rows_kept),
        ("air_rows_dropped", inputs.air_report.rows_dropped),
        ("water_rows_read", inputs.water_report.rows_read),
        ("water_rows_kept", inputs.water_report.rows_kept),
        ("water_rows_dropped", inputs.water_report.rows_dropped),
        ("water_states", len(inputs.wqi)),
        ("joined_rows", len(inputs.join.matrix)),
        ("join_dropped_air_rows", inputs.join.dropped),
    ]
    if result is not None:
        out += [
            ("features", ",".join(result.feature_names)),
            ("train_rows", len(result.train)),
            ("test_rows", len(result.test)),
        ]
    return [(k, str(v)) for k, v in out]


def label_histogram(matrix: FeatureMatrix) -> dict[str, int]:
    counts = Counter(matrix.labels or ())
    return {c.label: counts.get(c, 0) for c in LABELS}

