"""Flat ``key = value`` run configuration with ``#`` comments."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .dataset import SplitSpec
from .errors import ConfigError
from .ingest import DEFAULT_AIR_COLUMNS, DEFAULT_WATER_COLUMNS
from .ml.forest import ForestParams
from .ml.logreg import LogRegParams
from .ml.stacking import StackingParams
from .ml.svc import SvcParams


@dataclass
class RunConfig:
    air_csv: str = "air.csv"
    water_csv: str = "water.csv"
    out_dir: str = "out"
    train_fraction: float = 0.8
    seed: int = 42
    stratified: bool = True
    k_folds: int = 5
    n_trees: int = 10
    max_depth: int = 12
    min_samples_split: int = 2
    features_per_split: int = 0  # 0: ceil(sqrt(d))
    svc_lambda: float = 0.01
    svc_epochs: int = 40
    logreg_learning_rate: float = 0.5
    logreg_epochs: int = 500
    logreg_l2: float = 1e-3
    meta_learning_rate: float = 1.0
    meta_epochs: int = 1000
    meta_l2: float = 1e-3
    air_columns: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_AIR_COLUMNS))
    water_columns: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_WATER_COLUMNS))
    base_dir: str = "."

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ConfigError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        for name in ("k_folds", "n_trees", "svc_epochs", "min_samples_split"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.svc_lambda <= 0:
            raise ConfigError("svc_lambda must be > 0")

    def path(self, name: str) -> Path:
        p = Path(getattr(self, name))
        return p if p.is_absolute() else Path(self.base_dir) / p

    def split_spec(self) -> SplitSpec:
        return SplitSpec(self.train_fraction, self.seed, self.stratified)

    def stacking_params(self) -> StackingParams:
        return StackingParams(
            k_folds=self.k_folds,
            seed=self.seed,
            forest=ForestParams(
                n_trees=self.n_trees,
                max_depth=self.max_depth,
                min_samples_split=self.min_samples_split,
                features_per_split=self.features_per_split or None,
            ),
            svc=SvcParams(lam=self.svc_lambda, epochs=self.svc_epochs),
            logreg=LogRegParams(self.logreg_l2, self.logreg_learning_rate, self.logreg_epochs),
            meta=LogRegParams(self.meta_l2, self.meta_learning_rate, self.meta_epochs),
        )

    def items(self) -> list[tuple[str, str]]:
        """Echo of every setting as sorted ``(key, value)`` text pairs."""
        out = []
        for f in fields(self):
            if f.name in ("air_columns", "water_columns", "base_dir"):
                continue
            out.append((f.name, _fmt(getattr(self, f.name))))
        out += [(f"air.{k}", v) for k, v in self.air_columns.items()]
        out += [(f"water.{k}", v) for k, v in self.water_columns.items()]
        return sorted(out)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


_SCALARS = {f.name: f.type for f in fields(RunConfig) if f.name not in ("air_columns", "water_columns", "base_dir")}


def _convert(key: str, raw: str):
    kind = _SCALARS[key]
    try:
        if kind == "bool":
            if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return raw.lower() in ("true", "1", "yes")
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw


def parse_config(text: str, base_dir: str | os.PathLike = ".") -> RunConfig:
    values: dict = {"air_columns": dict(DEFAULT_AIR_COLUMNS), "water_columns": dict(DEFAULT_WATER_COLUMNS)}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key.startswith(("air.", "water.")):
            group, name = key.split(".", 1)
            columns = values[f"{group}_columns"]
            if name not in columns:
                raise ConfigError(f"line {lineno}: unknown {group} field {name!r}")
            columns[name] = raw
        elif key in _SCALARS:
            values[key] = _convert(key, raw)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return RunConfig(**values, base_dir=str(base_dir))


def load_config(path: str | os.PathLike) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror}") from None
    return parse_config(text, path.parent)


def render_config(cfg: RunConfig) -> str:
    return "".join(f"{k} = {v}\n" for k, v in cfg.items())
