"""``enviroclass`` command line: ingest, label, train, rank-features, predict, synth, dump-tables."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import RunConfig, load_config, render_config
from .csvio import (breakpoint_rows, fmt, label_table_rows, matrix_rows, probability_header, read_matrix,
                    record_rows, wqi_parameter_rows, write_rows)
from .errors import EnviroclassError, ModelFormatError
from .indices import POLLUTANTS, WATER_PARAMETERS
from .ingest import DEFAULT_AIR_COLUMNS, DEFAULT_WATER_COLUMNS
from .labeler import build_label_table
from .ml import persist
from .ml.stacking import predict_stacking
from .pipeline import (TrainResult, label_histogram, label_matrix, load_inputs, model_metadata, prepare_rows,
                       stage_counts, train)
from .synth import generate


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _out_dir(args, cfg: RunConfig | None = None) -> Path:
    if args.out:
        out = Path(args.out)
    elif cfg is not None:
        out = cfg.path("out_dir")
    else:
        out = Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _print_reports(inputs) -> None:
    for name, report in (("air", inputs.air_report), ("water", inputs.water_report)):
        d = report.as_dict()
        print(f"{name}: read={d['rows_read']} kept={d['rows_kept']} dropped={d['rows_dropped']}")
        for kind in ("missing", "unparseable", "out_of_range"):
            if d[kind]:
                print(f"{name}: {kind} " + " ".join(f"{k}={v}" for k, v in d[kind].items()))
    print(f"join: rows={len(inputs.join.matrix)} dropped_air_rows={inputs.join.dropped}")


def cmd_ingest(args) -> None:
    cfg = _config(args)
    inputs = load_inputs(cfg)
    out = _out_dir(args, cfg)
    write_rows(out / "joined.csv", matrix_rows(inputs.join.matrix))
    _print_reports(inputs)


def cmd_label(args) -> None:
    cfg = _config(args)
    inputs = load_inputs(cfg)
    labeled = label_matrix(inputs)
    out = _out_dir(args, cfg)
    write_rows(out / "labeled.csv", matrix_rows(labeled, with_labels=True))
    hist = label_histogram(labeled)
    print("labels: " + " ".join(f"{k}={v}" for k, v in hist.items()))


def render_report(cfg: RunConfig, inputs, result: TrainResult) -> str:
    lines = ["# enviroclass run report", f"tool_version={__version__}", f"seed={cfg.seed}"]
    lines += [f"config.{k}={v}" for k, v in cfg.items()]
    lines += [f"input.{k}.sha256={v}" for k, v in sorted(inputs.digests.items())]
    lines += [f"stage.{k}={v}" for k, v in stage_counts(inputs, result)]
    lines += [f"label_histogram.{k}={v}" for k, v in label_histogram(result.labeled).items()]
    lines.append(f"n_trees={result.ensemble.forest.n_trees}")
    lines.append(f"test_accuracy={fmt(result.accuracy)}")
    lines.append("[confusion]")
    if result.confusion is not None:
        lines += [",".join(r) for r in result.confusion.to_rows()]
    lines.append("[ranking]")
    lines += [",".join(r) for r in ranking_rows(result.ranking)]
    return "\n".join(lines) + "\n"


def ranking_rows(ranking):
    yield ["feature", "r", "computable"]
    for f in ranking:
        yield [f.name, fmt(f.r), "true" if f.computable else "false"]


def cmd_train(args) -> None:
    cfg = _config(args)
    inputs = load_inputs(cfg)
    result = train(cfg, inputs)
    out = _out_dir(args, cfg)
    (out / "model.json").write_text(persist.dumps(result.ensemble, model_metadata(result)), encoding="utf-8")
    header = ["state", "label", *probability_header(), "actual"]
    rows = [
        [s, p.label, *(fmt(v) for v in proba), a.label]
        for s, p, proba, a in zip(result.test.states, result.predicted, result.probabilities, result.test.labels)
    ]
    write_rows(out / "test_predictions.csv", [header, *rows])
    if result.confusion is not None:
        write_rows(out / "confusion.csv", result.confusion.to_rows())
    write_rows(out / "ranking.csv", ranking_rows(result.ranking))
    (out / "report.txt").write_text(render_report(cfg, inputs, result), encoding="utf-8")
    print(f"train={len(result.train)} test={len(result.test)} test_accuracy={fmt(result.accuracy)}")


def cmd_rank_features(args) -> None:
    from .dataset import impute_missing
    from .evaluation import rank_features

    cfg = _config(args)
    labeled = label_matrix(load_inputs(cfg))
    ranking = rank_features(impute_missing(labeled))
    out = _out_dir(args, cfg)
    write_rows(out / "ranking.csv", ranking_rows(ranking))
    for f in ranking:
        print(f"{f.name}: {fmt(f.r) if f.computable else 'not computable'}")


def cmd_predict(args) -> None:
    try:
        text = Path(args.model).read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise ModelFormatError("unreadable model file (format_version unknown)") from None
    ensemble, meta = persist.loads(text)
    names = meta.get("feature_names")
    if not names:
        raise ModelFormatError("model file lacks feature_names metadata")
    matrix = read_matrix(args.input, names)
    header = ["state", "label", *probability_header()]
    rows = []
    if len(matrix):
        labels, proba = predict_stacking(ensemble, prepare_rows(matrix, meta["impute_means"]))
        rows = [[s, lab.label, *(fmt(v) for v in p)] for s, lab, p in zip(matrix.states, labels, proba)]
    out = _out_dir(args)
    write_rows(out / "predictions.csv", [header, *rows])
    print(f"predicted {len(rows)} rows -> {out / 'predictions.csv'}")


def cmd_synth(args) -> None:
    seed = 42 if args.seed is None else args.seed
    air, water = generate(args.rows, seed)
    out = _out_dir(args)
    write_rows(out / "air.csv", record_rows(air, DEFAULT_AIR_COLUMNS, POLLUTANTS))
    write_rows(out / "water.csv", record_rows(water, DEFAULT_WATER_COLUMNS, WATER_PARAMETERS))
    cfg = RunConfig(seed=seed, out_dir="run")
    (out / "enviroclass.cfg").write_text("# synthetic run\n" + render_config(cfg), encoding="utf-8")
    print(f"wrote {len(air)} air rows, {len(water)} water rows to {out}")


def cmd_dump_tables(args) -> None:
    tables = {
        "aqi_breakpoints.csv": list(breakpoint_rows()),
        "wqi_parameters.csv": list(wqi_parameter_rows()),
        "label_table.csv": list(label_table_rows(build_label_table())),
    }
    if args.out:
        out = _out_dir(args)
        for name, rows in tables.items():
            write_rows(out / name, rows)
        return
    for name, rows in tables.items():
        print(f"# {name}")
        for r in rows:
            print(",".join(r))


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", metavar="PATH", default=default, help="key = value run configuration")
    parser.add_argument("--out", metavar="DIR", default=default, help="output directory")
    parser.add_argument("--seed", type=int, metavar="N", default=default, help="overrides the config seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enviroclass", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    add("ingest", cmd_ingest, "parse both datasets and write the state-joined feature table")
    add("label", cmd_label, "write the joined table with environment labels")
    add("train", cmd_train, "train the stacking ensemble and write model + report")
    add("rank-features", cmd_rank_features, "Pearson ranking of features against label rank")
    p = add("predict", cmd_predict, "predict labels for a state,<features...> CSV")
    p.add_argument("model")
    p.add_argument("input")
    p = add("synth", cmd_synth, "generate synthetic air/water CSVs")
    p.add_argument("--rows", type=int, default=600)
    add("dump-tables", cmd_dump_tables, "AQI breakpoints, WQI parameters and the label table as CSV")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except EnviroclassError as exc:
        print(f"error:{exc.category}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error:io: no such file: {exc.filename}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error:io: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
