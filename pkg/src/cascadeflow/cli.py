"""Command-line interface.

Commands: ingest, dynamics, sentiment, te, sweep, synth, run-all.
Exit codes: 0 success, 1 input error, 2 config error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import traceback
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .discretize import DiscreteSeries, derivative_sign_encode
from .errors import ConfigError, InputError
from .pipeline import (
    check_outdir,
    emit_plot_data,
    ingest,
    run_all,
    run_dynamics_analysis,
    run_sentiment_analysis,
)
from .series import read_series_csv, write_series_csv, TimeSeries
from .synth import (
    CoupledProcessSpec,
    analytic_transfer_entropy,
    coupled_markov,
    iid_series,
    random_cascade,
    write_planted_dataset,
)
from .te import k_sweep, segment, total_transfer_entropy, transfer_entropy
from .cascade import tree_records, write_tweet_file


def _load_config(args) -> PipelineConfig:
    if getattr(args, "config", None):
        return PipelineConfig.from_file(args.config)
    return PipelineConfig()


def _load_symbols(path, kind: str, epsilon: float, delimiter: str) -> DiscreteSeries:
    series = read_series_csv(path, delimiter)
    if kind == "auto":
        kind = "symbols" if np.isin(series.values, (1.0, 2.0, 3.0)).all() else "raw"
    if kind == "symbols":
        return DiscreteSeries(series.values.astype(np.int64), series.bin_width_s)
    return derivative_sign_encode(series, epsilon)


def _emit_table(rows: list[dict], path, fmt: str, delimiter: str) -> None:
    out = sys.stdout if path is None else open(path, "w", newline="")
    try:
        if fmt == "json":
            json.dump(rows, out, indent=2, sort_keys=True)
            out.write("\n")
        else:
            w = csv.writer(out, delimiter=delimiter)
            if rows:
                w.writerow(rows[0].keys())
                for row in rows:
                    w.writerow([repr(v) if isinstance(v, float) else v for v in row.values()])
    finally:
        if path is not None:
            out.close()


def _te_rows(results) -> list[dict]:
    return [
        {
            "k": r.k,
            "value_bits": r.value_bits,
            "n_samples": r.n_samples,
            "undersampled": int(r.undersampled),
        }
        for r in results
    ]


def cmd_ingest(args) -> int:
    cfg = _load_config(args)
    if args.tweets:
        cfg.tweets = args.tweets
    if args.transcript:
        cfg.transcript = args.transcript
    result = ingest(cfg)
    report = {
        "records_read": result.n_read,
        "records_outside_window": result.n_window_dropped,
        "records_analyzed": len(result.records),
        "window": list(result.window),
        "roots": result.forest_report.n_roots,
        "orphans": result.forest_report.n_orphans,
        "edge_rejections": result.forest_report.n_edge_rejections,
        "promoted": result.forest_report.n_promoted,
        "dropped": result.forest_report.n_dropped,
    }
    if result.transcript_report is not None:
        report["transcript_events"] = result.transcript_report.n_events
        report["transcript_malformed"] = result.transcript_report.n_malformed
        report["transcript_unknown_kind"] = result.transcript_report.n_unknown_kind
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = check_outdir(args.out)
        (out / "ingest_report.json").write_text(text)
    sys.stdout.write(text)
    return 0


def cmd_dynamics(args) -> int:
    cfg = _load_config(args)
    inputs = ingest(cfg)
    result = run_dynamics_analysis(cfg, inputs)
    emit_plot_data(check_outdir(args.out), cfg, inputs, result, None)
    return 0


def cmd_sentiment(args) -> int:
    cfg = _load_config(args)
    inputs = ingest(cfg)
    result = run_sentiment_analysis(cfg, inputs)
    emit_plot_data(check_outdir(args.out), cfg, inputs, None, result)
    return 0


def cmd_te(args) -> int:
    src = _load_symbols(args.source, args.input_kind, args.epsilon, args.delimiter)
    tgt = _load_symbols(args.target, args.input_kind, args.epsilon, args.delimiter)
    fn = total_transfer_entropy if args.mode == "tte" else transfer_entropy
    result = fn(src, tgt, args.k)
    _emit_table(_te_rows([result]), args.out, args.format, args.delimiter)
    return 0


def cmd_sweep(args) -> int:
    src = _load_symbols(args.source, args.input_kind, args.epsilon, args.delimiter)
    tgt = _load_symbols(args.target, args.input_kind, args.epsilon, args.delimiter)

    def table(s, t, label: str) -> list[dict]:
        sweep = k_sweep(s, t, args.k_min, args.k_max, mode=args.mode)
        rows = _te_rows(sweep.results)
        for row in rows:
            row["segment"] = label
            row["argmax_k"] = sweep.argmax_k
            row["degenerate"] = int(sweep.degenerate)
            row["below_noise_floor"] = int(sweep.below_noise_floor)
        return rows

    rows = table(src, tgt, "full")
    if args.boundary is not None:
        (s_head, t_head), (s_tail, t_tail) = segment((src, tgt), args.boundary)
        rows += table(s_head, t_head, "before")
        rows += table(s_tail, t_tail, "after")
    _emit_table(rows, args.out, args.format, args.delimiter)
    return 0


def cmd_synth(args) -> int:
    if args.generator == "coupled":
        spec = CoupledProcessSpec(args.coupling, args.length, args.seed)
        source, target = coupled_markov(spec)
        prefix = Path(args.out)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        for name, series in (("source", source), ("target", target)):
            ts = TimeSeries(0, 1, series.symbols.astype(float), np.ones(len(series), dtype=np.int64))
            write_series_csv(f"{prefix}.{name}.csv", ts)
        Path(f"{prefix}.analytic.txt").write_text(
            f"analytic_te_bits = {analytic_transfer_entropy(args.coupling)!r}\n"
        )
        return 0
    if args.generator == "iid":
        series = iid_series(args.length, args.seed)
        ts = TimeSeries(0, 1, series.symbols.astype(float), np.ones(len(series), dtype=np.int64))
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        write_series_csv(args.out, ts)
        return 0
    if args.generator == "cascade":
        tree = random_cascade(args.nodes, args.bias, args.seed)
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        write_tweet_file(tree_records(tree), args.out)
        return 0
    if args.generator == "planted":
        info = write_planted_dataset(args.out, args.lag, args.bins, args.seed)
        sys.stdout.write(f"config = {info['config']}\n")
        return 0
    raise ConfigError(f"unknown generator: {args.generator}")


def cmd_run_all(args) -> int:
    cfg = _load_config(args)
    run_all(cfg, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascadeflow",
        description="Conversation-cascade metrics and transfer-entropy analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--delimiter", default=",")
    common.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("ingest", parents=[common], help="validate inputs and report counts")
    p.add_argument("--tweets")
    p.add_argument("--transcript")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("dynamics", parents=[common], help="event -> metric TE sweeps")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_dynamics)

    p = sub.add_parser("sentiment", parents=[common], help="transcript -> tweet TTE grid")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_sentiment)

    te_common = argparse.ArgumentParser(add_help=False, parents=[common])
    te_common.add_argument("--source", required=True, help="two-column series file")
    te_common.add_argument("--target", required=True, help="two-column series file")
    te_common.add_argument("--epsilon", type=float, default=0.0)
    te_common.add_argument(
        "--input-kind",
        choices=("auto", "raw", "symbols"),
        default="auto",
        help="treat values as raw reals (encode first) or ready symbols",
    )
    te_common.add_argument("--out")

    p = sub.add_parser("te", parents=[te_common], help="single transfer-entropy estimate")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=("te", "tte"), default="te")
    p.set_defaults(fn=cmd_te)

    p = sub.add_parser("sweep", parents=[te_common], help="TE/TTE over a k range")
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--mode", choices=("te", "tte"), default="te")
    p.add_argument("--boundary", type=int, help="also sweep before/after this bin")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("synth", parents=[common], help="synthetic data generators")
    gen = p.add_subparsers(dest="generator", required=True)
    g = gen.add_parser("coupled", parents=[common])
    g.add_argument("--coupling", type=float, required=True)
    g.add_argument("--length", type=int, required=True)
    g.add_argument("--out", required=True, help="output path prefix")
    g = gen.add_parser("iid", parents=[common])
    g.add_argument("--length", type=int, required=True)
    g.add_argument("--out", required=True)
    g = gen.add_parser("cascade", parents=[common])
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--bias", type=float, default=0.5)
    g.add_argument("--out", required=True)
    g = gen.add_parser("planted", parents=[common])
    g.add_argument("--lag", type=int, required=True)
    g.add_argument("--bins", type=int, required=True)
    g.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("run-all", parents=[common], help="full pipeline")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_run_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 3


def entrypoint() -> None:
    sys.exit(main())
