"""End-to-end analyses: ingest, series construction, sweeps, plot data.

Everything here is deterministic: identical resolved config plus identical
input bytes produce byte-identical output trees (no clocks, no unordered
iteration, floats serialized by repr).
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .backend import active_backend
from .cascade import (
    CascadeTree,
    ForestReport,
    MetricSeries,
    METRICS,
    build_forest,
    follower_series,
    metric_series,
    read_tweet_file,
)
from .config import PipelineConfig
from .discretize import derivative_sign_encode
from .errors import ConfigError, InputError
from .events import (
    EventScoreSeries,
    TranscriptReport,
    read_transcript_file,
    score_events,
    write_event_series_csv,
)
from .sentiment import sentiment_series, transcript_sentiment_series
from .series import TimeSeries, write_series_csv
from .te import SweepResult, k_sweep, segment

DYNAMICS_SOURCES = ("team_a", "team_b", "combined", "followers")
ALL_LANGUAGES = "all"


@dataclass
class IngestResult:
    records: list
    n_read: int
    n_window_dropped: int
    window: tuple[int, int]
    forest: list[CascadeTree] = field(default_factory=list)
    forest_report: ForestReport | None = None
    events: list = field(default_factory=list)
    transcript_report: TranscriptReport | None = None


def ingest(cfg: PipelineConfig) -> IngestResult:
    """Read and window the inputs, build the forest, parse the transcript."""
    if cfg.tweets is None:
        raise InputError("cascade: inputs.tweets is not set")
    try:
        records = read_tweet_file(cfg.tweets, cfg.delimiter)
    except InputError as exc:
        raise InputError(f"cascade: {exc}") from None
    n_read = len(records)

    start = cfg.window_start_s
    end = cfg.window_end_s
    if start is None:
        start = min(r.created_at for r in records)
    if end is None:
        end = max(r.created_at for r in records)
    windowed = [r for r in records if start <= r.created_at <= end]
    n_dropped = n_read - len(windowed)
    if not windowed:
        raise InputError("cascade: no records inside the configured window")

    forest, forest_report = build_forest(windowed, cfg.orphan_policy)

    events = []
    transcript_report = None
    if cfg.transcript is not None:
        try:
            events, transcript_report = read_transcript_file(cfg.transcript)
        except InputError as exc:
            raise InputError(f"events: {exc}") from None

    return IngestResult(
        records=windowed,
        n_read=n_read,
        n_window_dropped=n_dropped,
        window=(start, end),
        forest=forest,
        forest_report=forest_report,
        events=events,
        transcript_report=transcript_report,
    )


@dataclass
class DynamicsResult:
    """k-sweep tables for every (metric, source) channel plus their series."""

    sweeps: dict[tuple[str, str], SweepResult]
    metric_series: dict[str, MetricSeries]
    source_series: dict[str, TimeSeries]
    event_series: EventScoreSeries


def run_dynamics_analysis(cfg: PipelineConfig, inputs: IngestResult | None = None) -> DynamicsResult:
    """TE sweeps from each event channel and the follower reference into
    each conversation metric, all on the dynamics bin axis."""
    inputs = inputs if inputs is not None else ingest(cfg)
    if not inputs.events:
        raise InputError("events: dynamics analysis requires inputs.transcript")
    start, end = inputs.window
    anchor = cfg.resolved_anchor_s()
    width = cfg.dynamics_bin_s

    metrics: dict[str, MetricSeries] = {
        m: metric_series(inputs.forest, m, width, cfg.fill_metrics, start, end) for m in METRICS
    }

    scored = score_events(
        inputs.events, cfg.rules, width, origin_s=start - anchor, end_s=end - anchor
    )
    rebase = lambda ts: TimeSeries(start, width, ts.values, ts.counts)
    sources: dict[str, TimeSeries] = {
        "team_a": rebase(scored.team_a),
        "team_b": rebase(scored.team_b),
        "combined": rebase(scored.combined),
        "followers": follower_series(inputs.forest, width, cfg.fill_metrics, start, end),
    }

    encoded_targets = {m: derivative_sign_encode(s, cfg.epsilon) for m, s in metrics.items()}
    encoded_sources = {n: derivative_sign_encode(s, cfg.epsilon) for n, s in sources.items()}

    k_min, k_max = cfg.k_dynamics
    sweeps: dict[tuple[str, str], SweepResult] = {}
    for m in METRICS:
        for name in DYNAMICS_SOURCES:
            sweeps[(m, name)] = k_sweep(
                encoded_sources[name],
                encoded_targets[m],
                k_min,
                k_max,
                mode="te",
                direction=(name, m),
                workers=cfg.workers,
            )
    scored_rebased = EventScoreSeries(
        sources["team_a"], sources["team_b"], sources["combined"], width, scored.n_out_of_range
    )
    return DynamicsResult(sweeps, metrics, sources, scored_rebased)


@dataclass
class SentimentCell:
    """One grid cell: a TTE sweep for (segment, language channel)."""

    segment: str
    language: str
    status: str  # ok | empty | degenerate
    sweep: SweepResult | None = None


@dataclass
class SentimentResult:
    cells: list[SentimentCell]
    transcript_series: TimeSeries
    tweet_series: dict[str, TimeSeries]
    segments: tuple[str, ...]


def run_sentiment_analysis(cfg: PipelineConfig, inputs: IngestResult | None = None) -> SentimentResult:
    """TTE sweeps from transcript sentiment into tweet sentiment, for the
    all-languages channel and each configured language, over the full window
    and (when a boundary is set) the before/after segments."""
    inputs = inputs if inputs is not None else ingest(cfg)
    if not inputs.events:
        raise InputError("events: sentiment analysis requires inputs.transcript")
    start, end = inputs.window
    anchor = cfg.resolved_anchor_s()
    width = cfg.sentiment_bin_s

    try:
        tr = transcript_sentiment_series(
            inputs.events, width, cfg.fill_sentiment, origin=start - anchor, end=end - anchor
        )
    except InputError as exc:
        raise InputError(f"sentiment: {exc}") from None
    transcript_ts = TimeSeries(start, width, tr.values, tr.counts)

    channels: dict[str, TimeSeries | None] = {}
    channel_names = [ALL_LANGUAGES] + list(cfg.languages)
    for name in channel_names:
        flt = None if name == ALL_LANGUAGES else name
        try:
            channels[name] = sentiment_series(
                inputs.records, width, flt, cfg.fill_sentiment, origin=start, end=end
            )
        except InputError:
            channels[name] = None  # no tweets for this language; cell stays empty

    n_bins = len(transcript_ts)
    segments: list[tuple[str, TimeSeries | None, dict[str, TimeSeries | None]]] = [
        ("full", transcript_ts, channels)
    ]
    if cfg.boundary_bin is not None:
        if not 1 <= cfg.boundary_bin < n_bins:
            raise ConfigError(
                f"segment.boundary_bin must lie in [1, {n_bins - 1}] for this window"
            )
        before: dict[str, TimeSeries | None] = {}
        after: dict[str, TimeSeries | None] = {}
        (tr_before, _), (tr_after, _) = segment((transcript_ts, transcript_ts), cfg.boundary_bin)
        for name, ts in channels.items():
            if ts is None:
                before[name] = after[name] = None
                continue
            (_, c_head), (_, c_tail) = segment((transcript_ts, ts), cfg.boundary_bin)
            before[name], after[name] = c_head, c_tail
        segments.append(("before", tr_before, before))
        segments.append(("after", tr_after, after))

    k_min, k_max = cfg.k_sentiment
    cells: list[SentimentCell] = []
    for seg_name, seg_tr, seg_channels in segments:
        src_sym = derivative_sign_encode(seg_tr, cfg.epsilon)
        for name in channel_names:
            ts = seg_channels[name]
            if ts is None:
                cells.append(SentimentCell(seg_name, name, "empty"))
                continue
            tgt_sym = derivative_sign_encode(ts, cfg.epsilon)
            sweep = k_sweep(
                src_sym,
                tgt_sym,
                k_min,
                k_max,
                mode="tte",
                direction=("transcript", name),
                workers=cfg.workers,
            )
            status = "degenerate" if sweep.degenerate else "ok"
            cells.append(SentimentCell(seg_name, name, status, sweep))

    return SentimentResult(
        cells=cells,
        transcript_series=transcript_ts,
        tweet_series={n: ts for n, ts in channels.items() if ts is not None},
        segments=tuple(s[0] for s in segments),
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def check_outdir(outdir) -> Path:
    """Fail fast (before any analysis) when the output directory is unusable."""
    out = Path(outdir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise InputError(f"output directory not writable: {out} ({exc})") from None
    return out


def emit_plot_data(
    outdir: Path,
    cfg: PipelineConfig,
    inputs: IngestResult,
    dynamics: DynamicsResult | None,
    sentiment: SentimentResult | None,
) -> dict:
    """Write plot-ready data files plus the run manifest; returns the manifest."""
    out = check_outdir(outdir)
    delim = cfg.delimiter
    written: list[Path] = []

    def record(path: Path) -> Path:
        written.append(path)
        return path

    (out / "resolved_config.txt").write_text(cfg.resolved_text())
    record(out / "resolved_config.txt")

    analyses_manifest: dict = {}

    if dynamics is not None:
        for m, series in dynamics.metric_series.items():
            path = record(out / f"metric_{m}.csv")
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, delimiter=delim)
                w.writerow(["bin_start_s", "value"])
                for t, v in zip(series.bin_starts(), series.values):
                    w.writerow([int(t), _fmt(v)])
        write_event_series_csv(record(out / "event_scores.csv"), dynamics.event_series, delim)
        write_series_csv(record(out / "follower_series.csv"), dynamics.source_series["followers"], delim)

        k_min, k_max = cfg.k_dynamics
        for m in METRICS:
            path = record(out / f"te_dynamics_{m}.csv")
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, delimiter=delim)
                w.writerow(["k"] + list(DYNAMICS_SOURCES))
                for i, k in enumerate(range(k_min, k_max + 1)):
                    row = [k] + [
                        _fmt(dynamics.sweeps[(m, s)].results[i].value_bits)
                        for s in DYNAMICS_SOURCES
                    ]
                    w.writerow(row)
        path = record(out / "dynamics_sweeps.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, delimiter=delim)
            w.writerow(
                ["metric", "source", "k", "value_bits", "n_samples", "undersampled", "degenerate"]
            )
            for m in METRICS:
                for s in DYNAMICS_SOURCES:
                    sweep = dynamics.sweeps[(m, s)]
                    for r in sweep.results:
                        w.writerow(
                            [m, s, r.k, _fmt(r.value_bits), r.n_samples,
                             int(r.undersampled), int(sweep.degenerate)]
                        )
        analyses_manifest["dynamics"] = [
            {
                "metric": m,
                "source": s,
                "mode": "te",
                "k_min": k_min,
                "k_max": k_max,
                "argmax_k": dynamics.sweeps[(m, s)].argmax_k,
                "max_value_bits": dynamics.sweeps[(m, s)].max_value_bits,
                "degenerate": dynamics.sweeps[(m, s)].degenerate,
                "below_noise_floor": dynamics.sweeps[(m, s)].below_noise_floor,
            }
            for m in METRICS
            for s in DYNAMICS_SOURCES
        ]

    if sentiment is not None:
        write_series_csv(record(out / "sentiment_transcript.csv"), sentiment.transcript_series, delim)
        for name, ts in sentiment.tweet_series.items():
            write_series_csv(record(out / f"sentiment_tweets_{name}.csv"), ts, delim)

        path = record(out / "tte_grid.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, delimiter=delim)
            w.writerow(["segment", "language", "status", "argmax_k", "max_tte_bits"])
            for cell in sentiment.cells:
                if cell.sweep is None:
                    w.writerow([cell.segment, cell.language, cell.status, "", ""])
                else:
                    w.writerow(
                        [cell.segment, cell.language, cell.status,
                         cell.sweep.argmax_k, _fmt(cell.sweep.max_value_bits)]
                    )
        path = record(out / "tte_curves.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, delimiter=delim)
            w.writerow(["segment", "language", "k", "tte_bits", "n_samples", "undersampled"])
            for cell in sentiment.cells:
                if cell.sweep is None:
                    continue
                for r in cell.sweep.results:
                    w.writerow(
                        [cell.segment, cell.language, r.k, _fmt(r.value_bits),
                         r.n_samples, int(r.undersampled)]
                    )
        analyses_manifest["sentiment"] = [
            {
                "segment": cell.segment,
                "language": cell.language,
                "status": cell.status,
                "mode": "tte",
                "k_min": cfg.k_sentiment[0],
                "k_max": cfg.k_sentiment[1],
                "argmax_k": None if cell.sweep is None else cell.sweep.argmax_k,
                "max_value_bits": None if cell.sweep is None else cell.sweep.max_value_bits,
            }
            for cell in sentiment.cells
        ]

    counts = {
        "records_read": inputs.n_read,
        "records_outside_window": inputs.n_window_dropped,
        "records_analyzed": len(inputs.records),
    }
    if inputs.forest_report is not None:
        fr = inputs.forest_report
        counts.update(
            {
                "roots": fr.n_roots,
                "orphans": fr.n_orphans,
                "edge_rejections": fr.n_edge_rejections,
                "promoted": fr.n_promoted,
                "dropped": fr.n_dropped,
                "cycle_breaks": fr.n_cycle_breaks,
            }
        )
    if inputs.transcript_report is not None:
        tr = inputs.transcript_report
        counts.update(
            {
                "transcript_events": tr.n_events,
                "transcript_malformed": tr.n_malformed,
                "transcript_unknown_kind": tr.n_unknown_kind,
            }
        )

    input_digests = {}
    if cfg.tweets is not None:
        input_digests["tweets"] = _sha256(cfg.tweets)
    if cfg.transcript is not None:
        input_digests["transcript"] = _sha256(cfg.transcript)

    manifest = {
        "version": __version__,
        "backend": active_backend(),
        "window": list(inputs.window),
        "config": cfg.resolved_items(),
        "inputs": input_digests,
        "counts": counts,
        "analyses": analyses_manifest,
        "outputs": {p.name: _sha256(p) for p in sorted(written)},
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def run_all(cfg: PipelineConfig, outdir) -> dict:
    """Full pipeline: ingest, configured analyses, plot data, manifest."""
    out = check_outdir(outdir)
    inputs = ingest(cfg)
    dynamics = run_dynamics_analysis(cfg, inputs) if "dynamics" in cfg.analyses else None
    sentiment = run_sentiment_analysis(cfg, inputs) if "sentiment" in cfg.analyses else None
    return emit_plot_data(out, cfg, inputs, dynamics, sentiment)
