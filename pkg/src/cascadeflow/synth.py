"""Synthetic data with known ground truth for validating the estimators.

All generators run on a fixed, documented PRNG (NumPy's PCG64 seeded
directly) with symbols drawn by integer sampling, so identical seeds give
identical output on every platform. The draw order inside each generator is
part of that contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cascade import CascadeTree, TweetRecord, write_tweet_file
from .discretize import DiscreteSeries

DEFAULT_EPOCH = 1_500_000_000


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class CoupledProcessSpec:
    """Source drives target: y[i+1] copies x[i] with probability ``coupling``."""

    coupling: float
    length: int
    seed: int
    alphabet_size: int = 3

    def __post_init__(self):
        if not 0.0 <= self.coupling <= 1.0:
            raise ValueError("coupling must lie in [0, 1]")
        if self.length < 2:
            raise ValueError("length must be >= 2")
        if self.alphabet_size != 3:
            raise ValueError("only the 3-symbol alphabet is supported")


def analytic_transfer_entropy(coupling: float) -> float:
    """Exact information flow of the coupled process at history length 1.

    The target's next symbol given the source's current symbol x puts mass
    coupling + (1 - coupling)/3 on x and (1 - coupling)/3 on the other two
    symbols, while its marginal stays uniform, so the flow is
    log2(3) - H(that conditional).
    """
    hit = coupling + (1.0 - coupling) / 3.0
    miss = (1.0 - coupling) / 3.0
    h = 0.0
    for p in (hit, miss, miss):
        if p > 0.0:
            h -= p * math.log2(p)
    return math.log2(3.0) - h


def coupled_markov(spec: CoupledProcessSpec) -> tuple[DiscreteSeries, DiscreteSeries]:
    """Generate (source, target); analytic_transfer_entropy gives the truth.

    Draw order: source symbols, target's first symbol, coupling coin flips,
    then the target's noise symbols.
    """
    rng = _rng(spec.seed)
    n = spec.length
    x = rng.integers(1, 4, size=n, dtype=np.int64)
    y = np.empty(n, dtype=np.int64)
    y[0] = rng.integers(1, 4)
    copy = rng.random(n - 1) < spec.coupling
    noise = rng.integers(1, 4, size=n - 1, dtype=np.int64)
    y[1:] = np.where(copy, x[:-1], noise)
    return DiscreteSeries(x, 1), DiscreteSeries(y, 1)


def iid_series(length: int, seed: int) -> DiscreteSeries:
    """Independent uniform symbols; the null against which flow is judged."""
    if length < 2:
        raise ValueError("length must be >= 2")
    return DiscreteSeries(_rng(seed).integers(1, 4, size=length, dtype=np.int64), 1)


def random_cascade(n_nodes: int, branching_bias: float, seed: int) -> CascadeTree:
    """Random tree: each node attaches to the most recent node with
    probability ``branching_bias`` (chains, high virality) or to a uniformly
    random earlier node (stars, low virality). Timestamps strictly increase.
    """
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    if not 0.0 <= branching_bias <= 1.0:
        raise ValueError("branching_bias must lie in [0, 1]")
    rng = _rng(seed)
    t = 0
    records = [TweetRecord("n0", None, None, 0, "u0", int(rng.integers(0, 1000)), "en", 0.0)]
    children: dict[str, list[str]] = {"n0": []}
    nodes = {"n0": records[0]}
    for i in range(1, n_nodes):
        t += int(rng.integers(1, 4))
        if rng.random() < branching_bias:
            parent = i - 1
        else:
            parent = int(rng.integers(0, i))
        rec = TweetRecord(
            f"n{i}", f"n{parent}", "n0", t, f"u{i}", int(rng.integers(0, 1000)), "en", 0.0
        )
        records.append(rec)
        nodes[rec.id] = rec
        children.setdefault(rec.id, [])
        children[f"n{parent}"].append(rec.id)
    return CascadeTree(records[0], children, nodes)


def planted_lag_symbols(length: int, lag: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Symbol pair where x drives y at exactly ``lag`` steps.

    x is IID uniform; y[j] = (x[j-1] + y[j-lag]) mod 3 on digits. Because
    y[j-lag] is uniform and independent of any shorter y-history, the flow
    x -> y is exactly zero for histories shorter than ``lag`` and saturates
    at log2(3) once the history covers it, so a sweep peaks at k = lag.
    """
    if lag < 1:
        raise ValueError("lag must be >= 1")
    if length <= lag:
        raise ValueError("length must exceed lag")
    rng = _rng(seed)
    dx = rng.integers(0, 3, size=length, dtype=np.int64)
    dy = np.empty(length, dtype=np.int64)
    dy[:lag] = rng.integers(0, 3, size=lag, dtype=np.int64)
    for j in range(lag, length):
        dy[j] = (dx[j - 1] + dy[j - lag]) % 3
    return dx + 1, dy + 1


def values_for_symbols(symbols, start: float = 0.0) -> np.ndarray:
    """A real series in (-1, 1) whose derivative-sign encoding is ``symbols``.

    Moves a quarter of the way toward the nearest bound for 3 (up) and 1
    (down) and repeats the value for 2, so every step has the exact required
    sign while staying inside the polarity range. Runs of one direction
    longer than ~100 would shrink steps below float resolution; that is
    rejected loudly rather than silently mis-encoded.
    """
    symbols = np.asarray(symbols, dtype=np.int64)
    out = np.empty(len(symbols) + 1)
    v = float(start)
    out[0] = v
    for i, s in enumerate(symbols):
        if s == 3:
            nxt = v + (1.0 - v) / 4.0
            if not nxt > v:
                raise ValueError("up-run too long to realize in float polarity")
            v = nxt
        elif s == 1:
            nxt = v - (v + 1.0) / 4.0
            if not nxt < v:
                raise ValueError("down-run too long to realize in float polarity")
            v = nxt
        elif s != 2:
            raise ValueError("symbols must lie in {1, 2, 3}")
        out[i + 1] = v
    return out


def write_planted_dataset(
    outdir,
    lag: int,
    n_bins: int,
    seed: int,
    bin_width_s: int = 1,
    planted_language: str = "es",
    noise_language: str = "en",
    start_epoch: int = DEFAULT_EPOCH,
) -> dict:
    """Write a tweets + transcript + config bundle with a planted coupling.

    The transcript's per-bin polarity realizes the driving symbol stream;
    tweets in ``planted_language`` realize the driven stream, one tweet per
    bin, while ``noise_language`` tweets carry an independent stream. All
    transcript events are kind "other", so the event-score channels stay
    degenerate and only the sentiment channel carries signal.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    x_sym, y_sym = planted_lag_symbols(n_bins - 1, lag, seed)
    z_sym = iid_series(n_bins - 1, seed + 797).symbols
    x_vals = values_for_symbols(x_sym)
    y_vals = values_for_symbols(y_sym)
    z_vals = values_for_symbols(z_sym)

    window_end = start_epoch + n_bins * bin_width_s - 1
    records = []
    for b in range(n_bins):
        created = start_epoch + b * bin_width_s
        records.append(
            TweetRecord(f"p{b}", None, None, created, f"up{b}", 0, planted_language, float(y_vals[b]))
        )
        records.append(
            TweetRecord(f"q{b}", None, None, created, f"uq{b}", 0, noise_language, float(z_vals[b]))
        )
    tweets_path = outdir / "tweets.csv"
    write_tweet_file(records, tweets_path)

    transcript_path = outdir / "transcript.txt"
    with open(transcript_path, "w") as fh:
        for b in range(n_bins):
            t = b * bin_width_s
            fh.write(f"{t // 60}|{t % 60}|A|other|synthetic commentary|{float(x_vals[b])!r}\n")

    boundary = n_bins // 2
    config_path = outdir / "pipeline.cfg"
    config_lines = [
        f"inputs.tweets = {tweets_path}",
        f"inputs.transcript = {transcript_path}",
        f"window.start_s = {start_epoch}",
        f"window.end_s = {window_end}",
        f"transcript.anchor_s = {start_epoch}",
        f"bins.dynamics_s = {bin_width_s}",
        f"bins.sentiment_s = {bin_width_s}",
        "k.dynamics.min = 1",
        "k.dynamics.max = 4",
        f"k.sentiment.min = 1",
        f"k.sentiment.max = {lag + 1}",
        f"segment.boundary_bin = {boundary}",
        f"languages = {planted_language},{noise_language},zz",
        "epsilon = 0.0",
    ]
    config_path.write_text("\n".join(config_lines) + "\n")
    return {
        "tweets": tweets_path,
        "transcript": transcript_path,
        "config": config_path,
        "lag": lag,
        "boundary_bin": boundary,
        "planted_language": planted_language,
        "noise_language": noise_language,
    }
