"""Plug-in transfer entropy over 3-symbol series.

Directed flow from a source series X into a target series Y is estimated as
the conditional mutual information, in bits, between Y's next symbol and X's
current symbol given the k most recent symbols of Y:

    T(X -> Y, k) = sum p(y_next, y_hist, x) * log2( p(y_next, y_hist, x) * p(y_hist)
                                                    / (p(y_next, y_hist) * p(y_hist, x)) )

with all probabilities taken as empirical frequencies over the L - k usable
positions and 0 * log(0) terms skipped. No bias correction is applied; the
raw maximum-likelihood value is reported, and results whose sample count is
small relative to the state space carry an ``undersampled`` flag instead.

Total transfer entropy is the net flow T(X -> Y) - T(Y -> X) at equal k; it
is antisymmetric by construction and may legitimately be negative.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .backend import kernel
from .discretize import DiscreteSeries
from .series import TimeSeries

# plug-in estimates below this are treated as estimator noise, not signal
NOISE_FLOOR_BITS = 0.01

# keys are packed into int64 as 3**(k+2) states
MAX_HISTORY = 37


def _as_symbols(series) -> np.ndarray:
    if isinstance(series, DiscreteSeries):
        return series.symbols
    arr = np.asarray(series, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("symbol series must be one-dimensional")
    if len(arr) and not (arr.min() >= 1 and arr.max() <= 3):
        raise ValueError("symbols must lie in {1, 2, 3}")
    return arr


@dataclass(frozen=True)
class TEResult:
    """A single transfer-entropy (or TTE) estimate."""

    value_bits: float
    k: int
    n_samples: int
    direction: tuple[str, str]

    @property
    def undersampled(self) -> bool:
        """True when the sample count is small against the cell count.

        The joint table has 3**(k+2) cells; below 10 samples per cell the
        raw plug-in value is dominated by estimation bias and should not be
        read as signal.
        """
        return self.n_samples < 10 * 3 ** (self.k + 2)


def transfer_entropy(source, target, k: int, *, direction=("source", "target")) -> TEResult:
    """Plug-in estimate of the information flow source -> target at history k.

    Both series must have equal length L with L - k >= 1. The estimate is
    nonnegative; tiny negative rounding residue is clamped to 0.
    """
    src = _as_symbols(source)
    tgt = _as_symbols(target)
    if len(src) != len(tgt):
        raise ValueError("source and target must have equal length")
    if k < 1:
        raise ValueError("history length k must be >= 1")
    if k > MAX_HISTORY:
        raise ValueError(f"history length k must be <= {MAX_HISTORY}")
    if len(tgt) - k < 1:
        raise ValueError("insufficient samples")
    value, n = kernel.te_from_digits(src - 1, tgt - 1, k)
    return TEResult(value, k, n, tuple(direction))


def total_transfer_entropy(x, y, k: int, *, direction=("x", "y")) -> TEResult:
    """Net flow T(x -> y) - T(y -> x) at the same history length."""
    forward = transfer_entropy(x, y, k)
    reverse = transfer_entropy(y, x, k)
    return TEResult(forward.value_bits - reverse.value_bits, k, forward.n_samples, tuple(direction))


@dataclass
class SweepResult:
    """k-sweep outcome: one TEResult per k plus the argmax summary."""

    mode: str
    results: list[TEResult]
    argmax_k: int
    max_value_bits: float
    degenerate: bool = False

    @property
    def below_noise_floor(self) -> bool:
        """True when even the maximum never rises above estimator noise."""
        return self.max_value_bits < NOISE_FLOOR_BITS


def k_sweep(
    source,
    target,
    k_min: int,
    k_max: int,
    mode: str = "te",
    *,
    direction=("source", "target"),
    workers: int = 1,
) -> SweepResult:
    """Evaluate TE or TTE for every k in [k_min, k_max].

    The argmax reported breaks ties toward the smallest k. Independent k
    values are evaluated concurrently when workers > 1; result order is by
    k regardless of completion order.
    """
    if not 1 <= k_min <= k_max:
        raise ValueError("need 1 <= k_min <= k_max")
    if mode not in ("te", "tte"):
        raise ValueError(f"unknown sweep mode: {mode!r}")
    src = _as_symbols(source)
    tgt = _as_symbols(target)
    estimator = transfer_entropy if mode == "te" else total_transfer_entropy

    def run(k: int) -> TEResult:
        return estimator(src, tgt, k, direction=direction)

    ks = range(k_min, k_max + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, ks))
    else:
        results = [run(k) for k in ks]

    best = max(range(len(results)), key=lambda i: (results[i].value_bits, -i))
    degenerate = len(np.unique(src)) < 2 or len(np.unique(tgt)) < 2
    return SweepResult(mode, results, results[best].k, results[best].value_bits, degenerate)


def _cut(series, boundary: int):
    if isinstance(series, TimeSeries):
        w = series.bin_width_s
        head = TimeSeries(
            series.origin, w, series.values[:boundary], series.counts[:boundary], series.uniform
        )
        tail = TimeSeries(
            series.origin + boundary * w,
            w,
            series.values[boundary:],
            series.counts[boundary:],
            series.uniform,
        )
        return head, tail
    if isinstance(series, DiscreteSeries):
        return (
            DiscreteSeries(series.symbols[:boundary], series.source_bin_width_s),
            DiscreteSeries(series.symbols[boundary:], series.source_bin_width_s),
        )
    arr = np.asarray(series)
    return arr[:boundary], arr[boundary:]


def segment(series_pair, boundary_bin: int):
    """Cut a pair of aligned series at a bin index.

    Returns ((a_before, b_before), (a_after, b_after)) with before covering
    bins [0, boundary) and after covering [boundary, end). Both members are
    cut identically; re-concatenating the pieces reproduces the originals.
    """
    a, b = series_pair
    length = len(a)
    if len(b) != length:
        raise ValueError("series pair must have equal length")
    if not 1 <= boundary_bin < length:
        raise ValueError("boundary_bin out of range")
    a_head, a_tail = _cut(a, boundary_bin)
    b_head, b_tail = _cut(b, boundary_bin)
    return (a_head, b_head), (a_tail, b_tail)


@dataclass
class JointHistogram:
    """Empirical counts over (target_next, target_history, source) cells."""

    counts: dict[tuple[int, tuple[int, ...], int], int]
    k: int
    n_samples: int


def joint_histogram(source, target, k: int) -> JointHistogram:
    """Readable (unoptimized) joint table; the kernels compute the same cells."""
    src = _as_symbols(source)
    tgt = _as_symbols(target)
    if len(src) != len(tgt):
        raise ValueError("source and target must have equal length")
    if k < 1 or len(tgt) - k < 1:
        raise ValueError("insufficient samples")
    counts: dict[tuple[int, tuple[int, ...], int], int] = {}
    sy = tgt.tolist()
    sx = src.tolist()
    for j in range(k, len(sy)):
        cell = (sy[j], tuple(sy[j - k : j]), sx[j - 1])
        counts[cell] = counts.get(cell, 0) + 1
    return JointHistogram(counts, k, len(sy) - k)
