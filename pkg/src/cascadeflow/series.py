"""Uniformly binned time series and the group-by-bin aggregation they share.

Every real-valued series in the package (tweet sentiment, transcript
sentiment, event scores, follower counts) is a :class:`TimeSeries`: a bin
origin, a bin width in seconds, per-bin values, and per-bin observation
counts. Bins with ``count == 0`` hold whatever the fill policy put there,
so consumers can always tell filled bins from observed ones.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import InputError

FILL_POLICIES = ("zero", "hold_last", "drop")


@dataclass
class TimeSeries:
    """A uniformly binned series of reals.

    origin is the epoch (or transcript-relative) second of the first bin's
    left edge; bin i covers [origin + i*bin_width_s, origin + (i+1)*bin_width_s).
    ``uniform`` is False only for series produced with fill="drop", which
    removes empty bins and therefore breaks the uniform spacing contract.
    """

    origin: int
    bin_width_s: int
    values: np.ndarray
    counts: np.ndarray
    uniform: bool = True

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.bin_width_s < 1:
            raise ValueError("bin_width_s must be >= 1")
        if self.values.shape != self.counts.shape:
            raise ValueError("values and counts must have equal length")

    def __len__(self) -> int:
        return len(self.values)

    def bin_starts(self) -> np.ndarray:
        return self.origin + self.bin_width_s * np.arange(len(self.values), dtype=np.int64)


def span_bins(origin: int, end: int, bin_width_s: int) -> int:
    """Number of bins covering the inclusive second range [origin, end]."""
    if end < origin:
        raise ValueError("end before origin")
    return -((end - origin + 1) // -bin_width_s)


def _fill_empty(means: np.ndarray, counts: np.ndarray, fill: str) -> tuple[np.ndarray, bool]:
    if fill == "zero":
        return np.where(counts > 0, means, 0.0), True
    if fill == "hold_last":
        idx = np.where(counts > 0, np.arange(len(means)), -1)
        np.maximum.accumulate(idx, out=idx)
        # leading empty bins have no previous value to hold; they get 0
        return np.where(idx >= 0, means[np.maximum(idx, 0)], 0.0), True
    if fill == "drop":
        return means[counts > 0], False
    raise ValueError(f"unknown fill policy: {fill!r}")


def binned_mean(
    times: np.ndarray,
    values: np.ndarray,
    origin: int,
    end: int,
    bin_width_s: int,
    fill: str = "zero",
) -> TimeSeries:
    """Mean of ``values`` grouped by the bin of ``times``; empties per ``fill``.

    All times must fall inside [origin, end]; callers window their data first.
    """
    times = np.asarray(times, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    if times.shape != values.shape:
        raise ValueError("times and values must have equal length")
    if len(times) and (times.min() < origin or times.max() > end):
        raise ValueError("observation outside [origin, end]")
    n = span_bins(origin, end, bin_width_s)
    idx = (times - origin) // bin_width_s
    counts = np.bincount(idx, minlength=n)
    sums = np.bincount(idx, weights=values, minlength=n)
    with np.errstate(invalid="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    filled, uniform = _fill_empty(means, counts, fill)
    kept_counts = counts if uniform else counts[counts > 0]
    return TimeSeries(origin, bin_width_s, filled, kept_counts, uniform)


def write_series_csv(path, series: TimeSeries, delimiter: str = ",") -> None:
    """Two-column (bin_start_s, value) text file."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter)
        w.writerow(["bin_start_s", "value"])
        for t, v in zip(series.bin_starts(), series.values):
            w.writerow([int(t), repr(float(v))])


def read_series_csv(path, delimiter: str = ",") -> TimeSeries:
    """Read a two-column series file back into a TimeSeries (counts unknown).

    The bin starts must be uniformly spaced; counts are set to 1 since the
    file format does not carry them.
    """
    starts: list[int] = []
    vals: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        header = next(reader, None)
        if header is None:
            raise InputError(f"{path}: empty series file")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise InputError(f"{path}:{lineno}: expected 2 columns")
            try:
                starts.append(int(float(row[0])))
                vals.append(float(row[1]))
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
    if not starts:
        raise InputError(f"{path}: no data rows")
    if len(starts) == 1:
        width = 1
    else:
        gaps = np.diff(starts)
        if gaps.min() != gaps.max() or gaps[0] <= 0:
            raise InputError(f"{path}: bin starts are not uniformly spaced")
        width = int(gaps[0])
    return TimeSeries(starts[0], width, np.asarray(vals), np.ones(len(vals), dtype=np.int64))
