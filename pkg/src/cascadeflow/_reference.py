"""NumPy reference kernel for the plug-in transfer-entropy sum.

Same contract as the compiled module ``cascadeflow._accel``; this is the
fallback the backend selects when the extension is not built. Inputs are
base-3 digit arrays (values 0..2); all validation lives in cascadeflow.te.

Each sample j in [k, L) contributes one cell keyed

    key = hist(j) * 9 + src[j-1] * 3 + tgt[j]

with hist(j) = sum_{m=1..k} tgt[j-m] * 3**(m-1). The estimate is

    sum_cells (c/N) * log2( (c * C_h) / (C_nh * C_hs) )

summed in ascending key order, where C_h, C_nh, C_hs are the history,
(next, history) and (history, source) marginal counts of the cell.
"""

from __future__ import annotations

import numpy as np


def _run_sums(ids: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Per-entry group totals for an already-sorted id array."""
    starts = np.flatnonzero(np.r_[True, ids[1:] != ids[:-1]])
    sums = np.add.reduceat(counts, starts)
    reps = np.diff(np.r_[starts, len(ids)])
    return np.repeat(sums, reps)


def te_from_digits(src: np.ndarray, tgt: np.ndarray, k: int) -> tuple[float, int]:
    """Plug-in transfer entropy in bits and the sample count L - k."""
    src = np.ascontiguousarray(src, dtype=np.int64)
    tgt = np.ascontiguousarray(tgt, dtype=np.int64)
    length = len(tgt)
    n = length - k

    windows = np.lib.stride_tricks.sliding_window_view(tgt[: length - 1], k)
    powers = 3 ** np.arange(k - 1, -1, -1, dtype=np.int64)
    hist = windows @ powers
    keys = hist * 9 + src[k - 1 : length - 1] * 3 + tgt[k:]

    cells, counts = np.unique(keys, return_counts=True)

    c_h = _run_sums(cells // 9, counts)
    c_hs = _run_sums(cells // 3, counts)

    nh = (cells // 9) * 3 + cells % 3
    order = np.argsort(nh, kind="stable")
    c_nh = np.empty(len(cells), dtype=np.int64)
    c_nh[order] = _run_sums(nh[order], counts[order])

    # counts <= n and products <= n**2, safely inside int64 for any real input
    terms = (counts / n) * np.log2((counts * c_h) / (c_nh * c_hs))
    value = float(np.sum(terms))
    return (value if value > 0.0 else 0.0), n
