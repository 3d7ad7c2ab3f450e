"""Derivative-sign encoding of a real series onto the alphabet {1, 2, 3}."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DOWN, FLAT, UP = 1, 2, 3
ALPHABET = (DOWN, FLAT, UP)


@dataclass
class DiscreteSeries:
    """Symbol sequence over {1,2,3}; one symbol per first difference."""

    symbols: np.ndarray
    source_bin_width_s: int

    def __post_init__(self):
        self.symbols = np.asarray(self.symbols, dtype=np.int64)
        if self.source_bin_width_s < 1:
            raise ValueError("source_bin_width_s must be >= 1")
        if len(self.symbols) and not (
            self.symbols.min() >= DOWN and self.symbols.max() <= UP
        ):
            raise ValueError("symbols must lie in {1, 2, 3}")

    def __len__(self) -> int:
        return len(self.symbols)


def derivative_sign_encode(series, epsilon: float = 0.0) -> DiscreteSeries:
    """Map first differences to 3 (rising), 2 (flat within epsilon), 1 (falling).

    ``series`` may be a TimeSeries, a MetricSeries, or a plain value array.
    A difference d maps to 3 if d > epsilon, 1 if d < -epsilon, else 2.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if getattr(series, "uniform", True) is False:
        raise ValueError("nonuniform series")
    values = np.asarray(getattr(series, "values", series), dtype=np.float64)
    if values.ndim != 1 or len(values) < 2:
        raise ValueError("series too short")
    width = int(getattr(series, "bin_width_s", 1))
    d = np.diff(values)
    symbols = np.where(d > epsilon, UP, np.where(d < -epsilon, DOWN, FLAT))
    return DiscreteSeries(symbols, width)
