"""Per-bin average sentiment series from tweet and transcript polarity.

Polarity is an input column (any analyzer producing compound scores in
[-1, 1] is compatible); this module only aggregates. The default fill policy
is hold_last: a silent bin repeats the last observed level, which the
derivative-sign encoder reads as "no change" rather than a fabricated swing,
with leading silence pinned to 0.
"""

from __future__ import annotations

import numpy as np

from .cascade import TweetRecord
from .errors import InputError
from .events import TranscriptEvent
from .series import TimeSeries, binned_mean


def sentiment_series(
    records: list[TweetRecord],
    bin_width_s: int,
    language_filter: str | None = None,
    fill: str = "hold_last",
    origin: int | None = None,
    end: int | None = None,
) -> TimeSeries:
    """Mean tweet polarity per bin, optionally restricted to one language.

    Raises InputError("empty selection") when the filter removes everything.
    fill="drop" removes silent bins and marks the series nonuniform, which
    the encoder refuses; use it only for inspection output.
    """
    if language_filter is not None:
        records = [r for r in records if r.language == language_filter]
    if not records:
        raise InputError("empty selection")
    times = np.array([r.created_at for r in records], dtype=np.int64)
    vals = np.array([r.polarity for r in records], dtype=np.float64)
    origin = int(times.min()) if origin is None else origin
    end = int(times.max()) if end is None else end
    return binned_mean(times, vals, origin, end, bin_width_s, fill)


def transcript_sentiment_series(
    events: list[TranscriptEvent],
    bin_width_s: int,
    fill: str = "hold_last",
    origin: int = 0,
    end: int | None = None,
) -> TimeSeries:
    """Mean per-line transcript polarity per bin.

    Lines without a polarity field carry no observation; if no line has one
    the input had no polarity column and InputError("no polarity") is raised.
    """
    scored = [e for e in events if e.polarity is not None]
    if not scored:
        raise InputError("no polarity")
    times = np.array([e.time_s for e in scored], dtype=np.int64)
    vals = np.array([e.polarity for e in scored], dtype=np.float64)
    if end is None:
        # the axis spans the whole transcript, including unscored lines
        end = max(e.time_s for e in events)
    return binned_mean(times, vals, origin, end, bin_width_s, fill)
