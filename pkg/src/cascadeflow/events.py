"""Game-transcript parsing and the event-score series it induces.

Transcript lines carry one event each: ``minute|offset_s|team|kind|text``
with an optional sixth polarity field. Scoring turns events into per-team
series via a rule table: each event adds an actor score to its own team's
bin and an opponent score to the other team's, at second
``minute * 60 + offset_s``. The default rules are antisymmetric, so the two
team series mirror each other exactly; the combined series sums absolute
contributions per event and therefore measures event intensity regardless
of which side benefited.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InputError
from .series import TimeSeries, span_bins

KINDS = ("foul", "saved_goal", "goal", "yellow_card", "other")
TEAMS = ("A", "B")

# (actor_score, opponent_score); saved_goal's actor is the attacking team
DEFAULT_RULES: dict[str, tuple[float, float]] = {
    "foul": (-0.5, 0.5),
    "saved_goal": (0.5, -0.5),
    "goal": (10.0, -10.0),
    "yellow_card": (-3.0, 3.0),
    "other": (0.0, 0.0),
}


@dataclass(frozen=True)
class TranscriptEvent:
    minute: int
    offset_s: int
    team: str
    kind: str
    text: str
    polarity: float | None = None

    @property
    def time_s(self) -> int:
        return self.minute * 60 + self.offset_s


@dataclass
class EventRuleSet:
    """Per-kind (actor, opponent) scores; kind \"other\" is pinned to zero."""

    scores: dict[str, tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_RULES)
    )

    def __post_init__(self):
        for kind in KINDS:
            if kind not in self.scores:
                raise ConfigError(f"rule set missing kind: {kind}")
        if self.scores["other"] != (0.0, 0.0):
            raise ConfigError('kind "other" must score (0, 0)')

    @classmethod
    def with_overrides(cls, overrides: dict[str, float]) -> "EventRuleSet":
        """Apply ``rule.<kind>.actor`` / ``rule.<kind>.opponent`` entries."""
        scores = dict(DEFAULT_RULES)
        for key, value in overrides.items():
            parts = key.split(".")
            if len(parts) != 3 or parts[0] != "rule" or parts[2] not in ("actor", "opponent"):
                raise ConfigError(f"malformed rule override: {key}")
            kind = parts[1]
            if kind not in KINDS or kind == "other":
                raise ConfigError(f"cannot override rule for kind: {kind}")
            actor, opponent = scores[kind]
            if parts[2] == "actor":
                scores[kind] = (float(value), opponent)
            else:
                scores[kind] = (actor, float(value))
        return cls(scores)


@dataclass
class TranscriptReport:
    n_lines: int = 0
    n_events: int = 0
    n_unknown_kind: int = 0
    malformed: list[tuple[int, str]] = field(default_factory=list)

    @property
    def n_malformed(self) -> int:
        return len(self.malformed)


def parse_transcript(text: str) -> tuple[list[TranscriptEvent], TranscriptReport]:
    """Parse transcript text; malformed lines are reported, not fatal.

    Blank lines and lines starting with ``#`` are skipped. An unrecognized
    kind token degrades to kind "other" (score 0) and is counted. Raises
    InputError when no line parses at all.
    """
    events: list[TranscriptEvent] = []
    report = TranscriptReport()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        report.n_lines += 1
        parts = line.split("|")
        if len(parts) < 5:
            report.malformed.append((lineno, "expected minute|offset_s|team|kind|text"))
            continue
        try:
            minute = int(parts[0])
            offset_s = int(parts[1])
        except ValueError:
            report.malformed.append((lineno, "minute and offset_s must be integers"))
            continue
        if minute < 0 or offset_s < 0:
            report.malformed.append((lineno, "negative time"))
            continue
        team = parts[2].strip().upper()
        if team not in TEAMS:
            report.malformed.append((lineno, f"team must be one of {TEAMS}"))
            continue
        kind = parts[3].strip()
        if kind not in KINDS:
            report.n_unknown_kind += 1
            kind = "other"
        polarity = None
        if len(parts) >= 6 and parts[5].strip():
            try:
                polarity = float(parts[5])
            except ValueError:
                report.malformed.append((lineno, "polarity must be a real number"))
                continue
            if not -1.0 <= polarity <= 1.0:
                report.malformed.append((lineno, "polarity outside [-1, 1]"))
                continue
        events.append(TranscriptEvent(minute, offset_s, team, kind, parts[4], polarity))
        report.n_events += 1
    if not events:
        raise InputError("empty transcript")
    return events, report


def read_transcript_file(path) -> tuple[list[TranscriptEvent], TranscriptReport]:
    with open(path) as fh:
        text = fh.read()
    try:
        return parse_transcript(text)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


@dataclass
class EventScoreSeries:
    """Per-team and combined score series on a shared bin axis."""

    team_a: TimeSeries
    team_b: TimeSeries
    combined: TimeSeries
    bin_width_s: int
    n_out_of_range: int = 0


def score_events(
    events: list[TranscriptEvent],
    rules: EventRuleSet | None = None,
    bin_width_s: int = 1,
    origin_s: int = 0,
    end_s: int | None = None,
) -> EventScoreSeries:
    """Accumulate event scores into per-team bins.

    Event times are seconds relative to the same clock as ``origin_s``.
    Events outside [origin_s, end_s] are ignored and counted. Bins with no
    events stay 0; counts record the number of contributing events per bin.
    """
    if bin_width_s < 1:
        raise ValueError("bin_width_s must be >= 1")
    rules = rules or EventRuleSet()
    times = np.array([e.time_s for e in events], dtype=np.int64)
    if end_s is None:
        end_s = int(times.max()) if len(times) else origin_s
    n = span_bins(origin_s, end_s, bin_width_s)
    a = np.zeros(n)
    b = np.zeros(n)
    combined = np.zeros(n)
    counts = np.zeros(n, dtype=np.int64)
    skipped = 0
    for ev, t in zip(events, times):
        if t < origin_s or t > end_s:
            skipped += 1
            continue
        i = (t - origin_s) // bin_width_s
        actor, opponent = rules.scores[ev.kind]
        if ev.team == "A":
            a[i] += actor
            b[i] += opponent
        else:
            b[i] += actor
            a[i] += opponent
        combined[i] += abs(actor) + abs(opponent)
        counts[i] += 1
    make = lambda v: TimeSeries(origin_s, bin_width_s, v, counts.copy())
    return EventScoreSeries(make(a), make(b), make(combined), bin_width_s, skipped)


def write_event_series_csv(path, series: EventScoreSeries, delimiter: str = ",") -> None:
    """(bin_start_s, team_a, team_b, combined) rows."""
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter)
        w.writerow(["bin_start_s", "team_a", "team_b", "combined"])
        starts = series.team_a.bin_starts()
        for i, t in enumerate(starts):
            w.writerow(
                [
                    int(t),
                    repr(float(series.team_a.values[i])),
                    repr(float(series.team_b.values[i])),
                    repr(float(series.combined.values[i])),
                ]
            )
