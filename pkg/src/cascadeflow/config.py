"""Pipeline configuration: flat dotted-key text, every default explicit.

A run is fully determined by the resolved config plus the input bytes, so
``resolved_text`` emits every key (defaults included) in sorted order; the
emitted file parses back to an identical configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .events import EventRuleSet

_NONE = "none"


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, blanks ignored."""
    items: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in items:
            raise ConfigError(f"line {lineno}: duplicate key {key}")
        items[key] = value.strip()
    return items


def _opt_int(value: str, key: str) -> int | None:
    if value == _NONE or value == "":
        return None
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: expected integer or none, got {value!r}") from None


def _int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: expected integer, got {value!r}") from None


def _float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected real number, got {value!r}") from None


@dataclass
class PipelineConfig:
    tweets: str | None = None
    transcript: str | None = None
    window_start_s: int | None = None
    window_end_s: int | None = None
    anchor_s: int | None = None
    dynamics_bin_s: int = 1
    sentiment_bin_s: int = 60
    k_dynamics: tuple[int, int] = (1, 10)
    k_sentiment: tuple[int, int] = (1, 10)
    boundary_bin: int | None = None
    languages: tuple[str, ...] = ("en", "es", "de")
    fill_metrics: str = "zero"
    fill_sentiment: str = "hold_last"
    epsilon: float = 0.0
    orphan_policy: str = "promote"
    analyses: tuple[str, ...] = ("dynamics", "sentiment")
    delimiter: str = ","
    workers: int = 1
    rule_overrides: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.dynamics_bin_s < 1 or self.sentiment_bin_s < 1:
            raise ConfigError("bin widths must be >= 1")
        for lo, hi in (self.k_dynamics, self.k_sentiment):
            if not 1 <= lo <= hi:
                raise ConfigError("k ranges must satisfy 1 <= min <= max")
        if self.fill_metrics not in ("zero", "hold_last"):
            raise ConfigError("fill.metrics must be zero or hold_last")
        if self.fill_sentiment not in ("zero", "hold_last"):
            raise ConfigError("fill.sentiment must be zero or hold_last")
        if self.orphan_policy not in ("drop", "promote"):
            raise ConfigError("forest.orphan_policy must be drop or promote")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be nonnegative")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        unknown = set(self.analyses) - {"dynamics", "sentiment"}
        if unknown:
            raise ConfigError(f"unknown analyses: {sorted(unknown)}")
        if self.boundary_bin is not None and self.boundary_bin < 1:
            raise ConfigError("segment.boundary_bin must be >= 1")
        if (
            self.window_start_s is not None
            and self.window_end_s is not None
            and self.window_end_s < self.window_start_s
        ):
            raise ConfigError("window.end_s before window.start_s")

    @property
    def rules(self) -> EventRuleSet:
        return EventRuleSet.with_overrides(self.rule_overrides)

    def resolved_anchor_s(self) -> int:
        if self.anchor_s is not None:
            return self.anchor_s
        if self.window_start_s is not None:
            return self.window_start_s
        return 0

    @classmethod
    def from_items(cls, items: dict[str, str]) -> "PipelineConfig":
        known_simple = {
            "inputs.tweets",
            "inputs.transcript",
            "window.start_s",
            "window.end_s",
            "transcript.anchor_s",
            "bins.dynamics_s",
            "bins.sentiment_s",
            "k.dynamics.min",
            "k.dynamics.max",
            "k.sentiment.min",
            "k.sentiment.max",
            "segment.boundary_bin",
            "languages",
            "fill.metrics",
            "fill.sentiment",
            "epsilon",
            "forest.orphan_policy",
            "analyses",
            "delimiter",
            "workers",
        }
        overrides: dict[str, float] = {}
        for key, value in items.items():
            if key.startswith("rule."):
                overrides[key] = _float(value, key)
            elif key not in known_simple:
                raise ConfigError(f"unknown config key: {key}")

        def get(key: str, default: str) -> str:
            return items.get(key, default)

        def get_opt(key: str) -> str:
            return items.get(key, _NONE)

        base = cls()
        languages = tuple(
            t.strip() for t in get("languages", ",".join(base.languages)).split(",") if t.strip()
        )
        analyses = tuple(
            t.strip() for t in get("analyses", ",".join(base.analyses)).split(",") if t.strip()
        )
        tweets = get_opt("inputs.tweets")
        transcript = get_opt("inputs.transcript")
        cfg = cls(
            tweets=None if tweets == _NONE else tweets,
            transcript=None if transcript == _NONE else transcript,
            window_start_s=_opt_int(get_opt("window.start_s"), "window.start_s"),
            window_end_s=_opt_int(get_opt("window.end_s"), "window.end_s"),
            anchor_s=_opt_int(get_opt("transcript.anchor_s"), "transcript.anchor_s"),
            dynamics_bin_s=_int(get("bins.dynamics_s", "1"), "bins.dynamics_s"),
            sentiment_bin_s=_int(get("bins.sentiment_s", "60"), "bins.sentiment_s"),
            k_dynamics=(
                _int(get("k.dynamics.min", "1"), "k.dynamics.min"),
                _int(get("k.dynamics.max", "10"), "k.dynamics.max"),
            ),
            k_sentiment=(
                _int(get("k.sentiment.min", "1"), "k.sentiment.min"),
                _int(get("k.sentiment.max", "10"), "k.sentiment.max"),
            ),
            boundary_bin=_opt_int(get_opt("segment.boundary_bin"), "segment.boundary_bin"),
            languages=languages,
            fill_metrics=get("fill.metrics", base.fill_metrics),
            fill_sentiment=get("fill.sentiment", base.fill_sentiment),
            epsilon=_float(get("epsilon", "0.0"), "epsilon"),
            orphan_policy=get("forest.orphan_policy", base.orphan_policy),
            analyses=analyses,
            delimiter=get("delimiter", base.delimiter),
            workers=_int(get("workers", "1"), "workers"),
            rule_overrides=overrides,
        )
        _ = cfg.rules  # validate overrides eagerly
        return cfg

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        return cls.from_items(parse_config_text(text))

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        with open(path) as fh:
            return cls.from_text(fh.read())

    def resolved_items(self) -> dict[str, str]:
        """Every key with its effective value, suitable for re-parsing."""
        opt = lambda v: _NONE if v is None else str(v)
        items = {
            "inputs.tweets": opt(self.tweets),
            "inputs.transcript": opt(self.transcript),
            "window.start_s": opt(self.window_start_s),
            "window.end_s": opt(self.window_end_s),
            "transcript.anchor_s": opt(self.anchor_s),
            "bins.dynamics_s": str(self.dynamics_bin_s),
            "bins.sentiment_s": str(self.sentiment_bin_s),
            "k.dynamics.min": str(self.k_dynamics[0]),
            "k.dynamics.max": str(self.k_dynamics[1]),
            "k.sentiment.min": str(self.k_sentiment[0]),
            "k.sentiment.max": str(self.k_sentiment[1]),
            "segment.boundary_bin": opt(self.boundary_bin),
            "languages": ",".join(self.languages),
            "fill.metrics": self.fill_metrics,
            "fill.sentiment": self.fill_sentiment,
            "epsilon": repr(self.epsilon),
            "forest.orphan_policy": self.orphan_policy,
            "analyses": ",".join(self.analyses),
            "delimiter": self.delimiter,
            "workers": str(self.workers),
        }
        effective = self.rules.scores
        for kind, (actor, opponent) in sorted(effective.items()):
            if kind == "other":
                continue
            items[f"rule.{kind}.actor"] = repr(actor)
            items[f"rule.{kind}.opponent"] = repr(opponent)
        return items

    def resolved_text(self) -> str:
        return "\n".join(f"{k} = {v}" for k, v in sorted(self.resolved_items().items())) + "\n"
