"""cascadeflow: conversation-cascade metrics and directed information flow.

Reconstructs reply/retweet cascade trees from flat records, scores game
transcripts into exogenous event series, bins sentiment, and quantifies how
strongly one series drives another with plug-in transfer entropy over
derivative-sign-encoded symbols.
"""

__version__ = "0.1.0"

from .backend import active_backend
from .cascade import (
    CascadeTree,
    ForestReport,
    MetricSeries,
    TweetRecord,
    build_forest,
    follower_series,
    metric_series,
    read_tweet_file,
    responsiveness,
    volume,
    wiener_index,
    write_tweet_file,
)
from .config import PipelineConfig
from .discretize import DiscreteSeries, derivative_sign_encode
from .errors import ConfigError, InputError
from .events import (
    EventRuleSet,
    EventScoreSeries,
    TranscriptEvent,
    parse_transcript,
    read_transcript_file,
    score_events,
)
from .pipeline import (
    emit_plot_data,
    ingest,
    run_all,
    run_dynamics_analysis,
    run_sentiment_analysis,
)
from .sentiment import sentiment_series, transcript_sentiment_series
from .series import TimeSeries, binned_mean
from .synth import (
    CoupledProcessSpec,
    analytic_transfer_entropy,
    coupled_markov,
    iid_series,
    planted_lag_symbols,
    random_cascade,
    values_for_symbols,
    write_planted_dataset,
)
from .te import (
    NOISE_FLOOR_BITS,
    JointHistogram,
    SweepResult,
    TEResult,
    joint_histogram,
    k_sweep,
    segment,
    total_transfer_entropy,
    transfer_entropy,
)

__all__ = [
    "__version__",
    "active_backend",
    "CascadeTree",
    "ForestReport",
    "MetricSeries",
    "TweetRecord",
    "build_forest",
    "follower_series",
    "metric_series",
    "read_tweet_file",
    "responsiveness",
    "volume",
    "wiener_index",
    "write_tweet_file",
    "PipelineConfig",
    "DiscreteSeries",
    "derivative_sign_encode",
    "ConfigError",
    "InputError",
    "EventRuleSet",
    "EventScoreSeries",
    "TranscriptEvent",
    "parse_transcript",
    "read_transcript_file",
    "score_events",
    "emit_plot_data",
    "ingest",
    "run_all",
    "run_dynamics_analysis",
    "run_sentiment_analysis",
    "sentiment_series",
    "transcript_sentiment_series",
    "TimeSeries",
    "binned_mean",
    "CoupledProcessSpec",
    "analytic_transfer_entropy",
    "coupled_markov",
    "iid_series",
    "planted_lag_symbols",
    "random_cascade",
    "values_for_symbols",
    "write_planted_dataset",
    "NOISE_FLOOR_BITS",
    "JointHistogram",
    "SweepResult",
    "TEResult",
    "joint_histogram",
    "k_sweep",
    "segment",
    "total_transfer_entropy",
    "transfer_entropy",
]
