"""Dataset builders shared by pipeline and acceptance tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np

import cascadeflow as cf
from cascadeflow import TweetRecord

W0 = 1_000_000


def build_tiny_dataset(outdir) -> dict:
    """A small but fully featured bundle: two active languages, one silent,
    real game events with polarity, replies, and one orphan record."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    def rec(id, parent, t, lang, pol, followers=10):
        return TweetRecord(id, parent, None, W0 + t, f"u{id}", followers, lang, pol)

    records = [
        rec("A", None, 5, "en", 0.2, followers=500),
        rec("A1", "A", 15, "en", -0.1),
        rec("A2", "A", 45, "es", 0.4),
        rec("B", None, 70, "es", 0.6, followers=40),
        rec("B1", "B", 95, "es", 0.1),
        rec("C", None, 200, "en", -0.3, followers=7),
        rec("D", None, 400, "es", 0.8, followers=90),
        rec("D1", "D", 410, "en", 0.5),
        rec("D2", "D1", 430, "es", -0.6),
        rec("orphan", "missing", 300, "en", 0.0),
    ]
    tweets = outdir / "tweets.csv"
    cf.write_tweet_file(records, tweets)

    transcript = outdir / "transcript.txt"
    transcript.write_text(
        "\n".join(
            [
                "0|30|A|foul|early challenge|0.1",
                "2|0|B|goal|opening goal|0.9",
                "4|10|A|yellow_card|booking|-0.5",
                "5|0|B|corner|unknown kind maps to other|0.0",
                "7|0|B|other|quiet spell|-0.2",
                "9|30|A|saved_goal|fingertip save|0.6",
            ]
        )
        + "\n"
    )

    config = outdir / "pipeline.cfg"
    config.write_text(
        "\n".join(
            [
                f"inputs.tweets = {tweets}",
                f"inputs.transcript = {transcript}",
                f"window.start_s = {W0}",
                f"window.end_s = {W0 + 599}",
                f"transcript.anchor_s = {W0}",
                "bins.dynamics_s = 1",
                "bins.sentiment_s = 60",
                "k.dynamics.min = 1",
                "k.dynamics.max = 3",
                "k.sentiment.min = 1",
                "k.sentiment.max = 2",
                "segment.boundary_bin = 5",
                "languages = en,es,de",
                "epsilon = 0.0",
            ]
        )
        + "\n"
    )
    return {"tweets": tweets, "transcript": transcript, "config": config}


def build_planted_dynamics_dataset(outdir, lag: int = 7, seed: int = 42) -> dict:
    """Tweets + transcript where game events drive responsiveness at ``lag``.

    One root per second with a single reply whose delay walks by one second
    per driven symbol (responsiveness = 1/delay), and a transcript whose
    team-A score walks by half-points per driving symbol. The window extends
    past the last root so every reply stays inside it.
    """
    n_roots = 12_000
    margin = 610
    n_total = n_roots + margin
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    x_sym, y_sym = cf.planted_lag_symbols(n_total - 1, lag, seed=seed)

    records = []
    delta = 300
    for b in range(n_roots):
        if b > 0:
            s = y_sym[b - 1]
            delta += {3: -1, 2: 0, 1: 1}[s]
            if not 1 <= delta <= margin - 5:
                raise AssertionError("delay walk left its safe range; pick another seed")
        t = W0 + b
        records.append(TweetRecord(f"r{b}", None, None, t, f"a{b}", 0, "en", 0.0))
        records.append(TweetRecord(f"c{b}", f"r{b}", f"r{b}", t + delta, f"b{b}", 0, "en", 0.0))
    tweets = outdir / "tweets.csv"
    cf.write_tweet_file(records, tweets)

    lines = []
    half_units = 0
    for b in range(1, n_total):
        s = x_sym[b - 1]
        half_units += {3: 1, 2: 0, 1: -1}[s]
        h = abs(half_units)
        goals, rem = divmod(h, 20)
        yellows, fouls = divmod(rem, 6)
        if half_units >= 0:
            teams = {"goal": "A", "yellow_card": "B", "foul": "B"}
        else:
            teams = {"goal": "B", "yellow_card": "A", "foul": "A"}
        minute, offset = divmod(b, 60)
        for kind, count in (("goal", goals), ("yellow_card", yellows), ("foul", fouls)):
            lines.extend(f"{minute}|{offset}|{teams[kind]}|{kind}|planted" for _ in range(count))
    transcript = outdir / "transcript.txt"
    transcript.write_text("\n".join(lines) + "\n")

    config = outdir / "pipeline.cfg"
    config.write_text(
        "\n".join(
            [
                f"inputs.tweets = {tweets}",
                f"inputs.transcript = {transcript}",
                f"window.start_s = {W0}",
                f"window.end_s = {W0 + n_total - 1}",
                f"transcript.anchor_s = {W0}",
                "bins.dynamics_s = 1",
                "k.dynamics.min = 1",
                f"k.dynamics.max = {lag + 1}",
                "analyses = dynamics",
                "languages = en",
            ]
        )
        + "\n"
    )
    return {"tweets": tweets, "transcript": transcript, "config": config, "lag": lag}
