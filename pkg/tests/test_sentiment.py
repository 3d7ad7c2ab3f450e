import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cascadeflow as cf
from cascadeflow.events import parse_transcript

from conftest import make_record
from oracles import group_by_bin_mean


def recs(specs):
    """specs: iterable of (t, polarity, language)."""
    return [
        make_record(f"r{i}", t=t, polarity=p, language=lang)
        for i, (t, p, lang) in enumerate(specs)
    ]


class TestSentimentSeries:
    def test_symmetric_mean_is_zero(self):
        series = cf.sentiment_series(recs([(10, 0.5, "en"), (20, -0.5, "en")]), 60)
        assert series.values[0] == 0.0

    def test_language_filter_keeps_only_matches(self):
        records = recs([(0, 1.0, "de"), (10, -1.0, "en"), (20, 0.5, "de")])
        series = cf.sentiment_series(records, 60, language_filter="de")
        assert series.values[0] == pytest.approx(0.75)
        assert series.counts[0] == 2

    def test_empty_selection_rejected(self):
        with pytest.raises(cf.InputError, match="empty selection"):
            cf.sentiment_series(recs([(0, 0.1, "en")]), 60, language_filter="fr")

    def test_fill_zero_and_counts_flag_empties(self):
        records = recs([(0, 0.4, "en"), (125, 0.8, "en")])
        series = cf.sentiment_series(records, 60, fill="zero")
        assert series.values.tolist() == [0.4, 0.0, 0.8]
        assert series.counts.tolist() == [1, 0, 1]

    def test_fill_hold_last_repeats_with_zero_lead(self):
        records = recs([(70, 0.4, "en"), (190, -0.2, "en")])
        series = cf.sentiment_series(records, 60, fill="hold_last", origin=0, end=239)
        assert series.values.tolist() == [0.0, 0.4, 0.4, -0.2]
        assert series.counts.tolist() == [0, 1, 0, 1]

    def test_fill_drop_marks_nonuniform(self):
        records = recs([(0, 0.4, "en"), (125, 0.8, "en")])
        series = cf.sentiment_series(records, 60, fill="drop")
        assert series.values.tolist() == [0.4, 0.8]
        assert not series.uniform
        with pytest.raises(ValueError, match="nonuniform"):
            cf.derivative_sign_encode(series)

    def test_length_formula(self):
        records = recs([(0, 0.0, "en"), (359, 0.0, "en")])
        for width, expected in ((60, 6), (100, 4), (360, 1)):
            assert len(cf.sentiment_series(records, width)) == expected

    @given(
        st.lists(
            st.tuples(
                st.integers(0, 599),
                st.floats(-1, 1, allow_nan=False),
                st.sampled_from(["en", "es"]),
            ),
            min_size=1,
            max_size=60,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_group_by_oracle(self, specs):
        records = recs(specs)
        series = cf.sentiment_series(records, 60, fill="zero", origin=0, end=599)
        times = [r.created_at for r in records]
        vals = [r.polarity for r in records]
        expected = group_by_bin_mean(times, vals, 0, 599, 60)
        assert len(series) == len(expected)
        for got, want in zip(series.values, expected):
            assert got == pytest.approx(0.0 if want is None else want, abs=1e-12)

    @given(
        st.lists(
            st.tuples(
                st.integers(0, 299),
                st.floats(-1, 1, allow_nan=False),
                st.sampled_from(["en", "es", "de"]),
            ),
            min_size=1,
            max_size=50,
        )
    )
    @settings(max_examples=40, deadline=None)
    def test_unfiltered_is_count_weighted_language_mix(self, specs):
        records = recs(specs)
        total = cf.sentiment_series(records, 60, fill="zero", origin=0, end=299)
        langs = sorted({r.language for r in records})
        weighted = np.zeros(len(total))
        counts = np.zeros(len(total))
        for lang in langs:
            part = cf.sentiment_series(records, 60, lang, fill="zero", origin=0, end=299)
            weighted += part.values * part.counts
            counts += part.counts
        mask = counts > 0
        assert np.allclose(total.values[mask], weighted[mask] / counts[mask], atol=1e-12)
        assert np.array_equal(total.counts, counts.astype(int))

    def test_bounded_output(self):
        rng = np.random.default_rng(2)
        records = recs([(int(t), float(p), "en")
                        for t, p in zip(rng.integers(0, 500, 200), rng.uniform(-1, 1, 200))])
        for fill in ("zero", "hold_last"):
            series = cf.sentiment_series(records, 30, fill=fill)
            assert np.all(series.values >= -1.0) and np.all(series.values <= 1.0)


class TestTranscriptSentimentSeries:
    def test_constant_input(self):
        events, _ = parse_transcript("\n".join(f"{m}|0|A|other|talk|0.3" for m in range(5)))
        series = cf.transcript_sentiment_series(events, 60)
        assert np.allclose(series.values, 0.3)

    def test_cancellation_within_bin(self):
        events, _ = parse_transcript("0|5|A|other|up|1.0\n0|40|B|other|down|-1.0")
        series = cf.transcript_sentiment_series(events, 60)
        assert series.values[0] == 0.0

    def test_hold_last_fill_flags_empty_minutes(self):
        events, _ = parse_transcript("0|0|A|other|a|0.5\n2|0|A|other|b|-0.5")
        series = cf.transcript_sentiment_series(events, 60, fill="hold_last")
        assert series.values.tolist() == [0.5, 0.5, -0.5]
        assert series.counts.tolist() == [1, 0, 1]

    def test_missing_polarity_rejected(self):
        events, _ = parse_transcript("0|0|A|other|no polarity here")
        with pytest.raises(cf.InputError, match="no polarity"):
            cf.transcript_sentiment_series(events, 60)

    def test_mixed_polarity_lines_skips_unscored(self):
        events, _ = parse_transcript("0|0|A|other|scored|0.5\n1|0|A|other|unscored")
        series = cf.transcript_sentiment_series(events, 60)
        assert series.counts.tolist() == [1, 0]
