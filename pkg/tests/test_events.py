import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cascadeflow as cf
from cascadeflow.events import DEFAULT_RULES, TranscriptEvent, parse_transcript, score_events

event_strategy = st.builds(
    TranscriptEvent,
    minute=st.integers(0, 95),
    offset_s=st.integers(0, 59),
    team=st.sampled_from(["A", "B"]),
    kind=st.sampled_from(["foul", "saved_goal", "goal", "yellow_card", "other"]),
    text=st.just("event"),
)


class TestParseTranscript:
    def test_goal_line(self):
        events, report = parse_transcript("33|0|A|goal|Hirving Lozano scores")
        assert len(events) == 1
        ev = events[0]
        assert (ev.minute, ev.team, ev.kind) == (33, "A", "goal")
        assert ev.time_s == 33 * 60
        assert report.n_events == 1 and report.n_malformed == 0

    def test_offset_line(self):
        events, _ = parse_transcript("45|30|B|yellow_card|caution")
        assert events[0].minute == 45 and events[0].offset_s == 30
        assert events[0].time_s == 45 * 60 + 30

    def test_unknown_kind_degrades_to_other(self):
        events, report = parse_transcript("10|0|A|corner|corner kick\n11|0|B|goal|scored")
        assert events[0].kind == "other"
        assert report.n_unknown_kind == 1

    def test_malformed_lines_reported_not_fatal(self):
        text = "10|0|A|goal|fine\nnot a line\nxx|0|A|goal|bad minute\n12|0|C|goal|bad team"
        events, report = parse_transcript(text)
        assert len(events) == 1
        assert report.n_malformed == 3
        assert [lineno for lineno, _ in report.malformed] == [2, 3, 4]

    def test_blank_and_comment_lines_skipped(self):
        events, report = parse_transcript("# header\n\n5|0|A|foul|tackle\n")
        assert len(events) == 1 and report.n_malformed == 0

    def test_empty_transcript_rejected(self):
        with pytest.raises(cf.InputError, match="empty transcript"):
            parse_transcript("junk\nmore junk")

    def test_polarity_sixth_field(self):
        events, _ = parse_transcript("5|0|A|foul|rough tackle|-0.6")
        assert events[0].polarity == pytest.approx(-0.6)

    def test_polarity_out_of_range_is_malformed(self):
        with pytest.raises(cf.InputError):
            parse_transcript("5|0|A|foul|bad|1.5")


class TestScoreEvents:
    def test_goal_scores_both_teams(self):
        events, _ = parse_transcript("33|0|A|goal|scored")
        scored = score_events(events, bin_width_s=60)
        b = 33
        assert scored.team_a.values[b] == 10.0
        assert scored.team_b.values[b] == -10.0
        assert scored.combined.values[b] == 20.0

    def test_foul_by_b_credits_a(self):
        events, _ = parse_transcript("5|0|B|foul|tackle")
        scored = score_events(events, bin_width_s=60)
        assert scored.team_b.values[5] == -0.5
        assert scored.team_a.values[5] == 0.5

    def test_two_yellows_same_bin_accumulate(self):
        events, _ = parse_transcript("40|5|A|yellow_card|first\n40|50|A|yellow_card|second")
        scored = score_events(events, bin_width_s=60)
        assert scored.team_a.values[40] == -6.0
        assert scored.team_b.values[40] == 6.0

    def test_saved_goal_credits_attacker(self):
        events, _ = parse_transcript("20|0|B|saved_goal|great save denies B")
        scored = score_events(events, bin_width_s=60)
        assert scored.team_b.values[20] == 0.5
        assert scored.team_a.values[20] == -0.5

    def test_default_rule_table(self):
        assert DEFAULT_RULES["foul"] == (-0.5, 0.5)
        assert DEFAULT_RULES["saved_goal"] == (0.5, -0.5)
        assert DEFAULT_RULES["goal"] == (10.0, -10.0)
        assert DEFAULT_RULES["yellow_card"] == (-3.0, 3.0)
        assert DEFAULT_RULES["other"] == (0.0, 0.0)

    @given(st.lists(event_strategy, min_size=1, max_size=40))
    @settings(max_examples=60, deadline=None)
    def test_antisymmetric_rules_sum_to_zero(self, events):
        scored = score_events(events, bin_width_s=60, end_s=96 * 60)
        assert np.all(scored.team_a.values + scored.team_b.values == 0.0)
        assert np.all(scored.combined.values >= 0.0)

    @given(st.lists(event_strategy, max_size=20), st.lists(event_strategy, max_size=20))
    @settings(max_examples=40, deadline=None)
    def test_scoring_is_additive(self, first, second):
        kw = dict(bin_width_s=60, origin_s=0, end_s=96 * 60)
        both = score_events(first + second, **kw)
        a = score_events(first, **kw)
        b = score_events(second, **kw)
        assert np.allclose(both.team_a.values, a.team_a.values + b.team_a.values)
        assert np.allclose(both.combined.values, a.combined.values + b.combined.values)

    @given(st.lists(event_strategy, min_size=2, max_size=15), st.randoms())
    @settings(max_examples=30, deadline=None)
    def test_within_bin_permutation_invariant(self, events, rand):
        shuffled = list(events)
        rand.shuffle(shuffled)
        kw = dict(bin_width_s=600, origin_s=0, end_s=96 * 60)
        assert np.array_equal(
            score_events(events, **kw).team_a.values,
            score_events(shuffled, **kw).team_a.values,
        )

    def test_out_of_range_events_counted(self):
        events, _ = parse_transcript("5|0|A|goal|in\n90|0|B|goal|late")
        scored = score_events(events, bin_width_s=60, origin_s=0, end_s=600)
        assert scored.n_out_of_range == 1

    def test_empty_bins_are_zero(self):
        events, _ = parse_transcript("2|0|A|foul|tackle")
        scored = score_events(events, bin_width_s=60, end_s=299)
        assert scored.team_a.values.tolist() == [0.0, 0.0, -0.5, 0.0, 0.0]


class TestRuleOverrides:
    def test_override_applied(self):
        rules = cf.EventRuleSet.with_overrides({"rule.goal.actor": 5.0})
        assert rules.scores["goal"] == (5.0, -10.0)

    def test_malformed_key_rejected(self):
        with pytest.raises(cf.ConfigError, match="malformed rule override"):
            cf.EventRuleSet.with_overrides({"rule.goal": 5.0})

    def test_other_not_overridable(self):
        with pytest.raises(cf.ConfigError):
            cf.EventRuleSet.with_overrides({"rule.other.actor": 1.0})

    def test_unknown_kind_rejected(self):
        with pytest.raises(cf.ConfigError):
            cf.EventRuleSet.with_overrides({"rule.red_card.actor": -5.0})
