import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from screening_audit.errors import AllUndecided, EmptyAnswer, InvalidSpec
from screening_audit.replica import (
    DECEPTION,
    TRUTH,
    QuestionScore,
    ScoringConfig,
    SegmentVector,
    classify_participant,
    score_question,
)
from screening_audit.replica.scoring import aggregate_segment_scores


class FixedScores:
    """Stand-in model that returns the first feature as its score."""

    def predict_proba(self, x):
        return np.asarray(x, dtype=float)[:, 0]


def segs(values, pid=1, q=1):
    return [SegmentVector(pid, q, np.array([v, 0.0]), 1) for v in values]


BAND = ScoringConfig(0.4, 0.6)


def test_band_keeps_confident_segments():
    qs = score_question(FixedScores(), segs([0.9, 0.8, 0.95]), BAND)
    assert qs.value == pytest.approx(2.65 / 3)
    assert round(qs.value, 4) == 0.8833
    assert (qs.retained, qs.total) == (3, 3)


def test_band_drops_ambiguous_segments():
    qs = score_question(FixedScores(), segs([0.45, 0.9, 0.55, 0.1]), BAND)
    assert qs.value == pytest.approx(0.5)
    assert qs.retained == 2


def test_band_edges_are_kept():
    qs = aggregate_segment_scores([0.4, 0.6], BAND)
    assert qs.retained == 2


def test_degenerate_band_is_plain_mean():
    d = [0.1, 0.5, 0.7, 0.52]
    qs = score_question(FixedScores(), segs(d), ScoringConfig(0.5, 0.5))
    assert qs.value == sum(d) / len(d)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=50), st.floats(0, 1))
def test_empty_band_identity(d, theta):
    qs = aggregate_segment_scores(d, ScoringConfig(theta, theta))
    assert qs.value == pytest.approx(float(np.mean(d)), abs=1e-15)
    assert 0.0 <= qs.value <= 1.0


def test_all_filtered_is_undecided():
    qs = score_question(FixedScores(), segs([0.45, 0.55]), BAND)
    assert qs.value is None and not qs.decided


def test_empty_answer():
    with pytest.raises(EmptyAnswer):
        score_question(FixedScores(), [], BAND)
    with pytest.raises(EmptyAnswer):
        score_question(FixedScores(), np.zeros((0, 2)), BAND)


def test_mixed_answers_rejected():
    with pytest.raises(InvalidSpec):
        score_question(FixedScores(), segs([0.9], q=1) + segs([0.1], q=2), BAND)


def test_band_ordering():
    with pytest.raises(InvalidSpec):
        ScoringConfig(0.7, 0.3)


class TestClassifyParticipant:
    def test_high_scores(self):
        assert classify_participant([0.9] * 13, BAND).label == DECEPTION

    def test_low_scores(self):
        assert classify_participant([0.1] * 13, BAND).label == TRUTH

    def test_tie_goes_to_deception(self):
        v = classify_participant([0.6, 0.4, None], BAND)
        assert v.mean_score == 0.5
        assert v.label == DECEPTION and v.tie
        assert (v.n_decided, v.n_undecided) == (2, 1)

    def test_accepts_question_scores(self):
        v = classify_participant([QuestionScore(0.2, 3, 4), QuestionScore(None, 0, 4)], BAND)
        assert v.label == TRUTH and not v.tie

    def test_all_undecided(self):
        with pytest.raises(AllUndecided):
            classify_participant([None, QuestionScore(None, 0, 3)], BAND)
