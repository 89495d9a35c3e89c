"""Turning segment scores into question scores and participant verdicts."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import AllUndecided, EmptyAnswer, InvalidSpec
from .dataset import DECEPTION, TRUTH

__all__ = [
    "ScoringConfig",
    "QuestionScore",
    "ParticipantVerdict",
    "aggregate_segment_scores",
    "score_question",
    "classify_participant",
]


@dataclass(frozen=True)
class ScoringConfig:
    """Segment filter band and decision threshold.

    Segment scores strictly inside ``(theta_lo, theta_hi)`` are treated as
    ambiguous and dropped before averaging. ``theta_lo == theta_hi`` disables
    the filter.
    """

    theta_lo: float = 0.4
    theta_hi: float = 0.6
    decision_threshold: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.theta_lo <= self.theta_hi <= 1.0:
            raise InvalidSpec("scoring band needs 0 <= theta_lo <= theta_hi <= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScoringConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidSpec(f"unknown scoring field(s): {', '.join(sorted(unknown))}")
        return cls(**data)


@dataclass(frozen=True)
class QuestionScore:
    value: Optional[float]  # None when every segment was filtered out
    retained: int
    total: int

    @property
    def decided(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class ParticipantVerdict:
    label: int
    mean_score: float
    n_decided: int
    n_undecided: int
    tie: bool


def aggregate_segment_scores(d: Sequence[float], config: ScoringConfig) -> QuestionScore:
    d = np.asarray(d, dtype=float).ravel()
    if d.size == 0:
        raise EmptyAnswer("cannot score an answer with no segments")
    keep = ~((d > config.theta_lo) & (d < config.theta_hi))
    n_keep = int(keep.sum())
    if n_keep == 0:
        return QuestionScore(None, 0, d.size)
    return QuestionScore(float(d[keep].mean()), n_keep, d.size)


def score_question(model, segments, config: ScoringConfig) -> QuestionScore:
    """Score one answer: filter the model's segment scores, then average.

    ``segments`` may be a feature matrix or a list of
    :class:`~screening_audit.replica.dataset.SegmentVector` from one
    participant and question.
    """
    if isinstance(segments, np.ndarray):
        x = segments
    else:
        segments = list(segments)
        if not segments:
            raise EmptyAnswer("cannot score an answer with no segments")
        if len({(s.participant_id, s.question_index) for s in segments}) > 1:
            raise InvalidSpec("segments must come from a single participant and question")
        x = np.stack([s.features for s in segments])
    if x.shape[0] == 0:
        raise EmptyAnswer("cannot score an answer with no segments")
    return aggregate_segment_scores(model.predict_proba(x), config)


def classify_participant(scores: Sequence, config: ScoringConfig) -> ParticipantVerdict:
    """Average the decided question scores and compare to the threshold.

    Items may be :class:`QuestionScore`, floats, or ``None`` (undecided).
    A mean exactly at the threshold counts as Deception and sets ``tie``.
    """
    values = [s.value if isinstance(s, QuestionScore) else s for s in scores]
    decided = [float(v) for v in values if v is not None]
    if not decided:
        raise AllUndecided("every question score was undecided")
    mean = sum(decided) / len(decided)
    tie = mean == config.decision_threshold
    label = DECEPTION if mean >= config.decision_threshold else TRUTH
    return ParticipantVerdict(label, mean, len(decided), len(values) - len(decided), tie)
