"""Synthetic replica of the ADDS validation experiment."""

from .dataset import (
    DECEPTION,
    TRUTH,
    DatasetSpec,
    Participant,
    SegmentVector,
    SyntheticDataset,
    duplicate_participants,
    generate_synthetic_dataset,
    shuffle_roles,
)
from .mlp import ClassifierModel, Hyperparams, train_classifier
from .protocols import (
    GROUPED,
    LEAKED,
    FoldResult,
    GapReport,
    ProtocolSummary,
    compare_protocols,
    evaluate_grouped_loo,
    evaluate_leaked,
)
from .scoring import (
    ParticipantVerdict,
    QuestionScore,
    ScoringConfig,
    classify_participant,
    score_question,
)

__all__ = [
    "DECEPTION", "TRUTH", "DatasetSpec", "Participant", "SegmentVector", "SyntheticDataset",
    "generate_synthetic_dataset", "shuffle_roles", "duplicate_participants", "ClassifierModel", "Hyperparams", "train_classifier",
    "GROUPED", "LEAKED", "FoldResult", "GapReport", "ProtocolSummary", "compare_protocols",
    "evaluate_grouped_loo", "evaluate_leaked", "ParticipantVerdict", "QuestionScore",
    "ScoringConfig", "classify_participant", "score_question",
]
