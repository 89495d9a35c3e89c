"""Synthetic stand-in for the ADDS training corpus.

The generator is a Gaussian random-effects model. For participant ``i``,
question ``q`` and segment ``s`` the behavioural features are::

    x = person_i + answer_iq + sign(role_i) * class_offset + noise_iqs

The participant effect is split into a persistent part and an
answer-specific part: ``person_i ~ N(0, (1 - w) * s^2)`` and
``answer_iq ~ N(0, w * s^2)`` with ``s = person_effect_scale`` and
``w = answer_share``, so every segment carries participant-level variance
``s^2`` whatever the split. ``noise ~ N(0, noise_scale^2)``. All draws are
independent per feature. ``class_offset`` is a fixed random direction
(unit-variance entries) scaled by ``class_effect_scale``. The last feature
column is the participant's gender bit, constant within a participant.

Any ``person_effect_scale > 0`` makes segments from one person correlated,
which is exactly the i.i.d. violation the toolkit is built to expose.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from ..errors import InvalidSpec

__all__ = [
    "TRUTH",
    "DECEPTION",
    "LABEL_NAMES",
    "DatasetSpec",
    "Participant",
    "SegmentVector",
    "SyntheticDataset",
    "generate_synthetic_dataset",
    "shuffle_roles",
    "duplicate_participants",
]

TRUTH = 0
DECEPTION = 1
LABEL_NAMES = {TRUTH: "Truth", DECEPTION: "Deception"}
ROLE_NAMES = {TRUTH: "Truthful", DECEPTION: "Deceptive"}

# Composition of the 32 actors in the original study; rescaled for other sizes.
_FEMALE_SHARE = 10 / 32
_ASIAN_ARABIC_SHARE = 10 / 32


@dataclass(frozen=True)
class DatasetSpec:
    n_participants: int = 32
    n_deceptive: int = 16
    n_features: int = 38
    n_questions: int = 13
    target_total_vectors: int = 86_586
    person_effect_scale: float = 2.0
    class_effect_scale: float = 0.25
    noise_scale: float = 1.0
    answer_share: float = 0.9
    seed: int = 0

    def __post_init__(self):
        for name in ("n_participants", "n_features", "n_questions", "target_total_vectors"):
            if int(getattr(self, name)) < 1:
                raise InvalidSpec(f"{name} must be >= 1")
        if self.n_features < 2:
            raise InvalidSpec("n_features must leave room for the gender column plus one behavioural feature")
        if not 0 <= self.n_deceptive <= self.n_participants:
            raise InvalidSpec("n_deceptive must lie in [0, n_participants]")
        if self.target_total_vectors < self.n_participants * self.n_questions:
            raise InvalidSpec("target_total_vectors must give at least one segment per answer")
        if not 0.0 <= self.answer_share <= 1.0:
            raise InvalidSpec("answer_share must lie in [0, 1]")
        for name in ("person_effect_scale", "class_effect_scale"):
            if not getattr(self, name) >= 0:
                raise InvalidSpec(f"{name} must be non-negative")
        if not self.noise_scale > 0:
            raise InvalidSpec("noise_scale must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidSpec("seed must be a 64-bit unsigned integer")

    @property
    def segments_per_answer(self) -> int:
        return max(1, round(self.target_total_vectors / (self.n_participants * self.n_questions)))

    @property
    def analytic_icc(self) -> float:
        """Participant-level ICC of a behavioural feature when the class offset is zero.

        Reduces to ``s^2 / (s^2 + noise^2)`` when ``answer_share`` is 0.
        """
        sp2, sn2 = self.person_effect_scale**2, self.noise_scale**2
        if sp2 == 0:
            return 0.0
        w, q = self.answer_share, self.n_questions
        return sp2 * (1.0 - w + w / q) / (sp2 + sn2)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetSpec":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidSpec(f"unknown dataset_spec field(s): {', '.join(sorted(unknown))}")
        return cls(**data)


@dataclass(frozen=True)
class Participant:
    id: int
    role: int
    gender: int  # 1 = female
    demographic: str = "unknown"

    @property
    def role_name(self) -> str:
        return ROLE_NAMES[self.role]


@dataclass(frozen=True)
class SegmentVector:
    participant_id: int
    question_index: int
    features: np.ndarray
    label: int


@dataclass
class SyntheticDataset:
    """Column-oriented segment table plus participant metadata.

    ``question`` is 1-based. ``labels`` uses :data:`TRUTH` / :data:`DECEPTION`.
    """

    participant_ids: np.ndarray
    question: np.ndarray
    features: np.ndarray
    labels: np.ndarray
    participants: list
    spec: DatasetSpec | None = None
    gender_column: int | None = None
    _answer_index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.labels)
        if not (len(self.participant_ids) == len(self.question) == self.features.shape[0] == n):
            raise InvalidSpec("segment columns have mismatched lengths")
        known = {p.id for p in self.participants}
        if not set(np.unique(self.participant_ids).tolist()) <= known:
            raise InvalidSpec("segment references an unknown participant id")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[SegmentVector]:
        for i in range(len(self)):
            yield self.segment(i)

    def segment(self, i: int) -> SegmentVector:
        return SegmentVector(int(self.participant_ids[i]), int(self.question[i]),
                             self.features[i], int(self.labels[i]))

    @property
    def segments(self) -> list:
        return list(self)

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def behavioural_columns(self) -> np.ndarray:
        cols = np.arange(self.n_features)
        return cols if self.gender_column is None else cols[cols != self.gender_column]

    def participant(self, pid: int) -> Participant:
        for p in self.participants:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def ids_with_role(self, role: int) -> list:
        return [p.id for p in self.participants if p.role == role]

    def answer_groups(self) -> dict:
        """Map ``(participant_id, question)`` to the row indices of that answer."""
        if self._answer_index is None:
            keys = self.participant_ids.astype(np.int64) * 1_000_003 + self.question.astype(np.int64)
            order = np.argsort(keys, kind="stable")
            uniq, starts = np.unique(keys[order], return_index=True)
            bounds = list(starts) + [len(order)]
            self._answer_index = {
                (int(self.participant_ids[order[a]]), int(self.question[order[a]])): order[a:b]
                for a, b in zip(bounds[:-1], bounds[1:])
            }
        return self._answer_index

    def subset(self, mask: np.ndarray) -> "SyntheticDataset":
        keep = set(np.unique(self.participant_ids[mask]).tolist())
        return SyntheticDataset(
            participant_ids=self.participant_ids[mask],
            question=self.question[mask],
            features=self.features[mask],
            labels=self.labels[mask],
            participants=[p for p in self.participants if p.id in keep],
            spec=self.spec,
            gender_column=self.gender_column,
        )


def _assign(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    flags = np.zeros(n, dtype=np.int64)
    flags[rng.permutation(n)[:k]] = 1
    return flags


def generate_synthetic_dataset(spec: DatasetSpec) -> SyntheticDataset:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(spec.seed))))
    n_p, n_q = spec.n_participants, spec.n_questions
    n_behav = spec.n_features - 1
    m = spec.segments_per_answer

    roles = _assign(rng, n_p, spec.n_deceptive)
    female = _assign(rng, n_p, round(_FEMALE_SHARE * n_p))
    asian_arabic = _assign(rng, n_p, round(_ASIAN_ARABIC_SHARE * n_p))
    participants = [
        Participant(id=i + 1, role=int(roles[i]), gender=int(female[i]),
                    demographic="Asian/Arabic" if asian_arabic[i] else "White European")
        for i in range(n_p)
    ]

    direction = rng.standard_normal(n_behav)
    s = spec.person_effect_scale
    person = rng.standard_normal((n_p, n_behav)) * s * np.sqrt(1.0 - spec.answer_share)
    answer = rng.standard_normal((n_p, n_q, n_behav)) * s * np.sqrt(spec.answer_share)
    noise = rng.standard_normal((n_p, n_q, m, n_behav)) * spec.noise_scale

    sign = np.where(roles == DECEPTION, 1.0, -1.0)
    centre = person + sign[:, None] * spec.class_effect_scale * direction[None, :]
    behav = centre[:, None, None, :] + answer[:, :, None, :] + noise

    total = n_p * n_q * m
    features = np.empty((total, spec.n_features))
    features[:, :n_behav] = behav.reshape(total, n_behav)
    features[:, n_behav] = np.repeat(female.astype(float), n_q * m)

    pids = np.repeat(np.arange(1, n_p + 1), n_q * m)
    question = np.tile(np.repeat(np.arange(1, n_q + 1), m), n_p)
    labels = np.repeat(roles, n_q * m)
    return SyntheticDataset(
        participant_ids=pids,
        question=question,
        features=features,
        labels=labels,
        participants=participants,
        spec=spec,
        gender_column=n_behav,
    )


def shuffle_roles(dataset: SyntheticDataset, seed: int = 0) -> SyntheticDataset:
    """Randomly reassign roles among participants, keeping the role counts.

    Segment labels follow the new roles, so labels stay constant within a
    person but carry no information about the features.
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 7])))
    roles = np.array([p.role for p in dataset.participants])
    new_roles = roles[rng.permutation(roles.size)]
    mapping = {p.id: int(r) for p, r in zip(dataset.participants, new_roles)}
    participants = [Participant(p.id, mapping[p.id], p.gender, p.demographic) for p in dataset.participants]
    labels = np.array([mapping[int(i)] for i in dataset.participant_ids], dtype=np.int64)
    return SyntheticDataset(dataset.participant_ids, dataset.question, dataset.features, labels,
                            participants, dataset.spec, dataset.gender_column)


def duplicate_participants(dataset: SyntheticDataset) -> SyntheticDataset:
    """Append an exact clone of every participant under a fresh id."""
    offset = max(p.id for p in dataset.participants)
    clones = [Participant(p.id + offset, p.role, p.gender, p.demographic) for p in dataset.participants]
    return SyntheticDataset(
        np.concatenate([dataset.participant_ids, dataset.participant_ids + offset]),
        np.concatenate([dataset.question, dataset.question]),
        np.vstack([dataset.features, dataset.features]),
        np.concatenate([dataset.labels, dataset.labels]),
        dataset.participants + clones,
        dataset.spec,
        dataset.gender_column,
    )
