"""Evaluation protocols: person-grouped hold-out vs. segment-level leakage.

Both protocols report, per fold, the percentage of test *questions*
classified correctly for truthful and for deceptive participants. A
question is correct when its filtered score is decided and falls on the
right side of the decision threshold; an undecided question counts as a
miss (the system failed to make a call on it).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import AllUndecided, DegenerateTraining, InsufficientParticipants
from .dataset import DECEPTION, TRUTH, SyntheticDataset
from .mlp import Hyperparams, train_classifier
from .scoring import ScoringConfig, aggregate_segment_scores, classify_participant

__all__ = [
    "GROUPED",
    "LEAKED",
    "FoldResult",
    "ProtocolSummary",
    "GapReport",
    "evaluate_grouped_loo",
    "evaluate_leaked",
    "compare_protocols",
]

GROUPED = "GroupedLeaveOnePairOut"
LEAKED = "LeakedSplit"


@dataclass(frozen=True)
class FoldResult:
    fold: int
    truthful_accuracy: float
    deceptive_accuracy: float
    n_truthful_questions: int
    n_deceptive_questions: int
    undecided_questions: int = 0
    held_out: tuple = ()
    # (participant id, true role, predicted label or None, tie flag)
    verdicts: tuple = ()


def _std(values) -> float:
    # sample standard deviation, the convention of the unseen-person column of
    # the original validation table
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


@dataclass
class ProtocolSummary:
    protocol: str
    folds: list = field(default_factory=list)

    @property
    def truthful(self) -> list:
        return [f.truthful_accuracy for f in self.folds]

    @property
    def deceptive(self) -> list:
        return [f.deceptive_accuracy for f in self.folds]

    @property
    def mean_truthful(self) -> float:
        return float(np.mean(self.truthful))

    @property
    def mean_deceptive(self) -> float:
        return float(np.mean(self.deceptive))

    @property
    def std_truthful(self) -> float:
        return _std(self.truthful)

    @property
    def std_deceptive(self) -> float:
        return _std(self.deceptive)

    @property
    def ties(self) -> int:
        return sum(1 for f in self.folds for v in f.verdicts if v[3])

    def participant_accuracy(self) -> Optional[float]:
        """Share of participant-level verdicts that match the true role."""
        verdicts = [v for f in self.folds for v in f.verdicts]
        if not verdicts:
            return None
        return 100.0 * sum(1 for v in verdicts if v[2] == v[1]) / len(verdicts)

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "folds": [{"fold": f.fold, "T": f.truthful_accuracy, "D": f.deceptive_accuracy} for f in self.folds],
            "mean": {"T": self.mean_truthful, "D": self.mean_deceptive},
            "std": {"T": self.std_truthful, "D": self.std_deceptive},
            "ties": self.ties,
        }


def _fold_seed(master: int, fold: int) -> int:
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=(int(fold),))
    return int(ss.generate_state(2, dtype=np.uint64)[0])


def _score_answers(model, dataset: SyntheticDataset, rows: np.ndarray, config: ScoringConfig):
    """Score every (participant, question) answer present in ``rows``.

    Returns ``{participant_id: [QuestionScore, ...]}`` in question order.
    """
    rows = np.sort(rows)
    d = model.predict_proba(dataset.features[rows])
    pid = dataset.participant_ids[rows]
    q = dataset.question[rows]
    out = {}
    keys = pid.astype(np.int64) * 1_000_003 + q.astype(np.int64)
    order = np.argsort(keys, kind="stable")
    _, starts = np.unique(keys[order], return_index=True)
    bounds = list(starts) + [len(order)]
    for a, b in zip(bounds[:-1], bounds[1:]):
        idx = order[a:b]
        out.setdefault(int(pid[idx[0]]), []).append(aggregate_segment_scores(d[idx], config))
    return out


def _fold_result(fold, dataset, answers, config, held_out=()) -> FoldResult:
    correct = {TRUTH: 0, DECEPTION: 0}
    total = {TRUTH: 0, DECEPTION: 0}
    undecided = 0
    verdicts = []
    for pid in sorted(answers):
        role = dataset.participant(pid).role
        for qs in answers[pid]:
            total[role] += 1
            if not qs.decided:
                undecided += 1
                continue
            predicted = DECEPTION if qs.value >= config.decision_threshold else TRUTH
            correct[role] += predicted == role
        try:
            v = classify_participant(answers[pid], config)
            verdicts.append((pid, role, v.label, v.tie))
        except AllUndecided:
            verdicts.append((pid, role, None, False))

    def pct(role):
        return 100.0 * correct[role] / total[role] if total[role] else math.nan

    return FoldResult(
        fold=fold,
        truthful_accuracy=pct(TRUTH),
        deceptive_accuracy=pct(DECEPTION),
        n_truthful_questions=total[TRUTH],
        n_deceptive_questions=total[DECEPTION],
        undecided_questions=undecided,
        held_out=tuple(held_out),
        verdicts=tuple(verdicts),
    )


def _run_folds(jobs, n_jobs):
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(lambda job: job(), jobs))
    return [job() for job in jobs]


def evaluate_grouped_loo(dataset: SyntheticDataset, hyperparams: Hyperparams | None = None,
                         config: ScoringConfig | None = None, n_folds: int = 9,
                         n_jobs: int = 1) -> ProtocolSummary:
    """Hold out one truthful and one deceptive participant per fold.

    Pairs are drawn without replacement from a permutation seeded by
    ``hyperparams.seed``; each fold's network is seeded from
    ``(hyperparams.seed, fold)``.
    """
    hp = hyperparams or Hyperparams()
    config = config or ScoringConfig()
    truthful = dataset.ids_with_role(TRUTH)
    deceptive = dataset.ids_with_role(DECEPTION)
    if min(len(truthful), len(deceptive)) < 2:
        raise InsufficientParticipants("grouped hold-out needs at least 2 participants per role")
    if n_folds > min(len(truthful), len(deceptive)):
        raise InsufficientParticipants(
            f"{n_folds} folds need {n_folds} participants per role; have "
            f"{len(truthful)} truthful and {len(deceptive)} deceptive")

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(hp.seed))))
    t_order = rng.permutation(truthful)
    d_order = rng.permutation(deceptive)

    def make_job(k):
        pair = (int(t_order[k]), int(d_order[k]))

        def job():
            test_mask = np.isin(dataset.participant_ids, pair)
            train = ~test_mask
            model = train_classifier(dataset.features[train], dataset.labels[train], hp,
                                     seed=_fold_seed(hp.seed, k))
            answers = _score_answers(model, dataset, np.flatnonzero(test_mask), config)
            return _fold_result(k + 1, dataset, answers, config, held_out=pair)

        return job

    folds = _run_folds([make_job(k) for k in range(n_folds)], n_jobs)
    return ProtocolSummary(GROUPED, folds)


def evaluate_leaked(dataset: SyntheticDataset, hyperparams: Hyperparams | None = None,
                    config: ScoringConfig | None = None, n_folds: int = 10,
                    n_jobs: int = 1) -> ProtocolSummary:
    """Label-stratified k-fold over segments, ignoring who produced them.

    Every participant appears in both the training and the test side of each
    fold. The test side of an answer is scored from its held-out segments.
    """
    hp = hyperparams or Hyperparams()
    config = config or ScoringConfig()
    if not dataset.ids_with_role(TRUTH) or not dataset.ids_with_role(DECEPTION):
        raise DegenerateTraining("leaked split needs both roles present")
    if n_folds < 2:
        raise InsufficientParticipants("leaked split needs at least 2 folds")

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(hp.seed), 1])))
    fold_of = np.empty(len(dataset), dtype=np.int64)
    for label in (TRUTH, DECEPTION):
        rows = np.flatnonzero(dataset.labels == label)
        rows = rows[rng.permutation(rows.size)]
        fold_of[rows] = np.arange(rows.size) % n_folds

    def make_job(k):
        def job():
            test_rows = np.flatnonzero(fold_of == k)
            train = fold_of != k
            model = train_classifier(dataset.features[train], dataset.labels[train], hp,
                                     seed=_fold_seed(hp.seed, k))
            answers = _score_answers(model, dataset, test_rows, config)
            return _fold_result(k + 1, dataset, answers, config)

        return job

    folds = _run_folds([make_job(k) for k in range(n_folds)], n_jobs)
    return ProtocolSummary(LEAKED, folds)


@dataclass(frozen=True)
class GapReport:
    inflation_truthful: float
    inflation_deceptive: float
    std_change_truthful: float
    std_change_deceptive: float
    threshold: float
    flag_truthful: bool
    flag_deceptive: bool

    @property
    def leakage_flag(self) -> bool:
        return self.flag_truthful or self.flag_deceptive

    def to_dict(self) -> dict:
        return {
            "mean_inflation": {"T": self.inflation_truthful, "D": self.inflation_deceptive},
            "std_change": {"T": self.std_change_truthful, "D": self.std_change_deceptive},
            "threshold_pp": self.threshold,
            "flags": {"T": self.flag_truthful, "D": self.flag_deceptive},
            "leakage_flag": self.leakage_flag,
        }


def compare_protocols(grouped, leaked, threshold: float = 5.0) -> GapReport:
    """Mean inflation and std change (leaked minus grouped), in points.

    Either argument can be a :class:`ProtocolSummary` or a mapping with
    ``mean`` and ``std`` sub-dicts keyed by ``"T"``/``"D"``.
    """

    def stats(s):
        if isinstance(s, ProtocolSummary):
            return s.mean_truthful, s.mean_deceptive, s.std_truthful, s.std_deceptive
        return s["mean"]["T"], s["mean"]["D"], s["std"]["T"], s["std"]["D"]

    gm_t, gm_d, gs_t, gs_d = stats(grouped)
    lm_t, lm_d, ls_t, ls_d = stats(leaked)
    inf_t, inf_d = lm_t - gm_t, lm_d - gm_d
    return GapReport(
        inflation_truthful=inf_t,
        inflation_deceptive=inf_d,
        std_change_truthful=ls_t - gs_t,
        std_change_deceptive=ls_d - gs_d,
        threshold=threshold,
        flag_truthful=inf_t > threshold,
        flag_deceptive=inf_d > threshold,
    )
