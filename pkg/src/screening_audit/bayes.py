"""Bayesian algebra for binary screening tests.

Everything here is a pure function of a test's conditional performance
(sensitivity, specificity) and a population prior. Probabilities are plain
fractions in [0, 1]; percentages only appear in :mod:`screening_audit.render`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidProbability, UndefinedPosterior, Unreachable

__all__ = [
    "TestCharacteristics",
    "Prevalence",
    "JointOutcomeMatrix",
    "PosteriorReport",
    "SweepPoint",
    "SweepCurve",
    "TreeNode",
    "EventTree",
    "ADDS_TEST",
    "joint_matrix",
    "positive_predictive_value",
    "negative_predictive_value",
    "breakeven_prior",
    "prevalence_sweep",
    "expected_counts",
    "posterior_report",
    "build_event_tree",
]


def _check_fraction(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or not 0.0 <= value <= 1.0:
        raise InvalidProbability(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class TestCharacteristics:
    """Conditional performance of a binary test.

    ``sensitivity`` is P(+ | positive class) and ``specificity`` is
    P(- | negative class).
    """

    __test__ = False  # keep pytest from collecting this as a test class

    sensitivity: float
    specificity: float
    label_positive: str = "Lie"
    label_negative: str = "No-lie"

    def __post_init__(self):
        object.__setattr__(self, "sensitivity", _check_fraction("sensitivity", self.sensitivity))
        object.__setattr__(self, "specificity", _check_fraction("specificity", self.specificity))

    @property
    def false_positive_rate(self) -> float:
        return 1.0 - self.specificity

    @property
    def false_negative_rate(self) -> float:
        return 1.0 - self.sensitivity

    @property
    def informative(self) -> bool:
        """True when the test separates the classes at all (sens + spec > 1)."""
        return self.sensitivity + self.specificity > 1.0

    @classmethod
    def from_dict(cls, data: dict) -> "TestCharacteristics":
        missing = {"sensitivity", "specificity"} - set(data)
        if missing:
            raise InvalidProbability(f"test is missing field(s): {', '.join(sorted(missing))}")
        return cls(**{k: data[k] for k in ("sensitivity", "specificity", "label_positive", "label_negative") if k in data})

    def to_dict(self) -> dict:
        return {"sensitivity": self.sensitivity, "specificity": self.specificity}


@dataclass(frozen=True)
class Prevalence:
    """Prior probability of the positive class, P(Lie)."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _check_fraction("prior", self.value))

    @property
    def complement(self) -> float:
        return 1.0 - self.value

    def __float__(self) -> float:
        return self.value


def _as_prior(prior) -> Prevalence:
    return prior if isinstance(prior, Prevalence) else Prevalence(prior)


@dataclass(frozen=True)
class JointOutcomeMatrix:
    """Prior-weighted joint probabilities of the four test outcomes."""

    tp: float
    fp: float
    fn: float
    tn: float

    @property
    def p_positive(self) -> float:
        return self.tp + self.fp

    @property
    def p_negative(self) -> float:
        return self.fn + self.tn

    def as_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


@dataclass(frozen=True)
class ExpectedCounts:
    tp: float
    fp: float
    fn: float
    tn: float

    @property
    def total(self) -> float:
        return self.tp + self.fp + self.fn + self.tn

    def as_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


@dataclass(frozen=True)
class PosteriorReport:
    """Posterior summary of a test at one prior and population size.

    ``ppv``/``npv`` are ``None`` when the conditioning event has zero
    probability (see :class:`UndefinedPosterior`).
    """

    test: TestCharacteristics
    prior: Prevalence
    joint: JointOutcomeMatrix
    ppv: Optional[float]
    npv: Optional[float]
    p_positive: float
    population_size: float
    expected_counts: ExpectedCounts

    @property
    def referrals(self) -> float:
        """Expected number of positives, i.e. people sent to a second check."""
        return self.population_size * self.p_positive

    def to_dict(self) -> dict:
        return {
            "test": self.test.to_dict(),
            "prior": self.prior.value,
            "population": self.population_size,
            "joint": self.joint.as_dict(),
            "ppv": self.ppv,
            "npv": self.npv,
            "p_positive": self.p_positive,
            "expected_counts": self.expected_counts.as_dict(),
            "referrals": self.referrals,
        }


# Sensitivity and specificity reported for the ADDS validation experiment.
ADDS_TEST = TestCharacteristics(sensitivity=0.7366, specificity=0.7555)


def joint_matrix(test: TestCharacteristics, prior) -> JointOutcomeMatrix:
    p = _as_prior(prior).value
    q = 1.0 - p
    return JointOutcomeMatrix(
        tp=test.sensitivity * p,
        fp=test.false_positive_rate * q,
        fn=test.false_negative_rate * p,
        tn=test.specificity * q,
    )


def positive_predictive_value(test: TestCharacteristics, prior) -> float:
    """P(Lie | +) by Bayes' rule.

    Raises
    ------
    UndefinedPosterior
        If P(+) is zero, so no positive result can occur.
    """
    p = _as_prior(prior).value
    num = test.sensitivity * p
    den = num + test.false_positive_rate * (1.0 - p)
    if den == 0.0:
        raise UndefinedPosterior("PPV undefined: P(+) = 0 for this test and prior")
    return num / den


def negative_predictive_value(test: TestCharacteristics, prior) -> float:
    """P(No-lie | -) by Bayes' rule; raises UndefinedPosterior if P(-) = 0."""
    p = _as_prior(prior).value
    num = test.specificity * (1.0 - p)
    den = num + test.false_negative_rate * p
    if den == 0.0:
        raise UndefinedPosterior("NPV undefined: P(-) = 0 for this test and prior")
    return num / den


def breakeven_prior(test: TestCharacteristics, target_ppv: float) -> Prevalence:
    """Smallest prior at which the PPV reaches ``target_ppv``.

    Solving ``sens*p / (sens*p + fpr*(1-p)) = t`` for ``p`` gives
    ``p = t*fpr / (sens*(1-t) + t*fpr)``; PPV is increasing in ``p`` for
    any test with ``sens > 0``, so this is also the infimum.

    A test with zero false-positive rate has PPV = 1 at every prior > 0.
    The infimum 0 is not attained (PPV is undefined there), so that case
    raises :class:`Unreachable` instead of returning a prior.
    """
    t = float(target_ppv)
    if not 0.0 < t < 1.0:
        raise InvalidProbability(f"target_ppv must lie strictly inside (0, 1), got {t!r}")
    if test.sensitivity <= 0.0:
        raise Unreachable("a test with zero sensitivity never produces a true positive")
    fpr = test.false_positive_rate
    if fpr == 0.0:
        raise Unreachable("false-positive rate is 0: target is reachable for every prior > 0")
    return Prevalence(t * fpr / (test.sensitivity * (1.0 - t) + t * fpr))


@dataclass(frozen=True)
class SweepPoint:
    prior: float
    ppv: Optional[float]
    npv: Optional[float]


@dataclass(frozen=True)
class SweepCurve:
    """PPV/NPV over a grid of priors; ``None`` marks an undefined posterior."""

    test: TestCharacteristics
    points: tuple = field(default_factory=tuple)

    @property
    def priors(self) -> list:
        return [pt.prior for pt in self.points]

    @property
    def ppv(self) -> list:
        return [pt.ppv for pt in self.points]

    @property
    def npv(self) -> list:
        return [pt.npv for pt in self.points]

    def __len__(self):
        return len(self.points)


def _maybe(fn, test, prior):
    try:
        return fn(test, prior)
    except UndefinedPosterior:
        return None


def prevalence_sweep(test: TestCharacteristics, grid: Sequence[float]) -> SweepCurve:
    grid = [float(g) for g in grid]
    if not grid:
        raise InvalidProbability("sweep grid is empty")
    for g in grid:
        _check_fraction("grid prior", g)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidProbability("sweep grid must be strictly increasing")
    points = tuple(
        SweepPoint(g, _maybe(positive_predictive_value, test, g), _maybe(negative_predictive_value, test, g))
        for g in grid
    )
    return SweepCurve(test=test, points=points)


def expected_counts(test: TestCharacteristics, prior, population_size: float) -> ExpectedCounts:
    """Joint probabilities scaled to a population. No rounding is applied."""
    if not population_size > 0:
        raise InvalidProbability(f"population_size must be positive, got {population_size!r}")
    jm = joint_matrix(test, prior)
    n = float(population_size)
    return ExpectedCounts(tp=jm.tp * n, fp=jm.fp * n, fn=jm.fn * n, tn=jm.tn * n)


def posterior_report(test: TestCharacteristics, prior, population_size: float) -> PosteriorReport:
    prior = _as_prior(prior)
    jm = joint_matrix(test, prior)
    return PosteriorReport(
        test=test,
        prior=prior,
        joint=jm,
        ppv=_maybe(positive_predictive_value, test, prior),
        npv=_maybe(negative_predictive_value, test, prior),
        p_positive=jm.p_positive,
        population_size=float(population_size),
        expected_counts=expected_counts(test, prior, population_size),
    )


@dataclass
class TreeNode:
    """One node of the event tree.

    ``probability`` is conditional on the parent; ``joint`` is the
    probability of the whole path from the root.
    """

    label: str
    probability: float
    joint: float
    count: float
    children: list = field(default_factory=list)
    outcome: Optional[str] = None
    posterior: Optional[float] = None

    def leaves(self) -> list:
        if not self.children:
            return [self]
        out = []
        for child in self.children:
            out.extend(child.leaves())
        return out


@dataclass
class EventTree:
    test: TestCharacteristics
    prior: Prevalence
    population_size: float
    root: TreeNode

    def leaves(self) -> list:
        return self.root.leaves()

    def leaf(self, outcome: str) -> TreeNode:
        for node in self.leaves():
            if node.outcome == outcome:
                return node
        raise KeyError(outcome)

    def branch(self, label: str) -> TreeNode:
        for node in self.root.children:
            if node.label == label:
                return node
        raise KeyError(label)


def build_event_tree(test: TestCharacteristics, prior, population_size: float) -> EventTree:
    """Two-level tree: truth status first, then test outcome."""
    if not population_size > 0:
        raise InvalidProbability(f"population_size must be positive, got {population_size!r}")
    prior = _as_prior(prior)
    n = float(population_size)
    p = prior.value
    ppv = _maybe(positive_predictive_value, test, prior)
    npv = _maybe(negative_predictive_value, test, prior)

    def split(label, prob, leaf_specs):
        node = TreeNode(label=label, probability=prob, joint=prob, count=n * prob)
        for leaf_label, cond, outcome, post in leaf_specs:
            joint = prob * cond
            node.children.append(
                TreeNode(label=leaf_label, probability=cond, joint=joint, count=n * joint,
                         outcome=outcome, posterior=post)
            )
        return node

    lie = split(test.label_positive, p, [
        ("+", test.sensitivity, "TP", ppv),
        ("-", test.false_negative_rate, "FN", npv),
    ])
    nolie = split(test.label_negative, 1.0 - p, [
        ("+", test.false_positive_rate, "FP", ppv),
        ("-", test.specificity, "TN", npv),
    ])
    root = TreeNode(label="Population", probability=1.0, joint=1.0, count=n, children=[lie, nolie])
    return EventTree(test=test, prior=prior, population_size=n, root=root)
