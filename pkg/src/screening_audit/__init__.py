"""Audit toolkit for mass-screening tests and their validation experiments."""

from .bayes import (
    ADDS_TEST,
    EventTree,
    JointOutcomeMatrix,
    PosteriorReport,
    Prevalence,
    SweepCurve,
    TestCharacteristics,
    breakeven_prior,
    build_event_tree,
    expected_counts,
    joint_matrix,
    negative_predictive_value,
    positive_predictive_value,
    posterior_report,
    prevalence_sweep,
)
from .errors import *  # noqa: F401,F403
from .simulation import SimulationConfig, SimulationResult, secondary_screening_load, simulate_screening

__version__ = "0.1.0"
