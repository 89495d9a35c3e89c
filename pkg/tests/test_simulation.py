import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from screening_audit import (
    ADDS_TEST,
    InvalidSpec,
    SimulationConfig,
    TestCharacteristics,
    joint_matrix,
    positive_predictive_value,
    secondary_screening_load,
    simulate_screening,
)
from screening_audit.simulation import replicate_generator

PERFECT = TestCharacteristics(1.0, 1.0)


def test_large_population_matches_analytic():
    cfg = SimulationConfig(ADDS_TEST, 0.05, 10**6, replicates=1, master_seed=2019)
    res = simulate_screening(cfg)
    assert res.ppv.estimate == pytest.approx(positive_predictive_value(ADDS_TEST, 0.05), abs=0.005)
    jm = joint_matrix(ADDS_TEST, 0.05).as_dict()
    for key, freq in res.joint_frequencies.items():
        assert freq == pytest.approx(jm[key], abs=0.002)
    assert res.ppv.lower <= res.ppv.estimate <= res.ppv.upper


def test_prior_zero_has_no_liars():
    res = simulate_screening(SimulationConfig(ADDS_TEST, 0.0, 5000, replicates=20, master_seed=1))
    assert (res.tp == 0).all() and (res.fn == 0).all()
    assert res.ppv.estimate == 0.0


def test_perfect_test_never_errs():
    res = simulate_screening(SimulationConfig(PERFECT, 0.3, 5000, replicates=20, master_seed=1))
    assert (res.fp == 0).all() and (res.fn == 0).all()


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.integers(1, 10**6), st.integers(0, 2**64 - 1))
def test_counts_conserved(sens, spec, prior, n, seed):
    res = simulate_screening(SimulationConfig(TestCharacteristics(sens, spec), prior, n, 3, seed))
    assert (res.counts.sum(axis=1) == n).all()
    assert (res.counts >= 0).all()


def test_deterministic_and_schedule_invariant():
    cfg = SimulationConfig(ADDS_TEST, 0.05, 10_000, replicates=16, master_seed=77)
    a = simulate_screening(cfg)
    b = simulate_screening(cfg)
    c = simulate_screening(cfg, n_jobs=4)
    assert np.array_equal(a.counts, b.counts)
    assert np.array_equal(a.counts, c.counts)
    assert a.summary() == c.summary()


def test_replicate_streams_depend_only_on_index():
    short = simulate_screening(SimulationConfig(ADDS_TEST, 0.05, 1000, replicates=3, master_seed=5))
    long = simulate_screening(SimulationConfig(ADDS_TEST, 0.05, 1000, replicates=8, master_seed=5))
    assert np.array_equal(short.counts, long.counts[:3])
    assert replicate_generator(5, 0).integers(2**32) != replicate_generator(5, 1).integers(2**32)


def test_different_seeds_differ():
    a = simulate_screening(SimulationConfig(ADDS_TEST, 0.05, 10_000, 4, 1))
    b = simulate_screening(SimulationConfig(ADDS_TEST, 0.05, 10_000, 4, 2))
    assert not np.array_equal(a.counts, b.counts)


@pytest.mark.parametrize("kwargs", [dict(replicates=0), dict(population_size=0), dict(master_seed=-1),
                                    dict(replicates=1.5)])
def test_invalid_config(kwargs):
    base = dict(test=ADDS_TEST, prior=0.1, population_size=10, replicates=1, master_seed=0)
    base.update(kwargs)
    with pytest.raises(InvalidSpec):
        SimulationConfig(**base)


class TestSecondaryLoad:
    def test_adds_referrals(self):
        # 1000 * (0.7366*0.05 + 0.2445*0.95) = 269.105 exactly in rationals
        assert secondary_screening_load(ADDS_TEST, 0.05, 1000) == pytest.approx(269.105, abs=1e-9)
        assert secondary_screening_load(ADDS_TEST, 0.05, 1000) == pytest.approx(269.1, abs=0.01)

    def test_no_positives(self):
        assert secondary_screening_load(TestCharacteristics(0.7, 1.0), 0.0, 1234) == 0.0

    @pytest.mark.parametrize("prior", [0.0, 0.3, 1.0])
    def test_everyone_referred(self, prior):
        assert secondary_screening_load(TestCharacteristics(1.0, 0.0), prior, 500) == 500

    def test_matches_simulation_mean(self):
        res = simulate_screening(SimulationConfig(ADDS_TEST, 0.05, 1000, replicates=2000, master_seed=3))
        expected = secondary_screening_load(ADDS_TEST, 0.05, 1000)
        # sd of a single replicate's referrals is about 14; the mean of 2000 has sd ~0.3
        assert res.mean_referrals == pytest.approx(expected, abs=1.5)
