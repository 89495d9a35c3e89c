"""Acceptance suite: one test per criterion, numbered ``test_cNN_``.

Each test prints its own PASS line (visible with ``-s``); the conftest hook
repeats the verdicts in the terminal summary of every run.
"""

import json

import numpy as np
import pytest

from screening_audit.bayes import (
    ADDS_TEST,
    breakeven_prior,
    expected_counts,
    joint_matrix,
    negative_predictive_value,
    positive_predictive_value,
)
from screening_audit.cli import main
from screening_audit.diagnostics import curse_of_dimensionality_check, effective_sample_size, intraclass_correlation
from screening_audit.replica import (
    DatasetSpec,
    Hyperparams,
    evaluate_grouped_loo,
    evaluate_leaked,
    generate_synthetic_dataset,
)
from screening_audit.replica.mlp import init_params, loss_and_grad
from screening_audit.simulation import SimulationConfig, simulate_screening
from test_mlp import numeric_grad, relative_error


def passed(n, what):
    print(f"criterion {n}: PASS ({what})")


def test_c01_joint_matrix():
    m = joint_matrix(ADDS_TEST, 0.05)
    got = (m.tp, m.fp, m.fn, m.tn)
    for value, expected in zip(got, (0.0368, 0.2323, 0.0132, 0.7177)):
        assert value == pytest.approx(expected, abs=5e-5)
    passed(1, "joint matrix at prior 0.05: " + ", ".join(f"{v:.4f}" for v in got))


def test_c02_posteriors():
    pp = 100 * positive_predictive_value(ADDS_TEST, 0.05)
    assert pp == pytest.approx(13.69, abs=0.01)
    assert 100 * negative_predictive_value(ADDS_TEST, 0.05) == pytest.approx(98.20, abs=0.01)
    assert 100 * positive_predictive_value(ADDS_TEST, 0.001) == pytest.approx(0.30, abs=0.01)
    assert 100 * positive_predictive_value(ADDS_TEST, 0.0001) == pytest.approx(0.03, abs=0.005)
    passed(2, f"PPV(0.05) = {pp:.4f}%")


def test_c03_breakeven_one_in_four():
    p = breakeven_prior(ADDS_TEST, 0.5).value
    assert p == pytest.approx(0.2492, abs=5e-4)
    assert round(1 / p) == 4
    passed(3, f"break-even prior {p:.4f}")


def test_c04_expected_counts_tp_is_36_8_not_38():
    c = expected_counts(ADDS_TEST, 0.05, 1000)
    assert c.fp == pytest.approx(232.3, abs=0.1)
    assert c.fn == pytest.approx(13.2, abs=0.1)
    assert c.tn == pytest.approx(717.7, abs=0.1)
    # the approximate published figure of 38 flagged liars disagrees with 1000 * 0.05 * 0.7366
    assert c.tp == pytest.approx(36.83, abs=1e-9)
    passed(4, f"TP {c.tp:.2f} FP {c.fp:.2f} FN {c.fn:.2f} TN {c.tn:.2f}")


def test_c05_monte_carlo_matches_analytic():
    result = simulate_screening(SimulationConfig(ADDS_TEST, 0.05, 10**6, replicates=1, master_seed=2024))
    assert result.ppv.estimate == pytest.approx(positive_predictive_value(ADDS_TEST, 0.05), abs=0.005)
    m = joint_matrix(ADDS_TEST, 0.05)
    freq = result.joint_frequencies
    for key in ("tp", "fp", "fn", "tn"):
        assert freq[key] == pytest.approx(getattr(m, key), abs=0.002)
    passed(5, f"empirical PPV {result.ppv.estimate:.4f}")


# 32 participants x 13 questions x 26 segments = 10,816 segments
CI_SEGMENTS = 32 * 13 * 26


def test_c06_leakage_pathology():
    ds = generate_synthetic_dataset(DatasetSpec(target_total_vectors=CI_SEGMENTS, seed=0))
    hp = Hyperparams(seed=0)
    g, l = evaluate_grouped_loo(ds, hp), evaluate_leaked(ds, hp)
    print(f"grouped T {g.mean_truthful:.2f}+/-{g.std_truthful:.2f} D {g.mean_deceptive:.2f}+/-{g.std_deceptive:.2f}")
    print(f"leaked  T {l.mean_truthful:.2f}+/-{l.std_truthful:.2f} D {l.mean_deceptive:.2f}+/-{l.std_deceptive:.2f}")
    assert l.mean_truthful >= g.mean_truthful + 10
    assert l.mean_deceptive >= g.mean_deceptive + 10
    assert l.std_truthful <= g.std_truthful / 2
    assert l.std_deceptive <= g.std_deceptive / 2
    passed(6, "leaked protocol inflated and overconfident")


def test_c07_null_signal_near_chance():
    ds = generate_synthetic_dataset(DatasetSpec(class_effect_scale=0.0, target_total_vectors=CI_SEGMENTS, seed=0))
    g = evaluate_grouped_loo(ds, Hyperparams(seed=0))
    assert abs(g.mean_truthful - 50) <= 15
    assert abs(g.mean_deceptive - 50) <= 15
    passed(7, f"grouped T {g.mean_truthful:.2f} D {g.mean_deceptive:.2f}")


@pytest.mark.parametrize("seed", range(5))
def test_c08_gradient_check(seed):
    rng = np.random.default_rng(100 + seed)
    params = init_params(38, 8, rng)
    params["b1"] = rng.normal(size=8) * 0.1
    x = rng.normal(size=(20, 38))
    y = rng.integers(0, 2, 20).astype(float)
    analytic = loss_and_grad(params, x, y, 0.0)[1]
    numeric = numeric_grad(params, x, y)
    worst = max(relative_error(analytic[k], numeric[k]) for k in params)
    assert worst < 1e-5
    passed(8, f"38-8-1 network, worst relative error {worst:.2e}")


def test_c09_diagnostics():
    for groups in range(1, 80):
        assert curse_of_dimensionality_check(groups, 38).flagged == (groups < 38)
    # 200 segments per participant; pure random intercept model
    spec = DatasetSpec(person_effect_scale=1.5, noise_scale=1.0, answer_share=0.0, class_effect_scale=0.0,
                       n_questions=10, target_total_vectors=32 * 200)
    assert spec.segments_per_answer * spec.n_questions == 200
    icc = intraclass_correlation(generate_synthetic_dataset(spec))
    assert icc == pytest.approx(1.5**2 / (1.5**2 + 1.0), abs=0.05)
    assert effective_sample_size(86_586, 30, 0.0) == 86_586
    assert effective_sample_size(86_586, 30, 1.0) == 30
    passed(9, f"ICC {icc:.4f} vs analytic {1.5**2 / 3.25:.4f}")


REPLICATE_CONFIG = {
    "dataset_spec": {"n_participants": 12, "n_deceptive": 6, "target_total_vectors": 12 * 13 * 12},
    "hyperparams": {"hidden": 8, "epochs": 100},
    "protocols": {"grouped_folds": 4, "leaked_folds": 5},
    "seed": 11,
}


def _artifacts(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


def test_c10_byte_identical_artifacts(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(REPLICATE_CONFIG))
    for run in ("a", "b"):
        assert main(["replicate", "--config", str(cfg), "--export-dataset", "--out", str(tmp_path / f"rep_{run}")]) == 0
        assert main(["simulate", "--prior", "0.05", "--population", "100000", "--replicates", "8", "--seed", "5",
                     "--out", str(tmp_path / f"sim_{run}")]) == 0
    capsys.readouterr()
    rep_a, sim_a = _artifacts(tmp_path / "rep_a"), _artifacts(tmp_path / "sim_a")
    assert rep_a == _artifacts(tmp_path / "rep_b") and len(rep_a) == 6
    assert sim_a == _artifacts(tmp_path / "sim_b") and len(sim_a) == 3
    passed(10, f"{len(rep_a) + len(sim_a)} artifacts identical across runs")
