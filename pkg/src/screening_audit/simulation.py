"""Monte Carlo screening of a finite population.

Each replicate draws the number of liars from Binomial(N, prior), then the
true positives among liars and the true negatives among non-liars from two
more binomials. This has the same distribution as a per-person Bernoulli
loop but needs O(1) memory.

Random streams
--------------
Replicate ``r`` uses NumPy's ``Philox`` counter-based generator (Philox4x64
with 10 rounds and the published Random123 constants) seeded from
``SeedSequence(master_seed, spawn_key=(r,))``. A replicate's stream therefore
depends only on ``(master_seed, r)``, never on execution order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Optional

import numpy as np

from .bayes import Prevalence, TestCharacteristics, _as_prior, joint_matrix
from .errors import InvalidSpec

__all__ = [
    "SimulationConfig",
    "SimulationResult",
    "replicate_generator",
    "simulate_screening",
    "secondary_screening_load",
]

_Z95 = NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class SimulationConfig:
    test: TestCharacteristics
    prior: Prevalence
    population_size: int
    replicates: int = 1
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prior", _as_prior(self.prior))
        if int(self.population_size) != self.population_size or self.population_size < 1:
            raise InvalidSpec(f"population_size must be an integer >= 1, got {self.population_size!r}")
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise InvalidSpec(f"replicates must be an integer >= 1, got {self.replicates!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise InvalidSpec("master_seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "population_size", int(self.population_size))
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "master_seed", int(self.master_seed))


@dataclass(frozen=True)
class Interval:
    estimate: Optional[float]
    lower: Optional[float]
    upper: Optional[float]

    def as_dict(self) -> dict:
        return {"estimate": self.estimate, "lower": self.lower, "upper": self.upper}


@dataclass(frozen=True)
class SimulationResult:
    """Per-replicate counts (rows of ``tp, fp, fn, tn``) plus pooled summaries."""

    config: SimulationConfig
    counts: np.ndarray

    @property
    def tp(self) -> np.ndarray:
        return self.counts[:, 0]

    @property
    def fp(self) -> np.ndarray:
        return self.counts[:, 1]

    @property
    def fn(self) -> np.ndarray:
        return self.counts[:, 2]

    @property
    def tn(self) -> np.ndarray:
        return self.counts[:, 3]

    @property
    def mean_counts(self) -> dict:
        means = self.counts.mean(axis=0)
        return dict(zip(("tp", "fp", "fn", "tn"), (float(m) for m in means)))

    @property
    def joint_frequencies(self) -> dict:
        """Pooled empirical joint frequencies across all replicates."""
        total = self.counts.sum(axis=0)
        n = self.config.population_size * self.config.replicates
        return dict(zip(("tp", "fp", "fn", "tn"), (float(t) / n for t in total)))

    @property
    def referrals(self) -> np.ndarray:
        return self.tp + self.fp

    @property
    def mean_referrals(self) -> float:
        return float(self.referrals.mean())

    def _proportion(self, hits: int, trials: int) -> Interval:
        # Normal approximation; degenerates to a zero-width interval at 0 or 1.
        if trials == 0:
            return Interval(None, None, None)
        est = hits / trials
        half = _Z95 * math.sqrt(est * (1.0 - est) / trials)
        return Interval(est, max(0.0, est - half), min(1.0, est + half))

    @property
    def ppv(self) -> Interval:
        tp, fp = int(self.tp.sum()), int(self.fp.sum())
        return self._proportion(tp, tp + fp)

    @property
    def npv(self) -> Interval:
        tn, fn = int(self.tn.sum()), int(self.fn.sum())
        return self._proportion(tn, tn + fn)

    def summary(self) -> dict:
        cfg = self.config
        return {
            "test": cfg.test.to_dict(),
            "prior": cfg.prior.value,
            "population": cfg.population_size,
            "replicates": cfg.replicates,
            "seed": cfg.master_seed,
            "rng": "numpy.random.Philox via SeedSequence(seed, spawn_key=(replicate,))",
            "mean_counts": self.mean_counts,
            "joint_frequencies": self.joint_frequencies,
            "ppv": self.ppv.as_dict(),
            "npv": self.npv.as_dict(),
            "mean_referrals": self.mean_referrals,
        }


def replicate_generator(master_seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def _one_replicate(test: TestCharacteristics, prior: float, n: int, seed: int, index: int) -> tuple:
    rng = replicate_generator(seed, index)
    liars = int(rng.binomial(n, prior))
    honest = n - liars
    tp = int(rng.binomial(liars, test.sensitivity))
    tn = int(rng.binomial(honest, test.specificity))
    return tp, honest - tn, liars - tp, tn


def simulate_screening(config: SimulationConfig, n_jobs: int = 1) -> SimulationResult:
    """Run ``config.replicates`` independent screenings.

    Results are stored in replicate-index order, so ``n_jobs`` never changes
    the output.
    """
    args = (config.test, config.prior.value, config.population_size, config.master_seed)
    indices = range(config.replicates)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            rows = list(pool.map(lambda i: _one_replicate(*args, i), indices))
    else:
        rows = [_one_replicate(*args, i) for i in indices]
    return SimulationResult(config=config, counts=np.array(rows, dtype=np.int64).reshape(-1, 4))


def secondary_screening_load(test: TestCharacteristics, prior, population_size: float) -> float:
    """Expected number of travellers flagged for a human interview, N * P(+)."""
    if not population_size > 0:
        raise InvalidSpec(f"population_size must be positive, got {population_size!r}")
    return float(population_size) * joint_matrix(test, prior).p_positive
