"""One-hidden-layer sigmoid network trained by full-batch gradient descent.

The output ``d_n`` is the network's probability that a segment is deceptive.
Loss is mean binary cross-entropy, evaluated from the output logit for
numerical stability. Inputs are standardised with statistics taken from the
training set and stored with the model.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import DegenerateTraining, InvalidSpec

__all__ = [
    "Hyperparams",
    "ClassifierModel",
    "init_params",
    "forward",
    "loss_and_grad",
    "train_classifier",
]

PARAM_NAMES = ("w1", "b1", "w2", "b2")


@dataclass(frozen=True)
class Hyperparams:
    hidden: int = 16
    learning_rate: float = 0.5
    epochs: int = 300
    momentum: float = 0.9
    l2: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.hidden < 1:
            raise InvalidSpec("hidden width must be >= 1")
        if self.epochs < 0:
            raise InvalidSpec("epochs must be >= 0")
        if not self.learning_rate > 0:
            raise InvalidSpec("learning_rate must be positive")
        if not 0 <= self.momentum < 1:
            raise InvalidSpec("momentum must lie in [0, 1)")
        if self.l2 < 0:
            raise InvalidSpec("l2 must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Hyperparams":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidSpec(f"unknown hyperparams field(s): {', '.join(sorted(unknown))}")
        return cls(**data)


def _sigmoid(z):
    # tanh form: no overflow for large |z| and no branching
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=float)))


def init_params(n_in: int, hidden: int, rng: np.random.Generator) -> dict:
    return {
        "w1": rng.standard_normal((n_in, hidden)) / np.sqrt(n_in),
        "b1": np.zeros(hidden),
        "w2": rng.standard_normal(hidden) / np.sqrt(hidden),
        "b2": np.zeros(()),
    }


def forward(params: dict, x: np.ndarray):
    """Return ``(hidden activations, output logit)``."""
    a1 = _sigmoid(x @ params["w1"] + params["b1"])
    return a1, a1 @ params["w2"] + params["b2"]


def loss_and_grad(params: dict, x: np.ndarray, y: np.ndarray, l2: float = 0.0):
    """Mean cross-entropy (plus optional L2 on weights) and its gradient."""
    n = x.shape[0]
    a1, z2 = forward(params, x)
    # log(1 + e^z) - y z, written to stay finite for large |z|
    loss = np.mean(np.logaddexp(0.0, z2) - y * z2)
    dz2 = (_sigmoid(z2) - y) / n
    grads = {"w2": a1.T @ dz2, "b2": np.asarray(dz2.sum())}
    dz1 = np.outer(dz2, params["w2"]) * a1 * (1.0 - a1)
    grads["w1"] = x.T @ dz1
    grads["b1"] = dz1.sum(axis=0)
    if l2:
        loss += 0.5 * l2 * (np.sum(params["w1"] ** 2) + np.sum(params["w2"] ** 2))
        grads["w1"] = grads["w1"] + l2 * params["w1"]
        grads["w2"] = grads["w2"] + l2 * params["w2"]
    return float(loss), grads


@dataclass
class ClassifierModel:
    params: dict
    x_mean: np.ndarray
    x_scale: np.ndarray
    hyperparams: Hyperparams
    seed: int
    loss_history: list = field(default_factory=list)

    def _standardise(self, x):
        return (np.asarray(x, dtype=float) - self.x_mean) / self.x_scale

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        """Segment scores ``d_n`` in [0, 1]."""
        x = np.atleast_2d(x)
        _, z2 = forward(self.params, self._standardise(x))
        return _sigmoid(z2)

    def predict(self, x: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(x) >= threshold).astype(np.int64)

    @property
    def initial_loss(self) -> float:
        return self.loss_history[0]

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1]


def train_classifier(features: np.ndarray, labels: np.ndarray, hyperparams: Hyperparams | None = None,
                     seed: int | None = None) -> ClassifierModel:
    """Fit the network on ``features`` (n x d) and 0/1 ``labels``.

    ``seed`` overrides ``hyperparams.seed`` for weight initialisation.
    ``loss_history`` holds the loss before each update and after the last.
    """
    hp = hyperparams or Hyperparams()
    seed = hp.seed if seed is None else int(seed)
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise DegenerateTraining("training set is empty")
    present = set(np.unique(y).tolist())
    if present != {0.0, 1.0}:
        raise DegenerateTraining(f"training labels must contain both classes, found {sorted(present)}")

    mean = x.mean(axis=0)
    scale = x.std(axis=0)
    scale[scale == 0] = 1.0
    xs = (x - mean) / scale

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    params = init_params(x.shape[1], hp.hidden, rng)
    velocity = {k: np.zeros_like(v) for k, v in params.items()}
    history = []
    for _ in range(hp.epochs):
        loss, grads = loss_and_grad(params, xs, y, hp.l2)
        history.append(loss)
        for k in PARAM_NAMES:
            velocity[k] = hp.momentum * velocity[k] - hp.learning_rate * grads[k]
            params[k] = params[k] + velocity[k]
    history.append(loss_and_grad(params, xs, y, hp.l2)[0])
    return ClassifierModel(params=params, x_mean=mean, x_scale=scale, hyperparams=hp,
                           seed=seed, loss_history=history)
