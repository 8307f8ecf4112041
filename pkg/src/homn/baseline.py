"""Classical comparison neurons, trained like the optical model.

Two depth-one architectures:

* ``classical``: F = sigmoid(w . x + b), the conventional single neuron.
* ``analog``: F = sigmoid(|w . x|^2 + b), the squared-modulus activation
  that makes a classical neuron mathematically identical to the optical
  one when w is the normalized probe grid.

Both are trained with the same full-batch optimizer, learning rates and
history format as the optical neuron, with plain analytic gradients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .field_encoding import Domain, FieldDataset
from .neuron import sigmoid
from .trainer import EpochRecord, TrainConfig, TrainHistory, _bce_mean


@dataclass
class ClassicalParams:
    w: np.ndarray
    b: float = 0.0

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64)
        if self.w.ndim != 1:
            raise ValueError(f"weights must be a vector, got shape {self.w.shape}")
        if not np.all(np.isfinite(self.w)) or not np.isfinite(self.b):
            raise ValueError("parameters must be finite")
        self.b = float(self.b)


def _check_length(p: ClassicalParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != p.w.shape:
        raise ShapeError(f"weights have shape {p.w.shape}, input {x.shape}")
    return x


def classical_forward(p: ClassicalParams, x, beta: float = 1.0, gamma: float = 0.0) -> float:
    """sigmoid(w . x + b)."""
    x = _check_length(p, x)
    return float(sigmoid(float(np.real(p.w @ x)) + p.b, beta, gamma))


def quantum_analog_forward(p: ClassicalParams, x, beta: float = 1.0, gamma: float = 0.0) -> float:
    """sigmoid(|w . x|^2 + b); equals the optical forward pass when w is
    the flattened normalized probe and x the flattened input field."""
    x = _check_length(p, x)
    return float(sigmoid(abs(np.sum(p.w * x)) ** 2 + p.b, beta, gamma))


def initial_classical_params(n: int, seed: int) -> ClassicalParams:
    """Symmetric uniform(-1/sqrt(N), 1/sqrt(N)) weights, zero bias."""
    rng = np.random.default_rng(seed)
    s = 1.0 / np.sqrt(n)
    return ClassicalParams(w=rng.uniform(-s, s, size=n), b=0.0)


def fit_classical(
    train: FieldDataset,
    cfg: TrainConfig,
    test: FieldDataset | None = None,
    model: str = "classical",
) -> tuple[ClassicalParams, TrainHistory]:
    """Full-batch gradient descent on BCE for either classical architecture.

    Uses eta_lambda for the weights and eta_b for the bias, mirroring the
    optical training loop. The plain ``classical`` model needs real
    inputs, so it rejects Fourier-encoded datasets.
    """
    if model not in ("classical", "analog"):
        raise ValueError(f"unknown model {model!r}")
    if len(train) == 0:
        raise ValueError("training set is empty")
    if model == "classical" and Domain(train.domain) is Domain.FOURIER:
        raise ValueError("the classical neuron takes real inputs; use the spatial domain")

    X = train.fields.reshape(len(train), -1)
    if model == "classical":
        X = np.real(X)
    y = np.asarray(train.labels, dtype=np.float64)
    beta, gamma = cfg.neuron.beta, cfg.neuron.gamma
    m = len(train)

    params = initial_classical_params(X.shape[1], cfg.seed)
    history = TrainHistory()
    for epoch in range(cfg.epochs):
        w, b = params.w, params.b
        if model == "classical":
            z = np.real(X @ w) + b
            F = sigmoid(z, beta, gamma)
            g = beta * (F - y)
            w_grad = g @ np.real(X)
        else:
            c = X @ w
            F = sigmoid(np.abs(c) ** 2 + b, beta, gamma)
            g = beta * (F - y)
            w_grad = 2.0 * np.real((g * np.conj(c)) @ X)
        loss = _bce_mean(y, F)
        acc = float(np.mean((F >= 0.5) == (y == 1)))
        params = ClassicalParams(
            w=w - (cfg.eta_lambda / m) * w_grad,
            b=b - (cfg.eta_b / m) * float(np.sum(g)),
        )
        test_acc = float("nan")
        if test is not None:
            test_acc, _ = evaluate_classical(params, test, cfg, model=model)
        history.append(
            EpochRecord(
                epoch=epoch,
                loss=loss,
                train_acc=acc,
                test_acc=test_acc,
                norm_lambda=float(np.linalg.norm(params.w)),
                bias=params.b,
            )
        )
    return params, history


def predict_classical_batch(
    params: ClassicalParams, data: FieldDataset, cfg: TrainConfig, model: str = "classical"
) -> np.ndarray:
    X = data.fields.reshape(len(data), -1)
    if model == "classical":
        z = np.real(X @ params.w) + params.b
    else:
        z = np.abs(X @ params.w) ** 2 + params.b
    return sigmoid(z, cfg.neuron.beta, cfg.neuron.gamma)


def evaluate_classical(
    params: ClassicalParams, data: FieldDataset, cfg: TrainConfig, model: str = "classical"
):
    """(accuracy, mean BCE), same thresholding as the optical evaluate."""
    if len(data) == 0:
        raise ValueError("evaluation set is empty")
    y = np.asarray(data.labels, dtype=np.float64)
    F = predict_classical_batch(params, data, cfg, model=model)
    acc = float(np.mean((F >= 0.5) == (y == 1)))
    return acc, _bce_mean(y, F)
