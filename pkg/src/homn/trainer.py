"""Full-batch gradient-descent training of the probe under binary cross-entropy.

Each epoch runs one synchronous update: per-item gradients are averaged
over the whole training set, then a single step is applied to the
amplitude grid and the bias, with their own learning rates. The chain
rule collapses to beta * (F - y) in front of the overlap gradient, which
removes the 1/(F(1-F)) singularity of the raw cross-entropy derivative,
so gradients never explode even for saturated predictions.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from .errors import DegenerateProbeError, ShapeError
from .field_encoding import Domain, FieldDataset, cell_overlap_array
from .neuron import NeuronConfig, ProbeParams, sigmoid

# BCE inputs are clamped into [F_CLAMP, 1 - F_CLAMP]; the loss only, never
# the gradients (the chain-rule cancellation makes those safe unclamped).
F_CLAMP = 1e-12

# Norm below which a lambda update is considered to have collapsed the probe.
MIN_LAMBDA_NORM = 1e-12

_saturation_count = 0


def saturation_count() -> int:
    """Number of loss evaluations that hit the F clamp."""
    return _saturation_count


def reset_saturation_count() -> None:
    global _saturation_count
    _saturation_count = 0


class GradientMode(str, Enum):
    EXACT = "exact"
    APPROX = "approx"


class InitScheme(str, Enum):
    UNIFORM01 = "uniform01"
    CONSTANT = "constant"


@dataclass
class TrainConfig:
    eta_lambda: float = 0.075
    eta_b: float = 0.005
    epochs: int = 100
    seed: int = 0
    gradient_mode: GradientMode = GradientMode.EXACT
    neuron: NeuronConfig = dc_field(default_factory=NeuronConfig)
    init: InitScheme = InitScheme.UNIFORM01

    def __post_init__(self):
        if self.eta_lambda <= 0 or self.eta_b <= 0:
            raise ValueError("learning rates must be positive")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        self.gradient_mode = GradientMode(self.gradient_mode)
        self.init = InitScheme(self.init)


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    train_acc: float
    test_acc: float  # nan when no test set was supplied
    norm_lambda: float
    bias: float


@dataclass
class TrainHistory:
    """One record per completed epoch.

    loss/train_acc are measured on the forward pass the update descends
    (i.e. with the pre-update parameters); norm_lambda, bias and test_acc
    describe the state after the update.
    """

    records: list = dc_field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def append(self, rec: EpochRecord) -> None:
        self.records.append(rec)

    @property
    def final(self) -> EpochRecord:
        return self.records[-1]


def bce(y: int, F: float) -> float:
    """Binary cross-entropy -y ln F - (1-y) ln(1-F), with F clamped away
    from {0, 1} to keep the loss finite (saturations are counted)."""
    global _saturation_count
    if not F_CLAMP < F < 1.0 - F_CLAMP:
        _saturation_count += 1
        F = min(max(F, F_CLAMP), 1.0 - F_CLAMP)
    return float(-y * np.log(F) - (1 - y) * np.log(1.0 - F))


def loss_chain(y: int, F: float, beta: float) -> float:
    """d(BCE)/d(f + b) = (dH/dF)(dF/dxi) = beta * (F - y).

    The F(1-F) factors of the two derivatives cancel exactly, which is
    what keeps the training gradients bounded.
    """
    return beta * (F - y)


def _forward(cells_flat: np.ndarray, params: ProbeParams, cfg: NeuronConfig):
    """Vectorized forward pass over pre-integrated cells.

    Returns (c, f, F) for every item; identical arithmetic to the
    single-item neuron ops, batched.
    """
    norm = params.norm
    if norm < MIN_LAMBDA_NORM:
        raise DegenerateProbeError(f"lambda norm {norm} below {MIN_LAMBDA_NORM}")
    w = (params.lam / norm).ravel()
    c = cells_flat @ w
    f = np.abs(c) ** 2
    F = sigmoid(f + params.bias, cfg.beta, cfg.gamma)
    return c, f, F


def _bce_mean(y: np.ndarray, F: np.ndarray) -> float:
    global _saturation_count
    _saturation_count += int(np.count_nonzero((F <= F_CLAMP) | (F >= 1.0 - F_CLAMP)))
    Fc = np.clip(F, F_CLAMP, 1.0 - F_CLAMP)
    return float(np.mean(-y * np.log(Fc) - (1 - y) * np.log(1.0 - Fc)))


def _cells(data: FieldDataset, params: ProbeParams) -> np.ndarray:
    gh, gw = params.lam.shape
    cells = cell_overlap_array(data.fields, gh, gw)
    return cells.reshape(len(data), -1)


def train_epoch(data: FieldDataset, params: ProbeParams, cfg: TrainConfig):
    """One full-batch update. Returns (new_params, (mean BCE, accuracy))
    with the metrics taken from the forward pass the step descends.

    The per-item gradient sum is evaluated as a closed-form batch
    contraction, equal (to roundoff) to summing grad_f_exact/grad_f_approx
    item by item; order independence of the sum makes the update
    deterministic and permutation-invariant.
    """
    if len(data) == 0:
        raise ValueError("training set is empty")
    if Domain(data.domain) is not cfg.neuron.domain:
        raise ShapeError(
            f"dataset domain {data.domain} does not match config {cfg.neuron.domain}"
        )
    cells = _cells(data, params)
    y = np.asarray(data.labels, dtype=np.float64)
    m = len(data)
    norm = params.norm
    w = (params.lam / norm).ravel()

    c, f, F = _forward(cells, params, cfg.neuron)
    loss = _bce_mean(y, F)
    acc = float(np.mean((F >= 0.5) == (y == 1)))

    g = cfg.neuron.beta * (F - y)  # loss_chain, vectorized
    if cfg.gradient_mode is GradientMode.EXACT:
        lam_grad = (2.0 / norm) * (
            np.real((g * np.conj(c)) @ cells) - (g @ f) * w
        )
    else:
        root = np.sqrt(f)
        lam_grad = (2.0 / norm) * (
            (g * root) @ np.real(cells) - (g @ f) * w
        )

    new_lam = params.lam - (cfg.eta_lambda / m) * lam_grad.reshape(params.lam.shape)
    new_bias = params.bias - (cfg.eta_b / m) * float(np.sum(g))
    if np.linalg.norm(new_lam) < MIN_LAMBDA_NORM:
        raise DegenerateProbeError("update collapsed the lambda norm below 1e-12")
    return ProbeParams(lam=new_lam, bias=new_bias), (loss, acc)


def initial_params(grid_h: int, grid_w: int, cfg: TrainConfig) -> ProbeParams:
    """Seeded probe initialization: uniform(0, 1) amplitudes (positive, so
    the initial overlap amplitude is real non-negative) or a constant grid,
    scaled to unit norm.

    The scaling leaves the physical probe state untouched (it is
    lambda/||lambda|| either way) but sets the parametrization scale the
    learning rates act on: with an unnormalized N-cell draw the probe
    direction rotates ~N/3 times slower per step, freezing training at the
    reference rates.
    """
    if cfg.init is InitScheme.UNIFORM01:
        rng = np.random.default_rng(cfg.seed)
        lam = rng.uniform(0.0, 1.0, size=(grid_h, grid_w))
    else:
        lam = np.full((grid_h, grid_w), 1.0)
    return ProbeParams(lam=lam / np.linalg.norm(lam), bias=0.0)


def fit(
    train: FieldDataset,
    cfg: TrainConfig,
    test: FieldDataset | None = None,
) -> tuple[ProbeParams, TrainHistory]:
    """Run cfg.epochs full-batch updates from the seeded initialization."""
    if len(train) == 0:
        raise ValueError("training set is empty")
    params = initial_params(*train.fields.shape[1:], cfg)
    history = TrainHistory()
    for epoch in range(cfg.epochs):
        try:
            params, (loss, acc) = train_epoch(train, params, cfg)
        except DegenerateProbeError as err:
            raise DegenerateProbeError(f"epoch {epoch}: {err}") from err
        test_acc = float("nan")
        if test is not None:
            test_acc, _ = evaluate(params, test, cfg)
        history.append(
            EpochRecord(
                epoch=epoch,
                loss=loss,
                train_acc=acc,
                test_acc=test_acc,
                norm_lambda=params.norm,
                bias=params.bias,
            )
        )
    return params, history


def predict_batch(params: ProbeParams, data: FieldDataset, cfg: TrainConfig) -> np.ndarray:
    """Predicted probabilities F for every item."""
    _, _, F = _forward(_cells(data, params), params, cfg.neuron)
    return F


def evaluate(params: ProbeParams, data: FieldDataset, cfg: TrainConfig):
    """(accuracy, mean BCE) with label 1 predicted whenever F >= 0.5."""
    if len(data) == 0:
        raise ValueError("evaluation set is empty")
    y = np.asarray(data.labels, dtype=np.float64)
    F = predict_batch(params, data, cfg)
    acc = float(np.mean((F >= 0.5) == (y == 1)))
    return acc, _bce_mean(y, F)
