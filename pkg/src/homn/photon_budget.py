"""Photon-resource accounting for classification and imaging.

Monte Carlo estimation of the coincidence rate with its shot-noise
uncertainty, the photon cost of classically imaging an N-pixel scene at
the standard quantum limit, the photon cost of pushing that image through
a trained classical neuron at a target output uncertainty, and the
scaling table contrasting them: the interferometric budget depends only
on the requested uncertainty, never on the resolution, while both
classical budgets grow linearly with N.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .baseline import ClassicalParams
from .errors import InvalidOverlapError, ZeroFieldError
from .neuron import sigmoid


@dataclass
class ShotNoiseReport:
    """Outcome of a coincidence-counting run.

    n_pairs photon pairs means n_photons = 2 * n_pairs injected photons;
    both are stated. epsilon is the normal-approximation 95% half-width
    2 * sqrt(p_hat (1 - p_hat) / n_photons).
    """

    n_pairs: int
    n_photons: int
    coincidences: int
    p_hat: float
    f_hat: float
    epsilon: float

    def __post_init__(self):
        if not 0 <= self.coincidences <= self.n_pairs:
            raise ValueError("coincidence count outside [0, n_pairs]")
        if self.n_photons != 2 * self.n_pairs:
            raise ValueError("n_photons must equal 2 * n_pairs")


@dataclass
class ImagingCostModel:
    """Scene statistics for the standard-quantum-limit imaging cost."""

    mean_brightness: float  # average grey level <x>
    depth: int  # grey-level depth L
    n_pixels: int
    target_sigma: float  # requested average per-pixel std dev

    def __post_init__(self):
        if self.mean_brightness <= 0 or self.depth <= 0 or self.n_pixels <= 0:
            raise ValueError("brightness, depth and pixel count must be positive")
        if self.mean_brightness > self.depth:
            raise ValueError("mean brightness cannot exceed the grey depth")
        if self.target_sigma <= 0:
            raise ValueError("target sigma must be positive")


def _ceil_robust(x: float) -> int:
    # shave one part in 1e12 so 1/0.1**2 style float noise still lands on 100
    return int(math.ceil(x - 1e-12 * abs(x)))


def sample_coincidences(f: float, alpha: float, pairs: int, seed: int) -> ShotNoiseReport:
    """Simulate coincidence counting over `pairs` photon pairs.

    Each pair coincides independently with probability p = (alpha - f)/2;
    the report holds the empirical rate p_hat, the overlap estimate
    f_hat = alpha - 2 p_hat and its 95% half-width.
    """
    if not 0.0 <= f <= alpha <= 1.0:
        raise InvalidOverlapError(f"need 0 <= f <= alpha <= 1, got f={f}, alpha={alpha}")
    if pairs < 1:
        raise ValueError(f"need at least one pair, got {pairs}")
    p = 0.5 * (alpha - f)
    rng = np.random.default_rng(seed)
    coincidences = int(rng.binomial(pairs, p))
    p_hat = coincidences / pairs
    n_photons = 2 * pairs
    return ShotNoiseReport(
        n_pairs=pairs,
        n_photons=n_photons,
        coincidences=coincidences,
        p_hat=p_hat,
        f_hat=alpha - 2.0 * p_hat,
        epsilon=2.0 * math.sqrt(p_hat * (1.0 - p_hat) / n_photons),
    )


def classification_uncertainty_quantum(epsilon_target: float) -> int:
    """Photons guaranteeing a coincidence half-width <= epsilon_target.

    Since 4 p (1 - p) <= 1, ceil(1 / epsilon^2) photons suffice at the
    worst case p = 1/2, independent of the image resolution.
    """
    if epsilon_target <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon_target}")
    return _ceil_robust(1.0 / epsilon_target**2)


def imaging_photons_classical(model: ImagingCostModel) -> int:
    """Photons for a full image reconstruction at the standard quantum
    limit: solving sigma^2 ~= <x>^2 N / n_p for n_p gives <x>^2 N / sigma^2."""
    return _ceil_robust(
        model.mean_brightness**2 * model.n_pixels / model.target_sigma**2
    )


def classification_photons_classical(
    params: ClassicalParams,
    image: np.ndarray,
    epsilon: float,
    beta: float = 1.0,
    gamma: float = 0.0,
) -> int:
    """Photons for a classical neuron to reach output uncertainty epsilon.

    Propagating the per-pixel shot noise var(x_i) = <x> x_i N / n_p
    through G = sigmoid(w . x + b) and solving for the photon count gives

        n_p = <x> * (dG)^2 * (sum_i w_i^2 x_i) * N / epsilon^2,

    with dG = beta G (1 - G) the sigmoid slope at the operating point.
    Grows linearly with N for any non-degenerate trained neuron.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    x = np.asarray(image, dtype=np.float64)
    if x.shape != params.w.shape:
        raise ValueError(f"weights have shape {params.w.shape}, image {x.shape}")
    if not np.any(x):
        raise ZeroFieldError("all-black image carries no photons to budget")
    n = x.size
    mean_brightness = float(np.mean(x))
    weighted = float(np.sum(params.w**2 * x))
    if weighted == 0.0:
        warnings.warn(
            "sum of w_i^2 x_i is zero: constant classifier, zero photon budget",
            stacklevel=2,
        )
        return 0
    G = sigmoid(float(params.w @ x) + params.b, beta, gamma)
    dG = beta * G * (1.0 - G)
    return _ceil_robust(mean_brightness * dG**2 * weighted * n / epsilon**2)


@dataclass
class ScalingRow:
    n_pixels: int
    quantum_photons: int
    imaging_photons: int
    classification_photons: int


def classifier_norms(params: ClassicalParams) -> dict:
    """l1/l2 weight norms and bias of the classifier behind a scaling row.

    The linear lower bound assumes ||w||_1 and b stay bounded while
    ||w||^2 stays away from zero; these are reported, not enforced.
    """
    return {
        "w_l1": float(np.sum(np.abs(params.w))),
        "w_l2": float(np.linalg.norm(params.w)),
        "bias": params.b,
    }


def reference_classifier(n: int, mean_brightness: float):
    """Norm-preserving classifier family for the scaling table: balanced
    +-1/sqrt(N) weights (||w||^2 = 1, operating point at the decision
    boundary) on a uniform image of the given brightness."""
    w = np.empty(n)
    w[0::2] = 1.0 / math.sqrt(n)
    w[1::2] = -1.0 / math.sqrt(n)
    x = np.full(n, float(mean_brightness))
    return ClassicalParams(w=w, b=0.0), x


def scaling_report(
    resolutions,
    epsilon: float,
    sigma: float,
    mean_brightness: float = 1.0,
    depth: int = 255,
    model: ClassicalParams | None = None,
    image: np.ndarray | None = None,
) -> list[ScalingRow]:
    """Photon budgets per resolution N.

    The quantum column is the resolution-independent coincidence budget;
    the classical columns are the imaging and classification costs, both
    linear in N. By default the classification column uses the balanced
    reference classifier; passing a trained (model, image) pair instead
    extends it to larger N by norm-preserving entry replication.
    """
    if not resolutions:
        raise ValueError("need at least one resolution")
    if (model is None) != (image is None):
        raise ValueError("model and image must be supplied together")
    rows = []
    quantum = classification_uncertainty_quantum(epsilon)
    for n in resolutions:
        n = int(n)
        imaging = imaging_photons_classical(
            ImagingCostModel(
                mean_brightness=mean_brightness,
                depth=depth,
                n_pixels=n,
                target_sigma=sigma,
            )
        )
        if model is None:
            params_n, image_n = reference_classifier(n, mean_brightness)
        else:
            params_n, image_n = extend_classifier(model, np.asarray(image, dtype=np.float64), n)
        classification = classification_photons_classical(params_n, image_n, epsilon)
        rows.append(
            ScalingRow(
                n_pixels=n,
                quantum_photons=quantum,
                imaging_photons=imaging,
                classification_photons=classification,
            )
        )
    return rows


def extend_classifier(params: ClassicalParams, image: np.ndarray, n: int):
    """Replicate (w, x) entries to resolution n, dividing the weight copies
    by sqrt(replication) so ||w||^2 is preserved (the bounded-norm family
    the linear lower bound is stated for)."""
    native = params.w.size
    if n == native:
        return params, image
    if n % native:
        raise ValueError(f"cannot extend {native} entries to {n} (not a multiple)")
    r = n // native
    w = np.repeat(params.w, r) / math.sqrt(r)
    x = np.repeat(image, r)
    return ClassicalParams(w=w, b=params.b), x
