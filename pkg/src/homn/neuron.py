"""Core response of the Hong-Ou-Mandel optical neuron.

The trainable state is a real amplitude grid ``lambda`` on the modulator
plus a scalar bias. The probe field is ``lambda / ||lambda||``; interfering
it with the unit-norm input field on a 50:50 beam splitter gives a
two-photon coincidence probability

    p = (alpha - f) / 2,    f = |<input, probe>|^2,

so the overlap f is what the apparatus measures. Prediction applies a
logistic squashing to f plus the bias. Two gradient forms of f with
respect to lambda are provided: the exact one (including the projection
term of the norm constraint) and the phase-neglecting approximation that
can be measured all-optically.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DegenerateProbeError, InvalidOverlapError
from .field_encoding import Domain, Field, cell_overlap

# f may exceed alpha by roundoff; anything within this slack is clamped
# to p = 0 and counted, anything beyond is an error.
OVERLAP_SLACK = 1e-9

# |f - alpha| at or below this snaps to the exact dip p = 0: self-probe
# overlaps land within a few ulp of alpha and must report zero coincidences.
DIP_BAND = 1e-12

_clamp_count = 0


def clamp_warning_count() -> int:
    """Number of coincidence evaluations clamped at the f = alpha boundary."""
    return _clamp_count


def reset_clamp_warnings() -> None:
    global _clamp_count
    _clamp_count = 0


@dataclass
class ProbeParams:
    """Trainable modulator amplitudes (real H x W grid) and scalar bias."""

    lam: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        self.lam = np.asarray(self.lam, dtype=np.float64)
        if self.lam.ndim != 2:
            raise ValueError(f"lambda grid must be 2-d, got shape {self.lam.shape}")
        if not np.all(np.isfinite(self.lam)) or not np.isfinite(self.bias):
            raise ValueError("probe parameters must be finite")
        self.bias = float(self.bias)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.lam))


@dataclass
class NeuronConfig:
    """Fixed (non-trained) knobs of the neuron.

    beta/gamma shape the logistic output, alpha is the joint norm of the
    two single-photon states (1 when lossless), domain selects whether
    inputs are spatial or Fourier-encoded fields.
    """

    beta: float = 10.0
    gamma: float = 0.0
    alpha: float = 1.0
    domain: Domain = dc_field(default=Domain.SPATIAL)

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        self.domain = Domain(self.domain)


def sigmoid(x: float | np.ndarray, beta: float, gamma: float):
    """Logistic function 1 / (1 + exp(-beta*x + gamma)), overflow-safe."""
    z = beta * np.asarray(x, dtype=np.float64) - gamma
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    if out.ndim == 0:
        return float(out)
    return out


def probe_field(params: ProbeParams) -> Field:
    """The probe state: lambda / ||lambda||, a unit-norm spatial field."""
    norm = params.norm
    if norm == 0.0:
        raise DegenerateProbeError("lambda grid has zero norm")
    return Field(amplitudes=params.lam / norm, domain=Domain.SPATIAL)


def _cells_and_weights(input_field: Field, params: ProbeParams):
    norm = params.norm
    if norm == 0.0:
        raise DegenerateProbeError("lambda grid has zero norm")
    s = cell_overlap(input_field, *params.lam.shape)
    return s, params.lam / norm, norm


def overlap_amplitude(input_field: Field, params: ProbeParams) -> complex:
    """Inner product <input, probe> after cell integration (complex)."""
    s, w, _ = _cells_and_weights(input_field, params)
    return complex(np.sum(s * w))


def overlap_f(input_field: Field, params: ProbeParams) -> float:
    """Squared overlap f = |sum_{mu,nu} s_{mu,nu} lambda_{mu,nu}|^2 / ||lambda||^2
    with s the cell-integrated input field. Bounded by the Cauchy-Schwarz
    inequality when the probe grid matches the field resolution."""
    return abs(overlap_amplitude(input_field, params)) ** 2


def coincidence_probability(f: float, config: NeuronConfig) -> float:
    """Two-photon coincidence rate p = (alpha - f) / 2 in [0, 1/2].

    Indistinguishable states (f = alpha) never coincide; fully
    distinguishable ones (f = 0) coincide half the time.
    """
    global _clamp_count
    if f < -OVERLAP_SLACK:
        raise InvalidOverlapError(f"overlap f={f} is negative")
    if abs(f - config.alpha) <= DIP_BAND:
        return 0.0
    if f > config.alpha:
        if f <= config.alpha + OVERLAP_SLACK:
            _clamp_count += 1
            return 0.0
        raise InvalidOverlapError(
            f"overlap f={f} exceeds the joint norm alpha={config.alpha}"
        )
    return max(0.5 * (config.alpha - f), 0.0)


def predict(f: float, params: ProbeParams, config: NeuronConfig) -> float:
    """Predicted label probability F = sigmoid(f + b)."""
    return float(sigmoid(f + params.bias, config.beta, config.gamma))


def grad_f_exact(input_field: Field, params: ProbeParams) -> np.ndarray:
    """Exact gradient of the overlap with respect to each lambda entry.

    With w = lambda/||lambda||, s the cell-integrated input and
    c = <s, w>, the chain through the normalization gives

        df/dlambda = (2 / ||lambda||) * (Re[conj(c) * s] - f * w).
    """
    s, w, norm = _cells_and_weights(input_field, params)
    c = np.sum(s * w)
    f = abs(c) ** 2
    return (2.0 / norm) * (np.real(np.conj(c) * s) - f * w)


def grad_f_approx(input_field: Field, params: ProbeParams, f: float) -> np.ndarray:
    """Phase-neglecting gradient, measurable all-optically:

        df/dlambda ~= (2 sqrt(f) / ||lambda||) * (Re[s] - sqrt(f) * w).

    Exact whenever <input, probe> is real non-negative (e.g. spatial
    non-negative images); for Fourier fields the dropped phase makes this
    an approximation whose deviation is reported by the selfcheck suite.
    """
    s, w, norm = _cells_and_weights(input_field, params)
    root = np.sqrt(max(f, 0.0))
    return (2.0 * root / norm) * (np.real(s) - root * w)
