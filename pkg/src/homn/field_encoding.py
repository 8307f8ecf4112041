"""Encoding of pixel grids into unit-norm complex amplitude fields.

A field is the discretized single-photon amplitude on the image plane. The
spatial encoding is the pixel grid divided by its L2 norm; the Fourier
encoding applies a centered unitary 2-d DFT on top, so the norm is 1 in
both domains and no domain-dependent constant enters the overlap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ShapeError, ZeroFieldError

NORM_ATOL = 1e-9


class Domain(str, Enum):
    SPATIAL = "spatial"
    FOURIER = "fourier"


@dataclass
class Field:
    """Unit-norm complex amplitude grid in either domain."""

    amplitudes: np.ndarray
    domain: Domain = Domain.SPATIAL

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.ndim != 2:
            raise ShapeError(f"field must be 2-d, got shape {self.amplitudes.shape}")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"field norm is {norm!r}, expected 1")

    @property
    def shape(self):
        return self.amplitudes.shape


def normalize_field(image: np.ndarray) -> Field:
    """Divide pixel values by their L2 norm, giving a real non-negative
    spatial field of norm 1. All-black images cannot be normalized."""
    pixels = np.asarray(image, dtype=np.float64)
    if pixels.ndim != 2:
        raise ShapeError(f"expected a single 2-d image, got shape {pixels.shape}")
    norm = np.linalg.norm(pixels)
    if norm == 0.0:
        raise ZeroFieldError("all-black image has no direction to normalize")
    return Field(amplitudes=pixels / norm, domain=Domain.SPATIAL)


def dft2_array(a: np.ndarray) -> np.ndarray:
    """Centered unitary 2-d DFT over the last two axes (DC at H//2, W//2)."""
    h, w = a.shape[-2], a.shape[-1]
    shifted = np.fft.ifftshift(a, axes=(-2, -1))
    spec = np.fft.fft2(shifted, axes=(-2, -1))
    return np.fft.fftshift(spec, axes=(-2, -1)) / np.sqrt(h * w)


def idft2_array(a: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`dft2_array`."""
    h, w = a.shape[-2], a.shape[-1]
    shifted = np.fft.ifftshift(a, axes=(-2, -1))
    img = np.fft.ifft2(shifted, axes=(-2, -1))
    return np.fft.fftshift(img, axes=(-2, -1)) * np.sqrt(h * w)


def dft2_unitary(field: Field) -> Field:
    """Fourier-encode a spatial field. Unitary, so the norm stays 1."""
    if field.domain is not Domain.SPATIAL:
        raise ValueError("field is already in the Fourier domain")
    return Field(amplitudes=dft2_array(field.amplitudes), domain=Domain.FOURIER)


def idft2_unitary(field: Field) -> Field:
    """Map a Fourier field back to the spatial domain."""
    if field.domain is not Domain.FOURIER:
        raise ValueError("field is already in the spatial domain")
    return Field(amplitudes=idft2_array(field.amplitudes), domain=Domain.SPATIAL)


def cell_overlap(field: Field, grid_h: int, grid_w: int) -> np.ndarray:
    """Integrate the field over the top-hat cell around each probe pixel.

    Entry (mu, nu) is the sum of amplitudes in the (H/grid_h) x (W/grid_w)
    block centered on that cell; with the grid matching the field
    resolution this is the identity.
    """
    a = field.amplitudes
    h, w = a.shape
    if grid_h < 1 or grid_w < 1 or h % grid_h or w % grid_w:
        raise ShapeError(
            f"{h}x{w} field does not tile into a {grid_h}x{grid_w} cell grid"
        )
    bh, bw = h // grid_h, w // grid_w
    return a.reshape(grid_h, bh, grid_w, bw).sum(axis=(1, 3))


def cell_overlap_array(fields: np.ndarray, grid_h: int, grid_w: int) -> np.ndarray:
    """Batched :func:`cell_overlap` over a (M, H, W) amplitude stack."""
    m, h, w = fields.shape
    if h % grid_h or w % grid_w:
        raise ShapeError(
            f"{h}x{w} fields do not tile into a {grid_h}x{grid_w} cell grid"
        )
    bh, bw = h // grid_h, w // grid_w
    return fields.reshape(m, grid_h, bh, grid_w, bw).sum(axis=(2, 4))


@dataclass
class FieldDataset:
    """Stack of encoded fields with binary labels, ready for training."""

    fields: np.ndarray  # (M, H, W) complex128, each row unit norm
    labels: np.ndarray  # (M,) in {0, 1}
    domain: Domain = Domain.SPATIAL

    def __post_init__(self):
        if len(self.fields) != len(self.labels):
            raise ShapeError(
                f"{len(self.fields)} fields but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.fields)


def encode_dataset(images: np.ndarray, labels: np.ndarray, domain: Domain) -> FieldDataset:
    """Normalize a (M, H, W) grayscale stack into fields, optionally
    Fourier-transforming each image."""
    pixels = np.asarray(images, dtype=np.float64)
    if pixels.ndim != 3:
        raise ShapeError(f"expected (M, H, W) images, got shape {pixels.shape}")
    norms = np.linalg.norm(pixels.reshape(len(pixels), -1), axis=1)
    dead = np.flatnonzero(norms == 0.0)
    if dead.size:
        raise ZeroFieldError(f"all-black image at index {dead[0]}")
    fields = (pixels / norms[:, None, None]).astype(np.complex128)
    if domain is Domain.FOURIER:
        fields = dft2_array(fields)
    return FieldDataset(fields=fields, labels=np.asarray(labels), domain=domain)
