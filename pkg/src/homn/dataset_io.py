"""Parsers and filters for the raw image datasets.

Handles the two binary containers used by the experiments (MNIST IDX files
and CIFAR-10 batch files), grayscale conversion, zero-padding, reduction to
a two-class dataset, and a small synthetic generator used for smoke tests
and demos. Images are numpy uint8 arrays: ``(n, H, W)`` for grayscale,
``(n, H, W, 3)`` for RGB.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import EmptyClassError, FormatError, ShapeError, TruncationError

IDX_IMAGE_MAGIC = 0x00000803
IDX_LABEL_MAGIC = 0x00000801

CIFAR_SIDE = 32
CIFAR_PLANE = CIFAR_SIDE * CIFAR_SIDE
CIFAR_RECORD_BYTES = 1 + 3 * CIFAR_PLANE  # label byte + R,G,B planes

CIFAR10_CLASSES = (
    "airplane", "automobile", "bird", "cat", "deer",
    "dog", "frog", "horse", "ship", "truck",
)

# ITU-R BT.601 luminance weights, fixed for reproducibility.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class Source(str, Enum):
    MNIST = "mnist"
    CIFAR10 = "cifar10"
    SYNTHETIC = "synthetic"


@dataclass
class LabeledSet:
    """Images plus integer class labels, all sharing one resolution."""

    images: np.ndarray
    labels: np.ndarray
    source: Source

    def __post_init__(self):
        if len(self.images) != len(self.labels):
            raise ShapeError(
                f"{len(self.images)} images but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.images)

    @property
    def height(self) -> int:
        return self.images.shape[1]

    @property
    def width(self) -> int:
        return self.images.shape[2]


@dataclass
class BinaryDataset:
    """Two-class subset with labels remapped to {0, 1}."""

    images: np.ndarray
    labels: np.ndarray
    class_map: dict = field(default_factory=dict)
    source: Source = Source.SYNTHETIC

    def __post_init__(self):
        if len(self.images) != len(self.labels):
            raise ShapeError(
                f"{len(self.images)} images but {len(self.labels)} labels"
            )
        bad = set(np.unique(self.labels)) - {0, 1}
        if bad:
            raise ValueError(f"binary labels must be 0/1, found {sorted(bad)}")

    def __len__(self) -> int:
        return len(self.images)


def parse_idx(data: bytes) -> np.ndarray:
    """Parse one IDX file (images or labels), returned in file order.

    Image files (big endian):
      i32 magic 0x00000803 | i32 count | i32 rows | i32 cols | u8 pixels
    Label files:
      i32 magic 0x00000801 | i32 count | u8 labels

    Returns a ``(count, rows, cols)`` uint8 array for image files and a
    ``(count,)`` uint8 array for label files.
    """
    if len(data) < 8:
        raise TruncationError(f"IDX header needs 8 bytes, got {len(data)}")
    magic, count = struct.unpack_from(">II", data, 0)
    if magic == IDX_IMAGE_MAGIC:
        if len(data) < 16:
            raise TruncationError("IDX image header needs 16 bytes")
        rows, cols = struct.unpack_from(">II", data, 8)
        expected = 16 + count * rows * cols
        payload_start = 16
        shape = (count, rows, cols)
    elif magic == IDX_LABEL_MAGIC:
        expected = 8 + count
        payload_start = 8
        shape = (count,)
    else:
        raise FormatError(f"bad IDX magic 0x{magic:08x}")
    if len(data) < expected:
        raise TruncationError(
            f"IDX payload truncated: need {expected} bytes, got {len(data)}"
        )
    if len(data) > expected:
        raise FormatError(
            f"IDX file has {len(data) - expected} trailing bytes"
        )
    return np.frombuffer(data, dtype=np.uint8, offset=payload_start).reshape(shape)


def to_idx_bytes(arr: np.ndarray) -> bytes:
    """Serialize an image stack or label vector back to IDX bytes."""
    arr = np.ascontiguousarray(arr, dtype=np.uint8)
    if arr.ndim == 3:
        header = struct.pack(">IIII", IDX_IMAGE_MAGIC, *arr.shape)
    elif arr.ndim == 1:
        header = struct.pack(">II", IDX_LABEL_MAGIC, arr.shape[0])
    else:
        raise ShapeError(f"expected 1-d labels or 3-d images, got ndim={arr.ndim}")
    return header + arr.tobytes()


def parse_cifar10(data: bytes) -> LabeledSet:
    """Parse a CIFAR-10 binary batch: 3073-byte records, label byte then
    three 32x32 row-major channel planes (R, G, B)."""
    if len(data) % CIFAR_RECORD_BYTES != 0:
        raise FormatError(
            f"CIFAR batch length {len(data)} is not a multiple of {CIFAR_RECORD_BYTES}"
        )
    records = np.frombuffer(data, dtype=np.uint8).reshape(-1, CIFAR_RECORD_BYTES)
    labels = records[:, 0].copy()
    planes = records[:, 1:].reshape(-1, 3, CIFAR_SIDE, CIFAR_SIDE)
    images = np.ascontiguousarray(planes.transpose(0, 2, 3, 1))  # (n, H, W, 3)
    return LabeledSet(images=images, labels=labels, source=Source.CIFAR10)


def to_cifar10_bytes(dataset: LabeledSet) -> bytes:
    """Serialize a CIFAR-10 LabeledSet back to batch bytes."""
    images = np.ascontiguousarray(dataset.images, dtype=np.uint8)
    if images.ndim != 4 or images.shape[1:] != (CIFAR_SIDE, CIFAR_SIDE, 3):
        raise ShapeError(f"expected (n, 32, 32, 3) RGB images, got {images.shape}")
    planes = images.transpose(0, 3, 1, 2).reshape(len(images), -1)
    records = np.concatenate(
        [dataset.labels.astype(np.uint8)[:, None], planes], axis=1
    )
    return records.tobytes()


def load_mnist(images_path, labels_path) -> LabeledSet:
    """Load one MNIST split from its IDX image/label file pair.

    Files may be gzip-compressed (sniffed from the 0x1f8b magic).
    """
    images = parse_idx(_read_maybe_gzip(images_path))
    labels = parse_idx(_read_maybe_gzip(labels_path))
    if images.ndim != 3 or labels.ndim != 1:
        raise FormatError("images/labels files swapped or malformed")
    return LabeledSet(images=images, labels=labels, source=Source.MNIST)


def load_cifar10(paths) -> LabeledSet:
    """Load and concatenate one or more CIFAR-10 binary batches."""
    parts = [parse_cifar10(_read_maybe_gzip(p)) for p in paths]
    return LabeledSet(
        images=np.concatenate([p.images for p in parts]),
        labels=np.concatenate([p.labels for p in parts]),
        source=Source.CIFAR10,
    )


def _read_maybe_gzip(path) -> bytes:
    with open(path, "rb") as fh:
        head = fh.read(2)
        fh.seek(0)
        if head == b"\x1f\x8b":
            import gzip

            return gzip.decompress(fh.read())
        return fh.read()


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luminance: round(0.299 R + 0.587 G + 0.114 B), clamped to [0, 255].

    Accepts a single (H, W, 3) image or a (n, H, W, 3) stack.
    """
    rgb = np.asarray(rgb)
    if rgb.shape[-1] != 3:
        raise ShapeError(f"expected 3 channels in the last axis, got {rgb.shape}")
    luma = (
        LUMA_WEIGHTS[0] * rgb[..., 0].astype(np.float64)
        + LUMA_WEIGHTS[1] * rgb[..., 1]
        + LUMA_WEIGHTS[2] * rgb[..., 2]
    )
    return np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)


def pad_to(image: np.ndarray, target_h: int, target_w: int) -> np.ndarray:
    """Center a grayscale image on a black (zero) canvas of the target size.

    When the leftover padding is odd, the extra pixel goes to the
    bottom/right (floor offset on top/left). Accepts (H, W) or (n, H, W).
    """
    image = np.asarray(image)
    h, w = image.shape[-2], image.shape[-1]
    if target_h < h or target_w < w:
        raise ShapeError(f"cannot pad {h}x{w} down to {target_h}x{target_w}")
    top = (target_h - h) // 2
    left = (target_w - w) // 2
    pads = [(0, 0)] * (image.ndim - 2) + [
        (top, target_h - h - top),
        (left, target_w - w - left),
    ]
    return np.pad(image, pads, mode="constant", constant_values=0)


def filter_binary(dataset: LabeledSet, class_a: int, class_b: int) -> BinaryDataset:
    """Keep only the two requested classes, in order, mapping a -> 0 and b -> 1."""
    if class_a == class_b:
        raise ValueError(f"need two distinct classes, got {class_a} twice")
    labels = np.asarray(dataset.labels)
    for cls in (class_a, class_b):
        if not np.any(labels == cls):
            raise EmptyClassError(f"class {cls} not present in dataset")
    keep = (labels == class_a) | (labels == class_b)
    return BinaryDataset(
        images=dataset.images[keep],
        labels=(labels[keep] == class_b).astype(np.uint8),
        class_map={int(class_a): 0, int(class_b): 1},
        source=dataset.source,
    )


def make_synthetic(
    n_per_class: int, height: int = 32, width: int = 32, seed: int = 0
) -> LabeledSet:
    """Generate a two-class toy set: noisy filled disks (0) vs vertical bars (1).

    Both classes get per-image position jitter, brightness variation and
    background noise, so the task is easy but not degenerate.
    """
    rng = np.random.default_rng(seed)
    images = np.zeros((2 * n_per_class, height, width), dtype=np.uint8)
    labels = np.zeros(2 * n_per_class, dtype=np.uint8)
    yy, xx = np.mgrid[0:height, 0:width]
    for i in range(2 * n_per_class):
        cls = i % 2
        bg = rng.integers(0, 20, size=(height, width))
        bright = rng.integers(150, 256)
        cy = height / 2 + rng.integers(-2, 3)
        cx = width / 2 + rng.integers(-2, 3)
        if cls == 0:
            mask = (yy - cy) ** 2 + (xx - cx) ** 2 <= (min(height, width) / 4) ** 2
        else:
            half = max(1, width // 10)
            mask = np.abs(xx - cx) <= half
        img = np.where(mask, bright, bg)
        images[i] = np.clip(img, 0, 255).astype(np.uint8)
        labels[i] = cls
    return LabeledSet(images=images, labels=labels, source=Source.SYNTHETIC)
