"""Container parsing, conversion and filtering against format oracles."""

import struct

import numpy as np
import pytest

from conftest import require_cifar, require_mnist
from homn import dataset_io
from homn.dataset_io import (
    BinaryDataset,
    LabeledSet,
    Source,
    filter_binary,
    make_synthetic,
    pad_to,
    parse_cifar10,
    parse_idx,
    to_cifar10_bytes,
    to_grayscale,
    to_idx_bytes,
)
from homn.errors import EmptyClassError, FormatError, ShapeError, TruncationError


def idx_image_bytes(count, rows, cols, payload):
    return struct.pack(">IIII", 0x803, count, rows, cols) + bytes(payload)


def idx_label_bytes(payload):
    return struct.pack(">II", 0x801, len(payload)) + bytes(payload)


class TestParseIdx:
    def test_single_2x2_image(self):
        images = parse_idx(idx_image_bytes(1, 2, 2, [0, 128, 255, 64]))
        assert images.shape == (1, 2, 2)
        assert images[0].tolist() == [[0, 128], [255, 64]]

    def test_label_file(self):
        labels = parse_idx(idx_label_bytes([0, 1, 1]))
        assert labels.tolist() == [0, 1, 1]

    def test_bad_magic(self):
        with pytest.raises(FormatError):
            parse_idx(struct.pack(">II", 0xDEAD, 1) + b"\x00")

    def test_truncated_payload(self):
        with pytest.raises(TruncationError):
            parse_idx(idx_image_bytes(2, 2, 2, [0] * 4))  # declares 8 pixel bytes

    def test_trailing_bytes(self):
        with pytest.raises(FormatError):
            parse_idx(idx_label_bytes([1, 2]) + b"\x00")

    def test_roundtrip_images(self):
        rng = np.random.default_rng(0)
        images = rng.integers(0, 256, size=(5, 3, 4), dtype=np.uint8)
        blob = to_idx_bytes(images)
        assert to_idx_bytes(parse_idx(blob)) == blob

    def test_roundtrip_labels(self):
        blob = idx_label_bytes([9, 0, 4, 4])
        assert to_idx_bytes(parse_idx(blob)) == blob

    def test_official_mnist_header_crosscheck(self):
        """Count/dims from parse_idx must match an independent header read."""
        paths = require_mnist()
        raw = dataset_io._read_maybe_gzip(paths["train_images"])
        magic, count, rows, cols = struct.unpack_from(">IIII", raw, 0)  # oracle
        assert magic == 0x803
        images = parse_idx(raw)
        assert images.shape == (count, rows, cols) == (60000, 28, 28)


class TestParseCifar10:
    def test_single_record(self):
        record = bytes([3]) + bytes([10] * 3072)
        ds = parse_cifar10(record)
        assert len(ds) == 1
        assert ds.labels.tolist() == [3]
        assert ds.images.shape == (1, 32, 32, 3)
        assert np.all(ds.images == 10)

    def test_two_records_preserve_order(self):
        rec_a = bytes([1]) + bytes([0] * 3072)
        rec_b = bytes([7]) + bytes([255] * 3072)
        ds = parse_cifar10(rec_a + rec_b)
        assert ds.labels.tolist() == [1, 7]
        assert np.all(ds.images[0] == 0) and np.all(ds.images[1] == 255)

    def test_channel_plane_layout(self):
        # R plane all 1, G all 2, B all 3: channels must come back unmixed
        record = bytes([0]) + bytes([1] * 1024) + bytes([2] * 1024) + bytes([3] * 1024)
        ds = parse_cifar10(record)
        assert np.all(ds.images[0, :, :, 0] == 1)
        assert np.all(ds.images[0, :, :, 1] == 2)
        assert np.all(ds.images[0, :, :, 2] == 3)

    def test_bad_length(self):
        with pytest.raises(FormatError):
            parse_cifar10(b"\x00" * 3072)

    def test_roundtrip(self):
        rng = np.random.default_rng(1)
        blob = rng.integers(0, 256, size=2 * 3073, dtype=np.uint8).tobytes()
        assert to_cifar10_bytes(parse_cifar10(blob)) == blob

    def test_official_batch_histogram_crosscheck(self):
        """Class histogram must match a byte-stride count over the raw file."""
        paths = require_cifar()
        raw = dataset_io._read_maybe_gzip(paths["train"][0])
        ds = parse_cifar10(raw)
        assert len(ds) == 10000
        stride_labels = [raw[i * 3073] for i in range(len(raw) // 3073)]  # oracle
        oracle_hist = np.bincount(stride_labels, minlength=10)
        assert np.array_equal(np.bincount(ds.labels, minlength=10), oracle_hist)


class TestToGrayscale:
    def test_white(self):
        assert to_grayscale(np.full((1, 1, 3), 255, dtype=np.uint8))[0, 0] == 255

    def test_black(self):
        assert to_grayscale(np.zeros((1, 1, 3), dtype=np.uint8))[0, 0] == 0

    def test_weighted_pixel(self):
        px = np.array([[[100, 50, 200]]], dtype=np.uint8)
        assert to_grayscale(px)[0, 0] == 82  # round(29.9 + 29.35 + 22.8)

    def test_channel_mismatch(self):
        with pytest.raises(ShapeError):
            to_grayscale(np.zeros((4, 4), dtype=np.uint8))


class TestPadTo:
    def test_mnist_style_border(self):
        padded = pad_to(np.full((28, 28), 255, dtype=np.uint8), 32, 32)
        assert padded.shape == (32, 32)
        assert np.all(padded[2:30, 2:30] == 255)
        assert padded.sum() == 255 * 28 * 28  # border contributes nothing

    def test_identity(self):
        img = np.arange(32 * 32, dtype=np.uint8).reshape(32, 32)
        assert np.array_equal(pad_to(img, 32, 32), img)

    def test_center_pixel(self):
        padded = pad_to(np.array([[7]], dtype=np.uint8), 3, 3)
        assert padded[1, 1] == 7 and padded.sum() == 7

    def test_floor_offset_on_odd_margin(self):
        padded = pad_to(np.array([[5]], dtype=np.uint8), 2, 2)
        assert padded[0, 0] == 5  # floor((2-1)/2) = 0 on top/left

    def test_shrink_rejected(self):
        with pytest.raises(ShapeError):
            pad_to(np.zeros((4, 4), dtype=np.uint8), 3, 4)

    def test_preserves_nonzero_multiset(self):
        rng = np.random.default_rng(2)
        img = rng.integers(0, 256, size=(5, 7), dtype=np.uint8)
        padded = pad_to(img, 9, 11)
        assert sorted(padded[padded > 0].tolist()) == sorted(img[img > 0].tolist())


class TestFilterBinary:
    def _set(self, labels):
        n = len(labels)
        images = np.arange(n * 4, dtype=np.uint8).reshape(n, 2, 2)
        return LabeledSet(images=images, labels=np.array(labels), source=Source.SYNTHETIC)

    def test_example_order_and_mapping(self):
        full = self._set([0, 3, 1, 1, 0])
        ds = filter_binary(full, 0, 1)
        assert ds.labels.tolist() == [0, 1, 1, 0]
        assert ds.class_map == {0: 0, 1: 1}
        # order preserved: items 0, 2, 3, 4 of the original survive
        assert np.array_equal(ds.images, full.images[[0, 2, 3, 4]])

    def test_count_property(self):
        rng = np.random.default_rng(3)
        labels = rng.integers(0, 10, size=200)
        ds = filter_binary(self._set(labels), 3, 5)
        assert len(ds) == np.sum(labels == 3) + np.sum(labels == 5)

    def test_same_class_rejected(self):
        with pytest.raises(ValueError):
            filter_binary(self._set([0, 0, 1]), 0, 0)

    def test_absent_class(self):
        with pytest.raises(EmptyClassError):
            filter_binary(self._set([0, 1, 1]), 0, 7)

    def test_mnist_three_vs_five_counts(self):
        paths = require_mnist()
        raw = dataset_io.load_mnist(paths["train_images"], paths["train_labels"])
        ds = filter_binary(raw, 3, 5)
        labels = np.asarray(raw.labels)  # independent label-count oracle
        assert len(ds) == int(np.sum(labels == 3) + np.sum(labels == 5))
        assert np.sum(ds.labels == 0) == np.sum(labels == 3)


class TestSynthetic:
    def test_shapes_and_labels(self):
        ds = make_synthetic(10, 16, 16, seed=0)
        assert ds.images.shape == (20, 16, 16)
        assert set(np.unique(ds.labels)) == {0, 1}
        assert ds.source is Source.SYNTHETIC

    def test_deterministic(self):
        a = make_synthetic(5, 8, 8, seed=42)
        b = make_synthetic(5, 8, 8, seed=42)
        assert np.array_equal(a.images, b.images)

    def test_binary_dataset_invariant(self):
        ds = filter_binary(make_synthetic(5, 8, 8, seed=1), 0, 1)
        assert isinstance(ds, BinaryDataset)
        assert set(np.unique(ds.labels)) <= {0, 1}
