"""Field normalization, the centered unitary transform and cell integration."""

import numpy as np
import pytest

from homn.errors import ShapeError, ZeroFieldError
from homn.field_encoding import (
    Domain,
    Field,
    cell_overlap,
    cell_overlap_array,
    dft2_array,
    dft2_unitary,
    encode_dataset,
    idft2_unitary,
    normalize_field,
)


def dft2_oracle(a):
    """Direct O(N^2) double-sum DFT with the DC bin at (H//2, W//2)."""
    h, w = a.shape
    out = np.zeros((h, w), dtype=np.complex128)
    for p in range(h):
        for q in range(w):
            acc = 0.0
            for m in range(h):
                for n in range(w):
                    phase = -2j * np.pi * (
                        (p - h // 2) * (m - h // 2) / h + (q - w // 2) * (n - w // 2) / w
                    )
                    acc += a[m, n] * np.exp(phase)
            out[p, q] = acc / np.sqrt(h * w)
    return out


class TestNormalizeField:
    def test_three_four_five(self):
        field = normalize_field(np.array([[3, 4]]))
        assert np.allclose(field.amplitudes, [[0.6, 0.8]], atol=1e-15)
        assert field.domain is Domain.SPATIAL

    def test_uniform_image(self):
        for c in (1, 77, 255):
            field = normalize_field(np.full((2, 2), c))
            assert np.allclose(field.amplitudes, 0.5, atol=1e-15)

    def test_unit_norm(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            img = rng.integers(0, 256, size=(6, 5))
            if not img.any():
                continue
            field = normalize_field(img)
            assert abs(np.linalg.norm(field.amplitudes) - 1.0) <= 1e-12
            assert np.all(field.amplitudes.real >= 0)
            assert np.all(field.amplitudes.imag == 0)

    def test_scale_invariance(self):
        img = np.array([[10, 20], [30, 40]])
        a = normalize_field(img).amplitudes
        b = normalize_field(2 * img).amplitudes
        assert np.array_equal(a, b)

    def test_all_black(self):
        with pytest.raises(ZeroFieldError):
            normalize_field(np.zeros((4, 4)))


class TestDft2Unitary:
    def test_uniform_gives_centered_delta(self):
        field = Field(np.full((2, 2), 0.5), Domain.SPATIAL)
        spec = dft2_unitary(field)
        expected = np.zeros((2, 2))
        expected[1, 1] = 1.0  # DC lives at (H//2, W//2)
        assert np.allclose(spec.amplitudes, expected, atol=1e-15)
        assert spec.domain is Domain.FOURIER

    def test_delta_gives_flat_modulus(self):
        a = np.zeros((4, 4))
        a[1, 2] = 1.0
        spec = dft2_unitary(Field(a, Domain.SPATIAL))
        assert np.allclose(np.abs(spec.amplitudes), 0.25, atol=1e-15)

    @pytest.mark.parametrize("shape", [(4, 4), (3, 5), (8, 8)])
    def test_matches_double_sum_oracle(self, shape):
        rng = np.random.default_rng(7)
        a = rng.uniform(0, 1, size=shape)
        a /= np.linalg.norm(a)
        spec = dft2_unitary(Field(a, Domain.SPATIAL)).amplitudes
        assert np.max(np.abs(spec - dft2_oracle(a))) <= 1e-10

    def test_parseval(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
            assert abs(np.linalg.norm(dft2_array(a)) - np.linalg.norm(a)) <= 1e-12

    def test_roundtrip(self):
        rng = np.random.default_rng(9)
        a = rng.normal(size=(5, 7))
        a /= np.linalg.norm(a)
        field = Field(a, Domain.SPATIAL)
        back = idft2_unitary(dft2_unitary(field))
        assert np.max(np.abs(back.amplitudes - a)) <= 1e-10
        assert back.domain is Domain.SPATIAL

    def test_domain_guards(self):
        field = Field(np.full((2, 2), 0.5), Domain.SPATIAL)
        spec = dft2_unitary(field)
        with pytest.raises(ValueError):
            dft2_unitary(spec)
        with pytest.raises(ValueError):
            idft2_unitary(field)


class TestCellOverlap:
    def test_identity_grid(self):
        rng = np.random.default_rng(10)
        a = rng.uniform(0, 1, size=(32, 32))
        a /= np.linalg.norm(a)
        field = Field(a, Domain.SPATIAL)
        assert np.array_equal(cell_overlap(field, 32, 32), field.amplitudes)

    def test_single_cell_sums_everything(self):
        a = np.array([[0.1, 0.2], [0.3, 0.4]])
        a /= np.linalg.norm(a)
        cells = cell_overlap(Field(a, Domain.SPATIAL), 1, 1)
        assert cells.shape == (1, 1)
        assert abs(cells[0, 0] - a.sum()) <= 1e-15

    def test_block_sum_oracle(self):
        rng = np.random.default_rng(11)
        a = rng.uniform(0, 1, size=(4, 4))
        a /= np.linalg.norm(a)
        cells = cell_overlap(Field(a, Domain.SPATIAL), 2, 2)
        for mu in range(2):
            for nu in range(2):
                block = a[2 * mu : 2 * mu + 2, 2 * nu : 2 * nu + 2].sum()  # oracle
                assert abs(cells[mu, nu] - block) <= 1e-15

    def test_non_divisible(self):
        a = np.full((4, 4), 0.25)
        with pytest.raises(ShapeError):
            cell_overlap(Field(a, Domain.SPATIAL), 3, 2)

    def test_batched_matches_single(self):
        rng = np.random.default_rng(12)
        stack = rng.normal(size=(3, 4, 4)) + 1j * rng.normal(size=(3, 4, 4))
        stack /= np.linalg.norm(stack.reshape(3, -1), axis=1)[:, None, None]
        batched = cell_overlap_array(stack, 2, 2)
        for i in range(3):
            single = Field(stack[i], Domain.FOURIER)
            assert np.allclose(batched[i], cell_overlap(single, 2, 2), atol=1e-15)


class TestEncodeDataset:
    def test_spatial_rows_unit_norm(self):
        rng = np.random.default_rng(13)
        images = rng.integers(1, 256, size=(4, 8, 8))
        data = encode_dataset(images, np.array([0, 1, 0, 1]), Domain.SPATIAL)
        norms = np.linalg.norm(data.fields.reshape(4, -1), axis=1)
        assert np.allclose(norms, 1.0, atol=1e-12)

    def test_fourier_matches_per_image_transform(self):
        rng = np.random.default_rng(14)
        images = rng.integers(1, 256, size=(3, 4, 4))
        spatial = encode_dataset(images, np.zeros(3), Domain.SPATIAL)
        fourier = encode_dataset(images, np.zeros(3), Domain.FOURIER)
        for i in range(3):
            via_field = dft2_unitary(Field(spatial.fields[i], Domain.SPATIAL))
            assert np.allclose(fourier.fields[i], via_field.amplitudes, atol=1e-12)

    def test_all_black_image_rejected(self):
        images = np.zeros((2, 4, 4), dtype=np.uint8)
        images[0, 1, 1] = 9
        with pytest.raises(ZeroFieldError):
            encode_dataset(images, np.array([0, 1]), Domain.SPATIAL)
