"""Shared fixtures: dataset discovery and synthetic training sets.

The MNIST/CIFAR-dependent tests look for the official files under
$HOMN_DATA_DIR (default: <repo>/data) and skip with a pointer to
scripts/fetch_data.py when they are absent, so the rest of the suite
stays green on machines without the datasets.
"""

import os
from pathlib import Path

import numpy as np
import pytest

from homn import dataset_io
from homn.field_encoding import Domain, encode_dataset

REPO_ROOT = Path(__file__).resolve().parents[1]

MNIST_NAMES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}
CIFAR_TRAIN = [f"data_batch_{i}.bin" for i in range(1, 6)]
CIFAR_TEST = "test_batch.bin"


def data_dir() -> Path:
    return Path(os.environ.get("HOMN_DATA_DIR", REPO_ROOT / "data"))


def _resolve(name: str):
    root = data_dir()
    for cand in (root / name, root / f"{name}.gz", root / "cifar-10-batches-bin" / name):
        if cand.exists():
            return cand
    return None


def mnist_paths():
    paths = {k: _resolve(v) for k, v in MNIST_NAMES.items()}
    return paths if all(paths.values()) else None


def cifar_paths():
    train = [_resolve(n) for n in CIFAR_TRAIN]
    test = _resolve(CIFAR_TEST)
    if all(train) and test:
        return {"train": train, "test": [test]}
    return None


def require_mnist():
    paths = mnist_paths()
    if paths is None:
        pytest.skip(
            f"official MNIST IDX files not found under {data_dir()}; "
            "run scripts/fetch_data.py and re-run"
        )
    return paths


def require_cifar():
    paths = cifar_paths()
    if paths is None:
        pytest.skip(
            f"official CIFAR-10 binary batches not found under {data_dir()}; "
            "run scripts/fetch_data.py and re-run"
        )
    return paths


@pytest.fixture(scope="session")
def mnist_01():
    """MNIST zeros vs ones, padded to 32x32, official train/test split."""
    paths = require_mnist()
    out = {}
    for split, (ik, lk) in {
        "train": ("train_images", "train_labels"),
        "test": ("test_images", "test_labels"),
    }.items():
        raw = dataset_io.load_mnist(paths[ik], paths[lk])
        binary = dataset_io.filter_binary(raw, 0, 1)
        out[split] = dataset_io.BinaryDataset(
            images=dataset_io.pad_to(binary.images, 32, 32),
            labels=binary.labels,
            class_map=binary.class_map,
            source=binary.source,
        )
    return out


@pytest.fixture(scope="session")
def cifar_cats_dogs():
    """CIFAR-10 cats vs dogs, grayscale 32x32, official split."""
    paths = require_cifar()
    out = {}
    for split in ("train", "test"):
        raw = dataset_io.load_cifar10(paths[split])
        binary = dataset_io.filter_binary(raw, 3, 5)  # cat, dog
        out[split] = dataset_io.BinaryDataset(
            images=dataset_io.to_grayscale(binary.images),
            labels=binary.labels,
            class_map=binary.class_map,
            source=binary.source,
        )
    return out


@pytest.fixture(scope="session")
def synthetic_sets():
    """Small disk-vs-bar synthetic train/test splits at 16x16."""
    train = dataset_io.filter_binary(dataset_io.make_synthetic(60, 16, 16, seed=11), 0, 1)
    test = dataset_io.filter_binary(dataset_io.make_synthetic(30, 16, 16, seed=12), 0, 1)
    return {"train": train, "test": test}


@pytest.fixture(scope="session")
def synthetic_fields(synthetic_sets):
    return {
        split: encode_dataset(ds.images, ds.labels, Domain.SPATIAL)
        for split, ds in synthetic_sets.items()
    }


def random_unit_field(rng, h=8, w=8, domain=Domain.SPATIAL, nonnegative=True):
    from homn.field_encoding import Field, dft2_unitary

    a = rng.uniform(0.0, 1.0, size=(h, w)) if nonnegative else rng.normal(size=(h, w))
    field = Field(amplitudes=a / np.linalg.norm(a), domain=Domain.SPATIAL)
    if domain is Domain.FOURIER:
        field = dft2_unitary(field)
    return field


def random_probe(rng, h=8, w=8, signed=False):
    from homn.neuron import ProbeParams

    lam = rng.normal(size=(h, w)) if signed else rng.uniform(0.1, 1.0, size=(h, w))
    return ProbeParams(lam=lam, bias=float(rng.normal()))
