#!/usr/bin/env python3
"""Download the MNIST IDX files and CIFAR-10 binary batches into a data dir.

Usage: python scripts/fetch_data.py [--dest data] [--mnist-only|--cifar-only]

Lives outside the library on purpose: the package itself never touches the
network.
"""

import argparse
import sys
import tarfile
import urllib.request
from pathlib import Path

MNIST_MIRRORS = [
    "https://ossci-datasets.s3.amazonaws.com/mnist/",
    "https://storage.googleapis.com/cvdf-datasets/mnist/",
]
MNIST_FILES = [
    "train-images-idx3-ubyte.gz",
    "train-labels-idx1-ubyte.gz",
    "t10k-images-idx3-ubyte.gz",
    "t10k-labels-idx1-ubyte.gz",
]
CIFAR_URL = "https://www.cs.toronto.edu/~kriz/cifar-10-binary.tar.gz"


def download(url: str, dest: Path) -> bool:
    try:
        print(f"fetching {url}")
        with urllib.request.urlopen(url, timeout=60) as resp:
            dest.write_bytes(resp.read())
        return True
    except Exception as err:  # noqa: BLE001 - report and try the next mirror
        print(f"  failed: {err}", file=sys.stderr)
        return False


def fetch_mnist(dest: Path) -> bool:
    ok = True
    for name in MNIST_FILES:
        target = dest / name
        if target.exists():
            print(f"{target} already present")
            continue
        if not any(download(base + name, target) for base in MNIST_MIRRORS):
            ok = False
    return ok


def fetch_cifar(dest: Path) -> bool:
    batches = dest / "cifar-10-batches-bin"
    if batches.exists():
        print(f"{batches} already present")
        return True
    archive = dest / "cifar-10-binary.tar.gz"
    if not archive.exists() and not download(CIFAR_URL, archive):
        return False
    print(f"extracting {archive}")
    with tarfile.open(archive) as tar:
        tar.extractall(dest)
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data")
    parser.add_argument("--mnist-only", action="store_true")
    parser.add_argument("--cifar-only", action="store_true")
    args = parser.parse_args()
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    ok = True
    if not args.cifar_only:
        ok &= fetch_mnist(dest)
    if not args.mnist_only:
        ok &= fetch_cifar(dest)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
