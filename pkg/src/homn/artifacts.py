"""On-disk formats: dataset artifacts, model JSON, history and scaling CSV.

The dataset artifact is a small self-describing binary:

    4s  magic  b"HOMN"
    u32 version (big endian)
    u32 height | u32 width | u32 count
    u8  domain (0 = raw grey levels, spatial source)
    then per item: 1 label byte + height*width grey bytes

Everything else is human-diffable JSON/CSV; every emitted file carries a
schema tag and the seed that produced it.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import struct
from pathlib import Path

import numpy as np

from .baseline import ClassicalParams
from .errors import FormatError, TruncationError
from .field_encoding import Domain
from .neuron import NeuronConfig, ProbeParams
from .trainer import EpochRecord, TrainHistory

DATASET_MAGIC = b"HOMN"
DATASET_VERSION = 1
DOMAIN_RAW = 0

MANIFEST_SCHEMA = "homn-manifest-v1"
MODEL_SCHEMA = "homn-model-v1"
HISTORY_SCHEMA = "homn-history-v1"
SCALING_SCHEMA = "homn-scaling-v1"
PREDICTION_SCHEMA = "homn-prediction-v1"

_HEADER = struct.Struct(">4sIIIIB")


def dataset_to_bytes(images: np.ndarray, labels: np.ndarray) -> bytes:
    images = np.ascontiguousarray(images, dtype=np.uint8)
    labels = np.ascontiguousarray(labels, dtype=np.uint8)
    count, h, w = images.shape
    if labels.shape != (count,):
        raise ValueError(f"{count} images but labels shape {labels.shape}")
    header = _HEADER.pack(DATASET_MAGIC, DATASET_VERSION, h, w, count, DOMAIN_RAW)
    body = np.concatenate(
        [labels[:, None], images.reshape(count, -1)], axis=1
    ).tobytes()
    return header + body


def dataset_from_bytes(data: bytes):
    if len(data) < _HEADER.size:
        raise TruncationError("dataset artifact shorter than its header")
    magic, version, h, w, count, domain = _HEADER.unpack_from(data, 0)
    if magic != DATASET_MAGIC:
        raise FormatError(f"bad dataset magic {magic!r}")
    if version != DATASET_VERSION:
        raise FormatError(f"unsupported dataset version {version}")
    if domain != DOMAIN_RAW:
        raise FormatError(f"unknown payload domain {domain}")
    expected = _HEADER.size + count * (1 + h * w)
    if len(data) < expected:
        raise TruncationError(f"need {expected} bytes, got {len(data)}")
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes")
    body = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    body = body.reshape(count, 1 + h * w)
    labels = body[:, 0].copy()
    images = body[:, 1:].reshape(count, h, w).copy()
    return images, labels


def write_dataset(path, images: np.ndarray, labels: np.ndarray) -> str:
    """Write one split; returns the payload sha256 for the manifest."""
    blob = dataset_to_bytes(images, labels)
    Path(path).write_bytes(blob)
    return hashlib.sha256(blob).hexdigest()


def read_dataset(path):
    return dataset_from_bytes(Path(path).read_bytes())


def write_manifest(path, manifest: dict) -> None:
    manifest = {"schema": MANIFEST_SCHEMA, **manifest}
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_manifest(path) -> dict:
    manifest = json.loads(Path(path).read_text())
    if manifest.get("schema") != MANIFEST_SCHEMA:
        raise FormatError(f"unexpected manifest schema {manifest.get('schema')!r}")
    return manifest


def probe_to_json(params: ProbeParams, cfg: NeuronConfig, seed: int, extra: dict | None = None) -> dict:
    h, w = params.lam.shape
    doc = {
        "schema": MODEL_SCHEMA,
        "model": "qon",
        "seed": seed,
        "height": h,
        "width": w,
        "lambda": params.lam.ravel().tolist(),  # row-major
        "bias": params.bias,
        "beta": cfg.beta,
        "gamma": cfg.gamma,
        "alpha": cfg.alpha,
        "domain": Domain(cfg.domain).value,
    }
    doc.update(extra or {})
    return doc


def classical_to_json(
    params: ClassicalParams, cfg: NeuronConfig, seed: int, model: str, extra: dict | None = None
) -> dict:
    doc = {
        "schema": MODEL_SCHEMA,
        "model": model,
        "seed": seed,
        "n": params.w.size,
        "weights": params.w.tolist(),
        "bias": params.b,
        "beta": cfg.beta,
        "gamma": cfg.gamma,
        "alpha": cfg.alpha,
        "domain": Domain(cfg.domain).value,
    }
    doc.update(extra or {})
    return doc


def write_model(path, doc: dict) -> None:
    if doc.get("schema") != MODEL_SCHEMA:
        raise FormatError("model document lacks the expected schema tag")
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_model(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != MODEL_SCHEMA:
        raise FormatError(f"unexpected model schema {doc.get('schema')!r}")
    return doc


def model_params(doc: dict):
    """Rebuild (params, NeuronConfig) from a model document."""
    cfg = NeuronConfig(
        beta=doc["beta"], gamma=doc["gamma"], alpha=doc["alpha"], domain=Domain(doc["domain"])
    )
    if doc["model"] == "qon":
        lam = np.array(doc["lambda"], dtype=np.float64).reshape(doc["height"], doc["width"])
        return ProbeParams(lam=lam, bias=doc["bias"]), cfg
    return ClassicalParams(w=np.array(doc["weights"], dtype=np.float64), b=doc["bias"]), cfg


HISTORY_COLUMNS = ("epoch", "loss", "train_acc", "test_acc", "norm_lambda", "bias")


def write_history_csv(path, history: TrainHistory, seed: int) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={HISTORY_SCHEMA} seed={seed}\n")
        writer = csv.writer(fh)
        writer.writerow(HISTORY_COLUMNS)
        for rec in history.records:
            writer.writerow(
                [
                    rec.epoch,
                    _fmt(rec.loss),
                    _fmt(rec.train_acc),
                    _fmt(rec.test_acc),
                    _fmt(rec.norm_lambda),
                    _fmt(rec.bias),
                ]
            )


def read_history_csv(path) -> TrainHistory:
    history = TrainHistory()
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith(f"# schema={HISTORY_SCHEMA}"):
            raise FormatError("missing history schema line")
        for row in csv.DictReader(fh):
            history.append(
                EpochRecord(
                    epoch=int(row["epoch"]),
                    loss=float(row["loss"]),
                    train_acc=float(row["train_acc"]),
                    test_acc=float(row["test_acc"]),
                    norm_lambda=float(row["norm_lambda"]),
                    bias=float(row["bias"]),
                )
            )
    return history


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def scaling_csv(
    rows,
    epsilon: float,
    sigma: float,
    seed: int | None = None,
    norms: dict | None = None,
) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={SCALING_SCHEMA} epsilon={epsilon} sigma={sigma} seed={seed}\n")
    buf.write("# imaging column solves sigma^2 = <x>^2 N / n_p (order-of-growth "
              "summaries elsewhere absorb one brightness factor)\n")
    if norms is not None:
        buf.write(
            "# classifier norms at native resolution: "
            f"w_l1={norms['w_l1']!r} w_l2={norms['w_l2']!r} bias={norms['bias']!r}\n"
        )
    writer = csv.writer(buf)
    writer.writerow(
        ["n_pixels", "quantum_photons", "imaging_photons", "classification_photons"]
    )
    for row in rows:
        writer.writerow(
            [row.n_pixels, row.quantum_photons, row.imaging_photons, row.classification_photons]
        )
    return buf.getvalue()
