"""Command-line entry point.

Subcommands: prepare, train, eval, infer, budget, selfcheck. Every output
carries the seed and a schema tag; exit codes are 0 success, 1 usage,
2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import artifacts, baseline, dataset_io, photon_budget, selfcheck, trainer
from .errors import (
    DegenerateProbeError,
    EmptyClassError,
    FormatError,
    HomnError,
    InvalidOverlapError,
    ShapeError,
    ZeroFieldError,
)
from .field_encoding import Domain, encode_dataset
from .field_encoding import Field
from .neuron import NeuronConfig, overlap_f, predict

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

MNIST_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}
CIFAR_TRAIN_BATCHES = tuple(f"data_batch_{i}.bin" for i in range(1, 6))
CIFAR_TEST_BATCH = "test_batch.bin"

DEFAULT_CLASSES = {"mnist": (0, 1), "cifar10": (3, 5), "synthetic": (0, 1)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="homn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", parents=[], help="build a binary dataset artifact")
    p.add_argument("--dataset", choices=("mnist", "cifar10", "synthetic"), required=True)
    p.add_argument(
        "--data-dir",
        default=None,
        help="raw dataset root (default: $HOMN_DATA_DIR or ./data)",
    )
    p.add_argument("--class-a", type=int, default=None, help="original label mapped to 0")
    p.add_argument("--class-b", type=int, default=None, help="original label mapped to 1")
    p.add_argument("--pad-to", type=int, default=32, help="square side for zero-padding")
    p.add_argument("--count", type=int, default=200, help="synthetic images per class per split")
    p.add_argument("--seed", type=int, default=0, help="synthetic generator seed")
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="fit a model on a prepared artifact")
    p.add_argument("--data", required=True, help="directory produced by prepare")
    p.add_argument("--model", choices=("qon", "classical", "analog"), default="qon")
    _add_neuron_flags(p)
    p.add_argument("--eta-lambda", type=float, default=0.075)
    p.add_argument("--eta-b", type=float, default=0.005)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grad", choices=("exact", "approx"), default="exact")
    p.add_argument("--init", choices=("uniform01", "constant"), default="uniform01")
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="accuracy/loss of a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--split", choices=("train", "test", "both"), default="both")

    p = sub.add_parser("infer", help="predict one item, optionally with shot noise")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--split", choices=("train", "test"), default="test")
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--shots", type=int, default=None, help="photon pairs for the coincidence estimate")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("budget", help="photon-cost scaling table")
    p.add_argument("--resolutions", default="64,256,1024")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--sigma", type=float, default=0.1)
    p.add_argument("--mean-brightness", type=float, default=1.0)
    p.add_argument("--depth", type=int, default=255)
    p.add_argument("--model", default=None, help="optional classical model JSON")
    p.add_argument("--data", default=None, help="artifact dir for the model's input image")
    p.add_argument("--split", choices=("train", "test"), default="test")
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("selfcheck", help="run the physics/numerics invariant suite")
    p.add_argument("--seed", type=int, default=0)

    return parser


def _add_neuron_flags(p) -> None:
    p.add_argument("--domain", choices=("spatial", "fourier"), default="spatial")
    p.add_argument("--beta", type=float, default=10.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=1.0)


def _data_dir(args) -> Path:
    if args.data_dir is not None:
        return Path(args.data_dir)
    return Path(os.environ.get("HOMN_DATA_DIR", "data"))


def _find(root: Path, *names):
    """Locate a raw file, tolerating .gz and the cifar batches folder."""
    candidates = []
    for name in names:
        candidates += [root / name, root / f"{name}.gz"]
        candidates += [root / "cifar-10-batches-bin" / name]
    for c in candidates:
        if c.exists():
            return c
    raise FileNotFoundError(f"none of {[str(c) for c in candidates]} exist")


def _load_split(args, split: str) -> dataset_io.LabeledSet:
    root = _data_dir(args)
    if args.dataset == "mnist":
        images, labels = MNIST_FILES[split]
        return dataset_io.load_mnist(_find(root, images), _find(root, labels))
    if args.dataset == "cifar10":
        if split == "train":
            return dataset_io.load_cifar10([_find(root, n) for n in CIFAR_TRAIN_BATCHES])
        return dataset_io.load_cifar10([_find(root, CIFAR_TEST_BATCH)])
    seed = args.seed if split == "train" else args.seed + 1
    return dataset_io.make_synthetic(args.count, args.pad_to, args.pad_to, seed=seed)


def cmd_prepare(args) -> int:
    class_a = args.class_a if args.class_a is not None else DEFAULT_CLASSES[args.dataset][0]
    class_b = args.class_b if args.class_b is not None else DEFAULT_CLASSES[args.dataset][1]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    splits = {}
    for split in ("train", "test"):
        raw = _load_split(args, split)
        binary = dataset_io.filter_binary(raw, class_a, class_b)
        images = binary.images
        if images.ndim == 4:  # RGB -> grayscale
            images = dataset_io.to_grayscale(images)
        if args.pad_to:
            images = dataset_io.pad_to(images, args.pad_to, args.pad_to)
        digest = artifacts.write_dataset(out / f"{split}.bin", images, binary.labels)
        splits[split] = {
            "file": f"{split}.bin",
            "count": int(len(binary)),
            "count_class_0": int(np.sum(binary.labels == 0)),
            "count_class_1": int(np.sum(binary.labels == 1)),
            "sha256": digest,
        }
    manifest = {
        "source": args.dataset,
        "classes": [int(class_a), int(class_b)],
        "class_map": {str(class_a): 0, str(class_b): 1},
        "height": int(args.pad_to),
        "width": int(args.pad_to),
        "seed": int(args.seed),
        "splits": splits,
    }
    if args.dataset == "cifar10":
        manifest["class_names"] = [
            dataset_io.CIFAR10_CLASSES[class_a],
            dataset_io.CIFAR10_CLASSES[class_b],
        ]
    artifacts.write_manifest(out / "manifest.json", manifest)
    print(json.dumps({"schema": artifacts.MANIFEST_SCHEMA, "out": str(out), **manifest}))
    return EXIT_OK


def _load_field_dataset(data_dir: Path, split: str, domain: Domain):
    images, labels = artifacts.read_dataset(data_dir / f"{split}.bin")
    return encode_dataset(images, labels, domain)


def cmd_train(args) -> int:
    data_dir = Path(args.data)
    domain = Domain(args.domain)
    cfg = trainer.TrainConfig(
        eta_lambda=args.eta_lambda,
        eta_b=args.eta_b,
        epochs=args.epochs,
        seed=args.seed,
        gradient_mode=trainer.GradientMode(args.grad),
        neuron=NeuronConfig(beta=args.beta, gamma=args.gamma, alpha=args.alpha, domain=domain),
        init=trainer.InitScheme(args.init),
    )
    train_set = _load_field_dataset(data_dir, "train", domain)
    test_set = _load_field_dataset(data_dir, "test", domain)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.model == "qon":
        params, history = trainer.fit(train_set, cfg, test=test_set)
        train_acc, train_loss = trainer.evaluate(params, train_set, cfg)
        test_acc, test_loss = trainer.evaluate(params, test_set, cfg)
        doc = artifacts.probe_to_json(params, cfg.neuron, args.seed)
    else:
        params, history = baseline.fit_classical(train_set, cfg, test=test_set, model=args.model)
        train_acc, train_loss = baseline.evaluate_classical(params, train_set, cfg, model=args.model)
        test_acc, test_loss = baseline.evaluate_classical(params, test_set, cfg, model=args.model)
        doc = artifacts.classical_to_json(params, cfg.neuron, args.seed, model=args.model)

    doc.update(
        {
            "eta_lambda": args.eta_lambda,
            "eta_b": args.eta_b,
            "epochs": args.epochs,
            "gradient_mode": args.grad,
            "final_train_accuracy": train_acc,
            "final_test_accuracy": test_acc,
        }
    )
    artifacts.write_model(out / "model.json", doc)
    artifacts.write_history_csv(out / "history.csv", history, seed=args.seed)
    print(
        json.dumps(
            {
                "schema": "homn-train-summary-v1",
                "model": args.model,
                "domain": domain.value,
                "seed": args.seed,
                "epochs": args.epochs,
                "final_train_accuracy": train_acc,
                "final_train_loss": train_loss,
                "final_test_accuracy": test_acc,
                "final_test_loss": test_loss,
                "out": str(out),
            }
        )
    )
    return EXIT_OK


def _model_and_config(path):
    doc = artifacts.read_model(path)
    params, cfg_neuron = artifacts.model_params(doc)
    cfg = trainer.TrainConfig(neuron=cfg_neuron, epochs=1, seed=doc.get("seed", 0))
    return doc, params, cfg


def cmd_eval(args) -> int:
    doc, params, cfg = _model_and_config(args.model)
    data_dir = Path(args.data)
    result = {"schema": "homn-eval-v1", "model": doc["model"], "seed": doc.get("seed")}
    splits = ("train", "test") if args.split == "both" else (args.split,)
    for split in splits:
        data = _load_field_dataset(data_dir, split, Domain(doc["domain"]))
        if doc["model"] == "qon":
            acc, loss = trainer.evaluate(params, data, cfg)
        else:
            acc, loss = baseline.evaluate_classical(params, data, cfg, model=doc["model"])
        result[f"{split}_accuracy"] = acc
        result[f"{split}_loss"] = loss
    print(json.dumps(result))
    return EXIT_OK


def cmd_infer(args) -> int:
    doc, params, cfg = _model_and_config(args.model)
    data_dir = Path(args.data)
    images, labels = artifacts.read_dataset(data_dir / f"{args.split}.bin")
    if not 0 <= args.index < len(images):
        raise IndexError(f"index {args.index} outside [0, {len(images)})")
    domain = Domain(doc["domain"])
    data = encode_dataset(images[args.index : args.index + 1], labels[args.index : args.index + 1], domain)
    result = {
        "schema": artifacts.PREDICTION_SCHEMA,
        "model": doc["model"],
        "seed": args.seed,
        "split": args.split,
        "index": args.index,
        "true_label": int(labels[args.index]),
    }
    ncfg = cfg.neuron
    if doc["model"] == "qon":
        field = Field(amplitudes=data.fields[0], domain=domain)
        f = overlap_f(field, params)
        F = predict(f, params, ncfg)
        result.update({"f": f, "F": F, "label": int(F >= 0.5)})
        if args.shots is not None:
            # with losses the measured overlap is alpha * f for unit-norm fields
            report = photon_budget.sample_coincidences(
                ncfg.alpha * f, ncfg.alpha, args.shots, seed=args.seed
            )
            F_hat = predict(report.f_hat / ncfg.alpha, params, ncfg)
            result["shot_noise"] = {
                "n_pairs": report.n_pairs,
                "n_photons": report.n_photons,
                "coincidences": report.coincidences,
                "p_hat": report.p_hat,
                "f_hat": report.f_hat,
                "epsilon": report.epsilon,
                "F": F_hat,
                "label": int(F_hat >= 0.5),
            }
    else:
        if args.shots is not None:
            raise ValueError("--shots applies to the optical model only")
        F = baseline.predict_classical_batch(params, data, cfg, model=doc["model"])[0]
        result.update({"F": float(F), "label": int(F >= 0.5)})
    print(json.dumps(result))
    return EXIT_OK


def cmd_budget(args) -> int:
    resolutions = [int(tok) for tok in str(args.resolutions).split(",") if tok]
    model = image = None
    if args.model is not None:
        doc = artifacts.read_model(args.model)
        if doc["model"] == "qon":
            raise ValueError("budget --model expects a classical/analog model")
        model, _ = artifacts.model_params(doc)
        if args.data is None:
            raise ValueError("budget --model also needs --data for the input image")
        images, _ = artifacts.read_dataset(Path(args.data) / f"{args.split}.bin")
        image = images[args.index].astype(np.float64).ravel()
    rows = photon_budget.scaling_report(
        resolutions,
        epsilon=args.epsilon,
        sigma=args.sigma,
        mean_brightness=args.mean_brightness,
        depth=args.depth,
        model=model,
        image=image,
    )
    if model is None:
        norms_model, _ = photon_budget.reference_classifier(
            min(resolutions), args.mean_brightness
        )
    else:
        norms_model = model
    csv_text = artifacts.scaling_csv(
        rows,
        epsilon=args.epsilon,
        sigma=args.sigma,
        norms=photon_budget.classifier_norms(norms_model),
    )
    if args.out == "-":
        sys.stdout.write(csv_text)
    else:
        Path(args.out).write_text(csv_text)
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    results = selfcheck.run_selfcheck(seed=args.seed)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"selfcheck seed={args.seed}: {len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_NUMERIC


_COMMANDS = {
    "prepare": cmd_prepare,
    "train": cmd_train,
    "eval": cmd_eval,
    "infer": cmd_infer,
    "budget": cmd_budget,
    "selfcheck": cmd_selfcheck,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FormatError, EmptyClassError, ShapeError, ZeroFieldError, FileNotFoundError, IndexError) as err:
        print(f"homn {args.command}: data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except (DegenerateProbeError, InvalidOverlapError) as err:
        print(f"homn {args.command}: numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as err:
        print(f"homn {args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except HomnError as err:
        print(f"homn {args.command}: {err}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
