#!/usr/bin/env python3
"""Plot accuracy and loss curves from one or more history CSVs.

Usage: python scripts/plot_history.py run_a/history.csv [run_b/history.csv ...]
       [--out curves.png]
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load(path):
    data = np.genfromtxt(path, delimiter=",", names=True, comments="#")
    return data


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("histories", nargs="+")
    parser.add_argument("--out", default="curves.png")
    args = parser.parse_args()

    fig, (ax_acc, ax_loss) = plt.subplots(1, 2, figsize=(11, 4))
    for path in args.histories:
        name = Path(path).parent.name or Path(path).stem
        data = load(path)
        ax_acc.plot(data["epoch"], data["train_acc"], label=f"{name} train")
        if not np.all(np.isnan(data["test_acc"])):
            ax_acc.plot(data["epoch"], data["test_acc"], "--", label=f"{name} test")
        ax_loss.plot(data["epoch"], data["loss"], label=name)
    ax_acc.set_xlabel("epoch")
    ax_acc.set_ylabel("accuracy")
    ax_acc.legend()
    ax_loss.set_xlabel("epoch")
    ax_loss.set_ylabel("mean binary cross-entropy")
    ax_loss.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
