#!/usr/bin/env python3
"""Build the desk-scale MNIST subset used by the acceptance suite.

The source is the `mnist` npm package (10,000 MNIST digits stored as
per-class JSON arrays of 784 floats in [0, 1]). The first TRAIN_PER_CLASS
digits of every class go to the training split and the next TEST_PER_CLASS
to the test split; each split is shuffled with a fixed seed and written as
IDX files (big-endian, magic 0x00000803 / 0x00000801).

    npm pack mnist && tar xzf mnist-1.1.0.tgz
    python3 scripts/make_mnist_subset.py package/src/digits data/mnist-desk
"""
import json
import random
import struct
import sys
from pathlib import Path

TRAIN_PER_CLASS = 200
TEST_PER_CLASS = 50
SEED = 20190101


def write_idx(prefix: Path, rows, labels):
    with open(f"{prefix}-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(rows), 28, 28))
        for r in rows:
            f.write(bytes(r))
    with open(f"{prefix}-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))


def main():
    src, dst = Path(sys.argv[1]), Path(sys.argv[2])
    dst.mkdir(parents=True, exist_ok=True)
    train, test = [], []
    for digit in range(10):
        data = json.loads((src / f"{digit}.json").read_text())["data"]
        n = len(data) // 784
        assert n >= TRAIN_PER_CLASS + TEST_PER_CLASS, (digit, n)
        images = [[min(255, max(0, round(v * 255))) for v in data[i * 784:(i + 1) * 784]] for i in range(n)]
        train += [(img, digit) for img in images[:TRAIN_PER_CLASS]]
        test += [(img, digit) for img in images[TRAIN_PER_CLASS:TRAIN_PER_CLASS + TEST_PER_CLASS]]
    rng = random.Random(SEED)
    rng.shuffle(train)
    rng.shuffle(test)
    write_idx(dst / "train", [r for r, _ in train], [l for _, l in train])
    write_idx(dst / "t10k", [r for r, _ in test], [l for _, l in test])
    print(f"wrote {len(train)} train / {len(test)} test digits to {dst}")


if __name__ == "__main__":
    main()
