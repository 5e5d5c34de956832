#!/usr/bin/env python3
"""Regenerate the MNIST 0-vs-1 fixtures under tests/fixtures/.

The images come from the 5000-sample MNIST subset shipped inside the mlxtend
wheel (no dataset download needed). Digits 0 and 1 are shuffled with a fixed
seed; the first 100 become the test split written as IDX files, the rest
train the SVMs.

    pip download --no-deps -d /tmp/wheels mlxtend
    python3 tools/make_fixtures.py --wheel /tmp/wheels/mlxtend-*.whl
"""
import argparse
import gzip
import io
import json
import pathlib
import struct
import zipfile

import numpy as np
from sklearn.svm import SVC


def load_subset(wheel):
    with zipfile.ZipFile(wheel) as z:
        raw = gzip.decompress(z.read("mlxtend/data/data/mnist_5k.csv.gz"))
    data = np.loadtxt(io.BytesIO(raw), delimiter=",")
    return data[:, :-1].astype(np.uint8), data[:, -1].astype(int)


def write_idx(prefix, images, labels):
    n, width = images.shape
    side = int(round(width ** 0.5))
    with open(f"{prefix}-images.idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, n, side, side))
        f.write(images.astype(np.uint8).tobytes())
    with open(f"{prefix}-labels.idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, n))
        f.write(labels.astype(np.uint8).tobytes())


def export_model(path, clf, kernel):
    # sklearn's dual_coef_ has the sign of class index 1; map class 0 -> +1.
    coef = (-clf.dual_coef_[0]).tolist()
    bias = float(-clf.intercept_[0])
    doc = {
        "format_version": 1,
        "kernel": kernel,
        "n_features": int(clf.support_vectors_.shape[1]),
        "support_vectors": clf.support_vectors_.tolist(),
        "dual_coef": coef,
        "bias": bias,
    }
    text = json.dumps(doc, indent=None, allow_nan=False)
    pathlib.Path(path).write_text(text + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wheel", required=True)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"))
    ap.add_argument("--max-sv", type=int, default=200)
    args = ap.parse_args()

    x, y = load_subset(args.wheel)
    keep = (y == 0) | (y == 1)
    x, y = x[keep], y[keep]
    order = np.random.default_rng(20240601).permutation(len(y))
    x, y = x[order], y[order]
    x_test, y_test = x[:100], y[:100]
    x_train, y_train = x[100:] / 255.0, y[100:]

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_idx(str(out / "mnist01-test"), x_test, y_test)

    gamma = 0.02
    rbf = SVC(kernel="rbf", gamma=gamma, C=1.0).fit(x_train, y_train)
    assert len(rbf.support_) <= args.max_sv, len(rbf.support_)
    export_model(out / "mnist01_rbf.json", rbf, {"type": "rbf", "gamma": gamma})

    lin = SVC(kernel="linear", C=1e-3).fit(x_train, y_train)
    export_model(out / "mnist01_linear.json", lin, {"type": "linear"})

    for name, clf in (("rbf", rbf), ("linear", lin)):
        acc = (clf.predict(x_test / 255.0) == y_test).mean()
        print(f"{name}: {len(clf.support_)} support vectors, test accuracy {acc:.2%}")


if __name__ == "__main__":
    main()
