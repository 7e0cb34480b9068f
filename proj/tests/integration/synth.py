"""Synthetic CSV writers for the CLI workflow tests."""

import numpy as np


def ar1_design(rng, n, p, phi=0.9):
    x = np.empty((n, p))
    x[:, 0] = rng.standard_normal(n)
    root = np.sqrt(1 - phi * phi)
    for j in range(1, p):
        x[:, j] = phi * x[:, j - 1] + root * rng.standard_normal(n)
    return x


def regression(rng, n, beta):
    x = ar1_design(rng, n, beta.size)
    eps = rng.standard_t(4, size=n) / np.sqrt(2)
    return x, x @ beta + eps


def write_csv(path, x, y=None):
    cols = [f"x{j + 1}" for j in range(x.shape[1])]
    data = x if y is None else np.column_stack([y, x])
    header = cols if y is None else ["y", *cols]
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in data:
            f.write(",".join(repr(float(v)) for v in row) + "\n")


def lambda_max(x, y):
    n = x.shape[0]
    scale = np.sqrt((x * x).sum(axis=0) / n)
    return np.max(np.abs((x / scale).T @ y) / n)
