"""Labelled Gaussian blobs with extra pure-noise dimensions."""
from __future__ import annotations

import numpy as np


def gaussian_blobs(n: int = 300, centers: int = 4, informative: int = 5, noise: int = 10,
                   cluster_std: float = 1.0, noise_scale: float = 3.0,
                   center_box: tuple = (-10.0, 10.0), seed: int = 0):
    """Return ``(X, labels)``.

    Blob centers are uniform in ``center_box`` over the informative
    dimensions. Noise dimensions are N(0, (noise_scale * cluster_std)^2) for
    every point regardless of blob. Rows are shuffled.
    """
    if centers < 1 or n < centers:
        raise ValueError("need at least one point per blob")
    rng = np.random.default_rng(seed)
    means = rng.uniform(center_box[0], center_box[1], size=(centers, informative))
    sizes = np.full(centers, n // centers)
    sizes[: n % centers] += 1
    labels = np.repeat(np.arange(centers), sizes)
    X_inf = means[labels] + rng.normal(0.0, cluster_std, size=(n, informative))
    X_noise = rng.normal(0.0, noise_scale * cluster_std, size=(n, noise))
    X = np.hstack([X_inf, X_noise])
    order = rng.permutation(n)
    return X[order], labels[order]
