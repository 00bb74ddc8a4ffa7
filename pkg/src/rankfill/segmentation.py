"""Noise injection, 1-D k-means, and label-to-intensity rendering."""

from dataclasses import dataclass

import numpy as np

from .errors import ClusterDomainError


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise: mean is the noise level, variance defaults 0.01."""

    mean: float = 0.0
    variance: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")


@dataclass
class Clustering:
    k: int
    labels: np.ndarray
    centroids: np.ndarray  # ascending


def add_gaussian_noise(im, spec):
    """clip(im + N(mean, variance), 0, 1), deterministic per seed."""
    im = np.asarray(im, dtype=np.float64)
    rng = np.random.default_rng(spec.seed)
    noisy = im + rng.normal(spec.mean, np.sqrt(spec.variance), size=im.shape)
    return np.clip(noisy, 0.0, 1.0)


def kmeans(values, k, seed=0, max_iter=300):
    """Lloyd iterations with k-means++ seeding on scalar values.

    Centroids come back sorted ascending with labels remapped accordingly;
    the within-cluster sum of squares never increases across iterations.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if k < 1:
        raise ClusterDomainError("k must be >= 1")
    if k > np.unique(v).size:
        raise ClusterDomainError(f"k={k} exceeds the number of distinct values")

    rng = np.random.default_rng(seed)
    centers = _plus_plus_init(v, k, rng)
    labels = np.argmin(np.abs(v[:, None] - centers[None, :]), axis=1)
    prev_wcss = np.inf
    for _ in range(max_iter):
        for c in range(k):
            sel = labels == c
            if sel.any():
                centers[c] = v[sel].mean()
            else:
                # re-seed a dead cluster at the worst-fit point
                centers[c] = v[np.argmax(np.abs(v - centers[labels]))]
        new_labels = np.argmin(np.abs(v[:, None] - centers[None, :]), axis=1)
        wcss = float(np.sum((v - centers[new_labels]) ** 2))
        assert wcss <= prev_wcss + 1e-9
        prev_wcss = wcss
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels

    order = np.argsort(centers)
    remap = np.empty(k, dtype=np.intp)
    remap[order] = np.arange(k)
    centers = centers[order]
    labels = remap[labels]
    for c in range(k):  # final exact consistency of centroids with labels
        sel = labels == c
        if sel.any():
            centers[c] = v[sel].mean()
    return Clustering(k=k, labels=labels.reshape(np.shape(values)), centroids=centers)


def _plus_plus_init(v, k, rng):
    centers = np.empty(k)
    centers[0] = v[rng.integers(v.size)]
    dist2 = (v - centers[0]) ** 2
    for c in range(1, k):
        total = dist2.sum()
        if total <= 0:
            centers[c:] = np.unique(v)[: k - c]  # degenerate: duplicate-heavy data
            break
        centers[c] = v[rng.choice(v.size, p=dist2 / total)]
        dist2 = np.minimum(dist2, (v - centers[c]) ** 2)
    return centers


def segment_image(u, k, seed=0, palette=None):
    """Replace each pixel by its cluster's palette entry or centroid.

    A palette lists k intensities assigned to clusters in ascending-centroid
    order (e.g. black/gray/white for three regions).
    """
    u = np.asarray(u, dtype=np.float64)
    clustering = kmeans(u, k, seed=seed)
    if palette is not None:
        palette = np.asarray(palette, dtype=np.float64)
        if palette.size != k:
            raise ValueError(f"palette has {palette.size} entries, expected {k}")
        levels = palette
    else:
        levels = clustering.centroids
    return levels[clustering.labels]
