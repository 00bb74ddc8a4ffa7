"""Thin SVD, nuclear norm, and singular value thresholding."""

from dataclasses import dataclass

import numpy as np

from .errors import RankfillError


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD: u_basis @ diag(singulars) @ v_basis.T reconstructs the input."""

    u_basis: np.ndarray
    singulars: np.ndarray
    v_basis: np.ndarray


def svd(a):
    """Thin SVD with nonincreasing singular values."""
    a = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise RankfillError("svd input contains non-finite entries")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return SvdFactors(u_basis=u, singulars=s, v_basis=vt.T)


def nuclear_norm(a):
    """Sum of singular values."""
    return float(np.linalg.svd(np.asarray(a, dtype=np.float64), compute_uv=False).sum())


def svt(a, tau, partial=False):
    """Soft-threshold the singular values of a by tau.

    This is the prox of the nuclear norm: the unique minimizer of
    ||Z||_* + (1/(2*tau))||Z - a||_F^2. With ``partial=True`` only the
    triplets with singular value above tau are computed (identical output,
    cheaper when the thresholded rank is far below min(n1, n2)).
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    a = np.asarray(a, dtype=np.float64)
    if partial:
        return _svt_partial(a, tau)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    keep = np.maximum(s - tau, 0.0)
    return (u * keep) @ vt


def _svt_partial(a, tau):
    from scipy.sparse.linalg import svds

    full = min(a.shape)
    k = min(10, full - 1)
    if k < 1:
        return svt(a, tau)
    while True:
        u, s, vt = svds(a, k=k)
        if s.min() <= tau or k >= full - 1:
            break
        k = min(2 * k, full - 1)
    keep = np.maximum(s - tau, 0.0)
    return (u * keep) @ vt
