"""Periodic difference operators and the FFT-diagonalized screened solve.

Images are plain 2-D float64 arrays. A gradient field is a (2, n1, n2) array:
component 0 holds forward periodic differences along columns, component 1
along rows. Both stencils wrap around, so the composite operator is a
circulant and the linear system lam*U + beta1*D^T D U = R diagonalizes under
the 2-D DFT.
"""

import numpy as np

from . import kernels
from .errors import InternalConsistencyError, ShapeMismatchError

# Imaginary residue above this (relative to the solution magnitude) means the
# spectral solve was fed inconsistent data.
_IMAG_TOL = 1e-6


def d1(u):
    """Forward periodic difference along columns: out[i,j] = u[i,(j+1)%n2] - u[i,j]."""
    return kernels.d1(np.ascontiguousarray(u, dtype=np.float64))


def d2(u):
    """Forward periodic difference along rows: out[i,j] = u[(i+1)%n1,j] - u[i,j]."""
    return kernels.d2(np.ascontiguousarray(u, dtype=np.float64))


def grad(u):
    """Stack both periodic differences into a (2, n1, n2) gradient field."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    return np.stack((kernels.d1(u), kernels.d2(u)))


def div_adjoint(m):
    """Adjoint of :func:`grad` under the Frobenius inner product.

    For all u, m: <grad(u), m> == <u, div_adjoint(m)>.
    """
    m = np.ascontiguousarray(m, dtype=np.float64)
    if m.ndim != 3 or m.shape[0] != 2:
        raise ShapeMismatchError(f"expected (2, n1, n2) field, got {m.shape}")
    return kernels.div_adjoint(m[0], m[1])


def build_denominator(n1, n2, lam, beta1):
    """Eigenvalues of lam*I + beta1*D^T D on the (p, q) frequency grid.

    entry(p,q) = lam + beta1*(4*sin^2(pi*p/n1) + 4*sin^2(pi*q/n2)); the zero
    frequency gives exactly lam, so the operator is invertible for lam > 0.
    """
    if n1 <= 0 or n2 <= 0:
        raise ValueError("image dimensions must be positive")
    if lam <= 0 or beta1 <= 0:
        raise ValueError("lam and beta1 must be positive")
    row = 4.0 * np.sin(np.pi * np.arange(n1) / n1) ** 2
    col = 4.0 * np.sin(np.pi * np.arange(n2) / n2) ** 2
    return lam + beta1 * (row[:, None] + col[None, :])


def spectral_solve(r, denom):
    """Solve lam*U + beta1*D^T D U = r by pointwise division in Fourier space.

    The inverse transform's imaginary residue is dropped; it is checked
    against the solution magnitude as an internal sanity guard.
    """
    r = np.asarray(r, dtype=np.float64)
    if r.shape != denom.shape:
        raise ShapeMismatchError(f"image {r.shape} vs denominator {denom.shape}")
    u_hat = np.fft.fft2(r) / denom
    u = np.fft.ifft2(u_hat)
    scale = max(np.abs(u.real).max(), 1e-300)
    if np.abs(u.imag).max() > _IMAG_TOL * scale:
        raise InternalConsistencyError("spectral solve produced a large imaginary residue")
    return np.ascontiguousarray(u.real)


def reshape_bands(bands):
    """Concatenate a stack of same-shaped bands horizontally into one matrix."""
    bands = [np.asarray(b, dtype=np.float64) for b in bands]
    if not bands:
        raise ValueError("empty band stack")
    shape = bands[0].shape
    for b in bands:
        if b.shape != shape:
            raise ShapeMismatchError("bands have inconsistent shapes")
    return np.concatenate(bands, axis=1)


def split_bands(flat, n_bands):
    """Exact inverse of :func:`reshape_bands`."""
    flat = np.asarray(flat, dtype=np.float64)
    if n_bands <= 0 or flat.shape[1] % n_bands != 0:
        raise ShapeMismatchError(f"cannot split {flat.shape[1]} columns into {n_bands} bands")
    return np.stack(np.split(flat, n_bands, axis=1))
