"""Edge-preserving piecewise penalty and its closed-form proximal map.

The penalty acts on gradient magnitudes: quadratic for small ones, concave in
a transition band, and constant beyond the saturation knee, so strong edges
pay no extra cost. Its prox is a radial shrinkage with three branches whose
coefficients depend on the quadratic coupling weight beta1.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NonConvexSubproblemError, ShapeMismatchError


@dataclass(frozen=True)
class PhiParams:
    """Penalty knobs: non-convexity strength a, knees 0 < t < t2."""

    a: float
    t: float
    t2: float = 0.5

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be positive")
        if not 0 < self.t < self.t2:
            raise ValueError("require 0 < t < t2")


@dataclass(frozen=True)
class ShrinkCoefficients:
    """Branch coefficients of the radial shrinkage, valid only for beta1 > a."""

    kappa0: float
    kappa1: float
    kappa2: float
    kappa3: float
    beta1: float
    t2: float


def phi(t, p):
    """Penalty value at nonnegative magnitude t (scalar or array)."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0):
        raise ValueError("phi is defined for nonnegative arguments")
    a, lo, hi = p.a, p.t, p.t2
    quad = a * (hi - lo) * t**2 / (2.0 * lo)
    concave = -0.5 * a * t**2 + a * hi * t - 0.5 * a * lo * hi
    flat = 0.5 * a * hi * (hi - lo)
    out = np.where(t < lo, quad, np.where(t < hi, concave, flat))
    return float(out) if out.ndim == 0 else out


def shrink_coefficients(p, beta1):
    """Branch coefficients of the prox of phi(|.|) with weight beta1/2."""
    if beta1 <= p.a:
        raise NonConvexSubproblemError(
            f"beta1={beta1} must exceed a={p.a} for a strongly convex subproblem"
        )
    kappa0 = p.t + (p.a / beta1) * (p.t2 - p.t)
    return ShrinkCoefficients(
        kappa0=kappa0,
        kappa1=p.t / kappa0,
        kappa2=beta1 / (beta1 - p.a),
        kappa3=p.a * p.t2 / (beta1 - p.a),
        beta1=beta1,
        t2=p.t2,
    )


def phi_prox(r, coeffs):
    """Minimizer of phi(|m|) + (beta1/2)|m - r|^2 over 2-vectors m."""
    r = np.asarray(r, dtype=np.float64)
    norm = float(np.hypot(r[0], r[1]))
    if norm < coeffs.kappa0:
        zeta = coeffs.kappa1
    elif norm < coeffs.t2:
        zeta = coeffs.kappa2 - coeffs.kappa3 / norm
    else:
        zeta = 1.0
    return zeta * r


def prox_field(target, coeffs):
    """Apply :func:`phi_prox` to every pixel of a (2, n1, n2) field."""
    target = np.ascontiguousarray(target, dtype=np.float64)
    if target.ndim != 3 or target.shape[0] != 2:
        raise ShapeMismatchError(f"expected (2, n1, n2) field, got {target.shape}")
    out1, out2 = kernels.prox_apply(
        target[0],
        target[1],
        coeffs.kappa0,
        coeffs.kappa1,
        coeffs.kappa2,
        coeffs.kappa3,
        coeffs.t2,
    )
    return np.stack((out1, out2))
