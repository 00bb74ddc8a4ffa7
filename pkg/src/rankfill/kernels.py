"""Hot inner loops with a numba fast path and a pure-numpy fallback.

The active backend is chosen at import time: set ``RANKFILL_NO_NUMBA=1`` to
force the numpy implementations (useful for debugging and for the
``benchmarks/bench_kernels.py`` comparison). Both backends are exact, not
approximations of each other; results agree to floating-point rounding.
"""

import os

import numpy as np


def _np_d1(u):
    """Forward periodic difference along columns: out[i,j] = u[i,j+1]-u[i,j]."""
    return np.roll(u, -1, axis=1) - u


def _np_d2(u):
    """Forward periodic difference along rows: out[i,j] = u[i+1,j]-u[i,j]."""
    return np.roll(u, -1, axis=0) - u


def _np_div_adjoint(m1, m2):
    """Exact adjoint of (d1, d2) under the Frobenius inner product."""
    return (np.roll(m1, 1, axis=1) - m1) + (np.roll(m2, 1, axis=0) - m2)


def _np_prox_apply(m1, m2, k0, k1, k2, k3, t2):
    """Radial shrinkage of a 2-vector field.

    Each pixel vector r is scaled by zeta(|r|): k1 below the inner knee k0,
    k2 - k3/|r| between k0 and t2, and 1 at or beyond t2. |r|=0 falls in the
    first branch (k0 > 0), so the guarded division never matters there.
    """
    norm = np.hypot(m1, m2)
    safe = np.where(norm > 0.0, norm, 1.0)
    zeta = np.where(norm < k0, k1, np.where(norm < t2, k2 - k3 / safe, 1.0))
    return zeta * m1, zeta * m2


_use_numba = os.environ.get("RANKFILL_NO_NUMBA", "").lower() not in ("1", "true", "yes")

if _use_numba:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _use_numba = False

if _use_numba:

    @njit(cache=True)
    def _nb_d1(u):
        n1, n2 = u.shape
        out = np.empty_like(u)
        for i in range(n1):
            for j in range(n2 - 1):
                out[i, j] = u[i, j + 1] - u[i, j]
            out[i, n2 - 1] = u[i, 0] - u[i, n2 - 1]
        return out

    @njit(cache=True)
    def _nb_d2(u):
        n1, n2 = u.shape
        out = np.empty_like(u)
        for i in range(n1 - 1):
            for j in range(n2):
                out[i, j] = u[i + 1, j] - u[i, j]
        for j in range(n2):
            out[n1 - 1, j] = u[0, j] - u[n1 - 1, j]
        return out

    @njit(cache=True)
    def _nb_div_adjoint(m1, m2):
        n1, n2 = m1.shape
        out = np.empty_like(m1)
        for i in range(n1):
            ip = i - 1 if i > 0 else n1 - 1
            for j in range(n2):
                jp = j - 1 if j > 0 else n2 - 1
                out[i, j] = (m1[i, jp] - m1[i, j]) + (m2[ip, j] - m2[i, j])
        return out

    @njit(cache=True)
    def _nb_prox_apply(m1, m2, k0, k1, k2, k3, t2):
        n1, n2 = m1.shape
        out1 = np.empty_like(m1)
        out2 = np.empty_like(m2)
        for i in range(n1):
            for j in range(n2):
                a = m1[i, j]
                b = m2[i, j]
                norm = np.sqrt(a * a + b * b)
                if norm < k0:
                    z = k1
                elif norm < t2:
                    z = k2 - k3 / norm
                else:
                    z = 1.0
                out1[i, j] = z * a
                out2[i, j] = z * b
        return out1, out2

    d1 = _nb_d1
    d2 = _nb_d2
    div_adjoint = _nb_div_adjoint
    prox_apply = _nb_prox_apply
    BACKEND = "numba"
else:
    d1 = _np_d1
    d2 = _np_d2
    div_adjoint = _np_div_adjoint
    prox_apply = _np_prox_apply
    BACKEND = "numpy"

# Both implementations, for cross-checking and benchmarking regardless of
# which backend is active.
NUMPY_KERNELS = {
    "d1": _np_d1,
    "d2": _np_d2,
    "div_adjoint": _np_div_adjoint,
    "prox_apply": _np_prox_apply,
}
NUMBA_KERNELS = (
    {"d1": _nb_d1, "d2": _nb_d2, "div_adjoint": _nb_div_adjoint, "prox_apply": _nb_prox_apply}
    if _use_numba
    else None
)
