"""ADMM main loop with parameter derivation, stopping rule, and trace.

The objective couples a quadratic fidelity (weight lam), the edge-preserving
gradient penalty (split variable M with multiplier Q, weight beta1), and the
nuclear norm (split variable Z with multiplier O, weight beta2). All three
subproblem solves are closed-form: an FFT screened solve for U, singular
value thresholding for Z, and radial shrinkage for M.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, ParameterDomainError
from .image_core import build_denominator, div_adjoint, grad, spectral_solve
from .low_rank import svt
from .metrics import psnr, rel_change
from .penalty import PhiParams, prox_field, shrink_coefficients


@dataclass(frozen=True)
class SolverParams:
    """User knobs plus the derived weights; build via :func:`derive_params`."""

    a: float
    t: float
    t2: float
    rho1: float
    rho2: float
    tau1: float
    tau2: float
    tau3: float
    tol: float
    max_iter: int
    lam: float
    beta1: float
    beta2: float
    mu: float

    @property
    def phi(self):
        return PhiParams(a=self.a, t=self.t, t2=self.t2)


@dataclass
class IterationTrace:
    """Per-iteration diagnostics; one entry per completed step."""

    rel_change: list = field(default_factory=list)
    primal_gap: list = field(default_factory=list)
    coupling_gap: list = field(default_factory=list)
    psnr: list = field(default_factory=list)
    status: str = "max_iter"

    def __len__(self):
        return len(self.rel_change)


@dataclass
class SolverState:
    u: np.ndarray
    z: np.ndarray
    m: np.ndarray
    q: np.ndarray
    o: np.ndarray
    k: int = 0


def derive_params(
    a=0.1,
    t=1e-6,
    t2=0.5,
    rho1=2.5,
    rho2=3.001,
    tau1=2.5,
    tau2=2.5,
    tau3=1.0001,
    tol=1e-4,
    max_iter=1000,
):
    """Derive (lam, beta1, beta2, mu) from the scale-free knobs and validate.

    lam = tau1*9*a with tau1 > 1 keeps the full objective strictly convex;
    beta1 scales the larger of a/(rho1-1) and 2*a*rho1/(rho1-1)^2; beta2
    scales the smaller of rho2*(lam-8a)/(rho2-1) and its 2/(rho2-1) multiple.
    tau3 slightly above 1 technically exceeds the strict beta2 upper bound,
    so values in (1, 1.001] draw a warning instead of an error.
    """
    if a <= 0:
        raise ParameterDomainError("a > 0 violated")
    if t <= 0:
        raise ParameterDomainError("T > 0 violated")
    if t2 <= t:
        raise ParameterDomainError("T2 > T violated")
    if rho1 <= 1:
        raise ParameterDomainError("rho1 > 1 violated")
    if rho2 <= 3:
        raise ParameterDomainError("rho2 > 3 violated")
    if tau1 <= 1:
        raise ParameterDomainError("tau1 > 1 violated (lam > 9a fails)")
    if tau2 < 1:
        raise ParameterDomainError("tau2 >= 1 violated")
    if tau3 <= 0:
        raise ParameterDomainError("tau3 > 0 violated")
    if tol <= 0:
        raise ParameterDomainError("tol > 0 violated")
    if max_iter < 1:
        raise ParameterDomainError("max_iter >= 1 violated")

    lam = tau1 * 9.0 * a
    mu = lam - 9.0 * a
    if mu <= 0:
        raise ParameterDomainError("lam > 9a violated")
    if lam <= 8.0 * a:
        raise ParameterDomainError("lam > 8a violated (beta2 bound degenerates)")

    beta1 = tau2 * max(a / (rho1 - 1.0), 2.0 * a * rho1 / (rho1 - 1.0) ** 2)
    beta2 = tau3 * min(
        rho2 * (lam - 8.0 * a) / (rho2 - 1.0),
        2.0 * rho2 * (lam - 8.0 * a) / (rho2 - 1.0) ** 2,
    )
    if beta1 <= a:
        raise ParameterDomainError("beta1 > a violated")
    if beta2 <= 0:
        raise ParameterDomainError("beta2 > 0 violated")
    if 1.0 < tau3 <= 1.001:
        warnings.warn(
            "tau3 marginally exceeds the strict beta2 upper bound; proceeding",
            stacklevel=2,
        )

    return SolverParams(
        a=a, t=t, t2=t2, rho1=rho1, rho2=rho2, tau1=tau1, tau2=tau2, tau3=tau3,
        tol=tol, max_iter=max_iter, lam=lam, beta1=beta1, beta2=beta2, mu=mu,
    )


def completion_defaults(**overrides):
    """Default profile for completion runs."""
    return derive_params(**{"rho2": 3.001, **overrides})


def segmentation_defaults(noise_level=0.0, **overrides):
    """Default profile for segmentation runs; a grows with the noise level."""
    a = 0.2 if noise_level >= 0.2 else 0.1
    return derive_params(**{"a": a, "rho2": 10.001, **overrides})


def init_state(b):
    """Warm start at the observation: zero initial gaps, zero multipliers."""
    b = np.ascontiguousarray(b, dtype=np.float64)
    return SolverState(u=b.copy(), z=b.copy(), m=grad(b), q=np.zeros((2,) + b.shape),
                       o=np.zeros_like(b))


class _Workspace:
    """Shape-dependent precomputations reused across steps."""

    def __init__(self, shape, params):
        # The U-solve screens with lam + beta2: the quadratic coupling to Z
        # contributes beta2*U to the normal equations.
        self.denom = build_denominator(
            shape[0], shape[1], params.lam + params.beta2, params.beta1
        )
        self.coeffs = shrink_coefficients(params.phi, params.beta1)


def step(state, b, params, work=None, observed=None):
    """One ADMM sweep: U, Z, M, then both multipliers.

    With an ``observed`` boolean mask, unobserved entries of b are imputed
    with the current iterate before the fidelity term is applied, so missing
    pixels are fitted by the regularizers alone rather than dragged to zero.
    """
    if work is None:
        work = _Workspace(b.shape, params)
    lam, b1, b2 = params.lam, params.beta1, params.beta2

    if observed is not None:
        b = np.where(observed, b, state.u)
    r = lam * b + b1 * div_adjoint(state.m) - div_adjoint(state.q) + b2 * state.z - state.o
    u = spectral_solve(r, work.denom)
    z = svt(u + state.o / b2, 1.0 / b2)
    du = grad(u)
    m = prox_field(du + state.q / b1, work.coeffs)
    q = state.q + b1 * (du - m)
    o = state.o + b2 * (u - z)

    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(z)) and np.all(np.isfinite(m))):
        raise DivergenceError(state.k + 1)
    return SolverState(u=u, z=z, m=m, q=q, o=o, k=state.k + 1)


def run(b, params, reference=None, observed=None):
    """Iterate until the relative change drops to tol or max_iter is hit.

    Returns (final U, IterationTrace). With a reference image, its per
    iteration quality is recorded in the trace; ``observed`` enables the
    imputed-fidelity completion mode of :func:`step`.
    """
    b = np.ascontiguousarray(b, dtype=np.float64)
    work = _Workspace(b.shape, params)
    state = init_state(b)
    trace = IterationTrace()

    for _ in range(params.max_iter):
        prev = state.u
        state = step(state, b, params, work, observed=observed)
        change = rel_change(state.u, prev)
        du = grad(state.u)
        trace.rel_change.append(change)
        trace.primal_gap.append(float(np.linalg.norm(du - state.m)))
        trace.coupling_gap.append(float(np.linalg.norm(state.u - state.z)))
        if reference is not None:
            trace.psnr.append(psnr(reference, state.u))
        # The warm start makes the first U-update an exact fixed point of the
        # u-subproblem, so the change test only becomes meaningful at k >= 2.
        if change <= params.tol and state.k >= 2:
            trace.status = "converged"
            break

    return state.u, trace
