"""Image completion and segmentation by ADMM with low-rank and
edge-preserving smoothness regularization."""

from .penalty import PhiParams, ShrinkCoefficients, phi, phi_prox, prox_field, shrink_coefficients
from .solver import (
    IterationTrace,
    SolverParams,
    SolverState,
    completion_defaults,
    derive_params,
    init_state,
    run,
    segmentation_defaults,
    step,
)

__all__ = [
    "PhiParams",
    "ShrinkCoefficients",
    "phi",
    "phi_prox",
    "prox_field",
    "shrink_coefficients",
    "IterationTrace",
    "SolverParams",
    "SolverState",
    "completion_defaults",
    "derive_params",
    "init_state",
    "run",
    "segmentation_defaults",
    "step",
]

__version__ = "0.1.0"
