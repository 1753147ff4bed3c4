"""Squeezing limits of regularized two- and three-delta potentials.

Exact transfer matrices, limits along power-law paths, the resulting
one-point interactions, and the resonance sets on which they are
transparent.
"""

from .classify import (
    BoundaryParams,
    LimitInteraction,
    LimitKind,
    Provenance,
    alpha_G,
    classify,
    classify_numeric,
    gamma_from_theta,
    k2_from_gamma,
    k3_from_gamma,
    lambda22_F,
    p_sign,
    rho_K,
    symmetric_branch_a1,
    theta_alpha_G,
    theta_F,
    theta_from_gamma,
    theta_K,
)
from .entire import cfun, sfun, ufun
from .errors import *  # noqa: F401,F403
from .paths import (
    Branch,
    Family,
    LimitEstimate,
    LimitOrder,
    PathLabel,
    PathTrace,
    SqueezePath,
    estimate_limit,
    eps_sequence,
    evaluate_along_path,
    path_family,
)
from .resonance import (
    ResonanceBranch,
    ResonanceSetId,
    membership,
    residual,
    slice_surface,
    solve_last,
    tan_form_residual,
    trace_curve,
)
from .scattering import ScatteringResult, scatter, scatter_limit, transmission_sweep
from .transfer import RegularizedSystem, TransferMatrix, stack, stack_factors, stack_matrix

__version__ = "0.1.0"
