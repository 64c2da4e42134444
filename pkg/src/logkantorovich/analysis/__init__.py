"""Norms, moduli, K-functionals, the maximal function, the Voronovskaja
operator, saturation solutions and rate fitting."""

from ..grids import Grid
from .kfunctional import Candidate, KResult, KVariant, candidate_table, k_functional
from .maximal import interval_averages, maximal_function
from .moduli import OmegaEstimate, forward_difference, modulus_omega, modulus_omega_r, omega_estimate
from .norms import NormKind, lp_integral, norm
from .rates import RateFit, rate_fit
from .saturation import ExtendedSolution, SaturationSolution, saturation_solution, saturation_weights
from .voronovskaja import (
    VoronovskajaRow,
    VoronovskajaTable,
    diffusion_coefficient,
    drift_coefficient,
    explicit_ode_lhs,
    fmu_derivatives,
    richardson_limit,
    second_moment,
    voronovskaja_check,
    voronovskaja_rhs,
)

__all__ = [
    "Grid", "NormKind", "RateFit", "KVariant", "KResult", "Candidate", "OmegaEstimate",
    "SaturationSolution", "ExtendedSolution", "VoronovskajaRow", "VoronovskajaTable",
    "norm", "lp_integral", "modulus_omega", "omega_estimate", "modulus_omega_r", "forward_difference",
    "k_functional", "candidate_table", "maximal_function", "interval_averages",
    "voronovskaja_rhs", "voronovskaja_check", "explicit_ode_lhs", "fmu_derivatives",
    "drift_coefficient", "diffusion_coefficient", "richardson_limit", "second_moment",
    "saturation_weights", "saturation_solution", "rate_fit",
]
