"""Numerical lab for toral Laplace eigenfunctions and the random wave model."""

__version__ = "0.1.0"

from .arith import Energy, LatticePointSet, admissible_energies, enumerate_lattice_points, factorize
from .constants import CONSTANTS, RwmConstants
from .eigenfn import FourierCoefficients, ToralEigenfunction, synthesize_grid
from .equidist import arc_discrepancy, discrepancy, partition_arcs
from .gaussian import RwmSpec, epsilon_gaussian_stat, sample_realization
from .nodal import SignGrid, count_components, nodal_length, pleijel_ratio, refine_until_stable
from .relations import BudgetExceeded, vanishing_sums

__all__ = [
    "CONSTANTS",
    "BudgetExceeded",
    "Energy",
    "FourierCoefficients",
    "LatticePointSet",
    "RwmConstants",
    "RwmSpec",
    "SignGrid",
    "ToralEigenfunction",
    "admissible_energies",
    "arc_discrepancy",
    "count_components",
    "discrepancy",
    "enumerate_lattice_points",
    "epsilon_gaussian_stat",
    "factorize",
    "nodal_length",
    "partition_arcs",
    "pleijel_ratio",
    "refine_until_stable",
    "sample_realization",
    "synthesize_grid",
    "vanishing_sums",
]
