"""Energies of deformed square-lattice crystals split into bulk, surface and corner parts."""
from .bonds import (
    bond_number,
    bond_number_brute,
    sector_indicator,
    staircase_sum,
    t_dagger_count,
    t_ddagger_count,
    triangle_interior_count,
)
from .energy import (
    EnergyBreakdown,
    IrrationalNormal,
    RationalNormal,
    decompose_scaled_energy,
    energy_brute,
    energy_exact,
    gamma_circ,
    gamma_diamond,
    gamma_hat,
    lipschitz_constant,
    stored_energy,
    thomae_h,
    vertex_energy,
)
from .exceptions import (
    DegenerateError,
    DomainError,
    InvalidPotentialError,
    LatsurfError,
    PreconditionError,
    WulffUndefinedError,
)
from .geometry import (
    LatticePolygon,
    bezout_companion,
    convex_hull,
    enumerate_lattice_points,
    pick_count,
    polygon_metrics,
    reduce,
)
from .lattice_sums import truncation_radius
from .potentials import DeformationGradient, FiniteTable, RadialPowerLaw, lennard_jones
from .regions import (
    Arc,
    Disk,
    MixedRegion,
    RationalPolygon,
    RemainderSample,
    Segment,
    abs_flux,
    circular_segment,
    dilate,
    equivalent_region,
    hull_of_scaled,
    inverse_miller_integral,
    lattice_remainder,
    remainder_study,
)
from .asymptotics import SlopeFit, fit_growth_exponent, mixed_energy_residual, smooth_energy_residual
from .wulff import wulff_shape

__version__ = "0.1.0"

__all__ = [
    "bond_number",
    "bond_number_brute",
    "sector_indicator",
    "staircase_sum",
    "t_dagger_count",
    "t_ddagger_count",
    "triangle_interior_count",
    "EnergyBreakdown",
    "IrrationalNormal",
    "RationalNormal",
    "decompose_scaled_energy",
    "energy_brute",
    "energy_exact",
    "gamma_circ",
    "gamma_diamond",
    "gamma_hat",
    "lipschitz_constant",
    "stored_energy",
    "thomae_h",
    "vertex_energy",
    "DegenerateError",
    "DomainError",
    "InvalidPotentialError",
    "LatsurfError",
    "PreconditionError",
    "WulffUndefinedError",
    "LatticePolygon",
    "bezout_companion",
    "convex_hull",
    "enumerate_lattice_points",
    "pick_count",
    "polygon_metrics",
    "reduce",
    "truncation_radius",
    "DeformationGradient",
    "FiniteTable",
    "RadialPowerLaw",
    "lennard_jones",
    "Arc",
    "Disk",
    "MixedRegion",
    "RationalPolygon",
    "RemainderSample",
    "Segment",
    "abs_flux",
    "circular_segment",
    "dilate",
    "equivalent_region",
    "hull_of_scaled",
    "inverse_miller_integral",
    "lattice_remainder",
    "remainder_study",
    "SlopeFit",
    "fit_growth_exponent",
    "mixed_energy_residual",
    "smooth_energy_residual",
    "wulff_shape",
]
