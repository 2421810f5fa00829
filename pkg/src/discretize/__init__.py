# Discretization: meshes, graph functions, energy functional
from .mesh import EdgeMesh, GraphFunction, Mesh, build_mesh, sample
from .functional import (
    EnergyReport,
    calibrate_gn_constant,
    check_power,
    energy,
    energy_at_mass,
    energy_gradient,
    gn_lower_bound,
    gn_ratio,
    grad_norm_squared,
    kirchhoff_residuals,
    lq_integral,
    mass,
    segment_power_integrals,
)
from .profile_io import PROFILE_COLUMNS, export_profile, profile_rows

__all__ = [
    'EdgeMesh',
    'GraphFunction',
    'Mesh',
    'build_mesh',
    'sample',
    'EnergyReport',
    'calibrate_gn_constant',
    'check_power',
    'energy',
    'energy_at_mass',
    'energy_gradient',
    'gn_lower_bound',
    'gn_ratio',
    'grad_norm_squared',
    'kirchhoff_residuals',
    'lq_integral',
    'mass',
    'segment_power_integrals',
    'PROFILE_COLUMNS',
    'export_profile',
    'profile_rows',
]
