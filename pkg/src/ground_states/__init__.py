# Ground states: reference levels, rearrangements, minimization, surgery
from .closed_forms import (
    CUBIC,
    ReferenceKind,
    ReferenceLevel,
    all_levels,
    comparison_test,
    half_soliton,
    level,
    line_level,
    soliton,
    star3_stationary,
    star_stationary_level,
    star_stationary_state,
)
from .rearrange import (
    DistributionFunction,
    ProfileKind,
    RearrangedProfile,
    distribution,
    min_preimage_count,
    monotone_rearrangement,
    preimage_count,
    symmetric_rearrangement,
)
from .minimize import (
    ExistenceVerdict,
    MinimizeResult,
    SolveOptions,
    Status,
    certify_stationary,
    classify_existence,
    default_starts,
    minimize,
)
from .surgery import (
    CriticalLengthResult,
    LimitTable,
    PendantCompetitor,
    bubble_tower_certificate,
    bubble_tower_soliton,
    critical_length,
    critical_mass,
    cut_soliton,
    gl_competitor,
    gl_ground_state,
    gl_limit_check,
    pendant_competitor,
)

__all__ = [
    'CUBIC',
    'ReferenceKind',
    'ReferenceLevel',
    'all_levels',
    'comparison_test',
    'half_soliton',
    'level',
    'line_level',
    'soliton',
    'star3_stationary',
    'star_stationary_level',
    'star_stationary_state',
    'DistributionFunction',
    'ProfileKind',
    'RearrangedProfile',
    'distribution',
    'min_preimage_count',
    'monotone_rearrangement',
    'preimage_count',
    'symmetric_rearrangement',
    'ExistenceVerdict',
    'MinimizeResult',
    'SolveOptions',
    'Status',
    'certify_stationary',
    'classify_existence',
    'default_starts',
    'minimize',
    'CriticalLengthResult',
    'LimitTable',
    'PendantCompetitor',
    'bubble_tower_certificate',
    'bubble_tower_soliton',
    'critical_length',
    'critical_mass',
    'cut_soliton',
    'gl_competitor',
    'gl_ground_state',
    'gl_limit_check',
    'pendant_competitor',
]
