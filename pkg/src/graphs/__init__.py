# Metric graphs: data model, topology checks, text format, catalogue
from .metric_graph import (
    HALFLINE,
    Edge,
    GraphBuilder,
    MetricGraph,
    Vertex,
    Violation,
    require_valid,
    validate,
)
from .topology import (
    HCheck,
    TowerLayout,
    check_assumption_h,
    check_assumption_h_trails,
    is_bubble_tower,
    tower_layout,
    trail_through_edge,
)
from .graph_io import dump_graph, load_graph, parse_graph, serialize_graph
from . import catalog

__all__ = [
    'HALFLINE',
    'Edge',
    'GraphBuilder',
    'MetricGraph',
    'Vertex',
    'Violation',
    'require_valid',
    'validate',
    'HCheck',
    'TowerLayout',
    'check_assumption_h',
    'check_assumption_h_trails',
    'is_bubble_tower',
    'tower_layout',
    'trail_through_edge',
    'dump_graph',
    'load_graph',
    'parse_graph',
    'serialize_graph',
    'catalog',
]
