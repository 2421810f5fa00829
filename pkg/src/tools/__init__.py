# Tools shared by the command line and the MCP server
from .graph_check import graph_check
from .graph_levels import graph_levels
from .graph_minimize import graph_minimize
from .graph_classify import graph_classify
from .graph_competitor import graph_competitor
from .graph_critical_length import graph_critical_length
from .graph_limit_table import graph_limit_table

__all__ = [
    'graph_check',
    'graph_levels',
    'graph_minimize',
    'graph_classify',
    'graph_competitor',
    'graph_critical_length',
    'graph_limit_table'
]
