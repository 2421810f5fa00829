"""
graph_check tool - structural validation and topology of a metric graph
"""
from typing import Dict, Any, Optional
import logging

from src.graphs.topology import check_assumption_h, check_assumption_h_trails, is_bubble_tower
from .common import failure, resolve_graph

logger = logging.getLogger(__name__)

async def graph_check(graph: str, pendant_length: Optional[float] = None) -> Dict[str, Any]:
    """
    Validate a metric graph and report its topology.

    Args:
        graph (str): Graph text, a bundled graph name, `gl` (with
            pendant_length) or a path to a graph file

        pendant_length (float, optional): Pendant length for the `gl` family

    Returns:
        Dict containing:
        - graph (str): Label of the resolved graph
        - vertices, edges, halflines (int): Counts
        - compact_length (float): Total length of the finite edges
        - assumption_h (bool): Removal formulation
        - assumption_h_trails (bool): Trail formulation
        - h_witness (str): Why the removal check fails, when it does
        - bubble_tower (bool): Two half-lines plus a chain of equal-arc bubbles

    Example Usage:
        graph_check(graph="star3")
        graph_check(graph="gl", pendant_length=2.5)
    """
    try:
        label, g = resolve_graph(graph, pendant_length)
        removal = check_assumption_h(g)
        trails = check_assumption_h_trails(g)
        if bool(removal) != trails:
            logger.warning(f"Assumption checks disagree on {label}: removal={bool(removal)}, trails={trails}")

        return {
            "success": True,
            "graph": label,
            "vertices": len(g.finite_vertices),
            "infinity_vertices": len(g.infinity_vertices),
            "edges": len(g.edges),
            "halflines": len(g.halflines),
            "compact_length": g.compact_length,
            "assumption_h": bool(removal),
            "assumption_h_trails": trails,
            "h_witness": removal.reason if not removal else "",
            "bubble_tower": is_bubble_tower(g),
        }

    except Exception as e:
        return failure("graph_check", e, [
            "Check the graph text format: vertex/infinity/edge/halfline statements",
            "Use a bundled name such as line, star3, line_with_pendant, tower2",
        ])
