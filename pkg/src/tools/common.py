"""
Helpers shared by the graph tools: resolving a graph argument, building
solver options from loose tool arguments, and the failure payload.
"""
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.errors import ParameterError
from src.graphs import catalog, load_graph, parse_graph, require_valid
from src.graphs.metric_graph import MetricGraph
from src.ground_states.minimize import SolveOptions

logger = logging.getLogger(__name__)

GRAPH_KEYWORDS = ("vertex", "infinity", "edge", "halfline", "#")
PENDANT_FAMILY = "gl"


def _looks_like_text(graph: str) -> bool:
    stripped = graph.strip()
    return "\n" in stripped or stripped.lower().startswith(GRAPH_KEYWORDS)


def resolve_graph(graph: str, pendant_length: Optional[float] = None) -> Tuple[str, MetricGraph]:
    """
    Turn a tool argument into (label, validated graph). Accepted forms, in
    order: graph text, `gl` with a pendant length, a bundled graph name, a
    path to a graph file.
    """
    if not graph or not graph.strip():
        raise ParameterError("No graph given")

    if _looks_like_text(graph):
        label, g = "inline", parse_graph(graph)
    elif graph == PENDANT_FAMILY:
        if pendant_length is None:
            raise ParameterError("The gl family needs a pendant length")
        label, g = f"gl_{pendant_length:g}", catalog.gl_graph(float(pendant_length))
    elif graph in catalog.bundled_names():
        label, g = graph, catalog.bundled_graph(graph)
    else:
        path = Path(graph)
        if not path.is_file():
            raise ParameterError(f"Unknown graph {graph!r}: not graph text, a bundled name or a readable file")
        label, g = path.stem, load_graph(path)

    require_valid(g)
    logger.debug(f"Resolved graph {label}: {len(g.vertices)} vertices, {len(g.edges)} edges")
    return label, g


def solve_options(
    power: Optional[float] = None,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    tol_grad: Optional[float] = None,
    tol_level: Optional[float] = None,
    max_iters: Optional[int] = None,
    starts: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    reference: Optional[str] = None
) -> SolveOptions:
    return SolveOptions(
        p=power,
        h_max=h_max,
        truncation=truncation,
        tol_grad=tol_grad,
        tol_level=tol_level,
        max_iters=max_iters,
        starts=tuple(starts) if starts else None,
        seed=seed,
        workers=workers,
        reference=reference or "exact",
    )


def check_mass(mass: float) -> float:
    if mass is None or not (isinstance(mass, (int, float)) and math.isfinite(mass) and mass > 0):
        raise ParameterError(f"Mass must be a positive number, got {mass!r}")
    return float(mass)


def failure(tool: str, e: Exception, suggestions: List[str]) -> Dict[str, Any]:
    logger.error(f"Error in {tool}: {str(e)}", exc_info=True)
    return {
        "success": False,
        "error": str(e),
        "error_type": type(e).__name__,
        "suggestions": suggestions,
    }
