"""
Generators for the graphs the analysis keeps coming back to, and the
bundled example files under data/graphs/.
"""
from pathlib import Path
from typing import Callable, Dict, Sequence, Tuple, Union

from .graph_io import load_graph
from .metric_graph import GraphBuilder, MetricGraph

DATA_DIR = Path(__file__).resolve().parents[2] / "data" / "graphs"

ArcSpec = Union[float, Tuple[float, float]]


def line() -> MetricGraph:
    """Two half-lines at one vertex; half-line 0 carries x <= 0, half-line 1 carries x >= 0"""
    b = GraphBuilder()
    b.add_vertex("v")
    b.add_infinity("inf1")
    b.add_infinity("inf2")
    b.add_halfline("v", "inf1")
    b.add_halfline("v", "inf2")
    return b.build()


def halfline() -> MetricGraph:
    b = GraphBuilder()
    b.add_vertex("v")
    b.add_infinity("inf")
    b.add_halfline("v", "inf")
    return b.build()


def star(n: int) -> MetricGraph:
    """N half-lines meeting at the vertex `v`"""
    if n < 1:
        raise ValueError("A star needs at least one half-line")
    b = GraphBuilder()
    b.add_vertex("v")
    for k in range(1, n + 1):
        b.add_infinity(f"inf{k}")
    for k in range(1, n + 1):
        b.add_halfline("v", f"inf{k}")
    return b.build()


def _with_pendant(halflines: int, length: float) -> MetricGraph:
    b = GraphBuilder()
    b.add_vertex("v")
    b.add_vertex("tip")
    for k in range(1, halflines + 1):
        b.add_infinity(f"inf{k}")
    for k in range(1, halflines + 1):
        b.add_halfline("v", f"inf{k}")
    b.add_edge("v", "tip", length)
    return b.build()


def line_with_pendant(length: float = 1.0) -> MetricGraph:
    """The line with a terminal edge of the given length at its vertex"""
    return _with_pendant(2, length)


def gl_graph(length: float) -> MetricGraph:
    """Three half-lines and a pendant of the given length at one vertex"""
    return _with_pendant(3, length)


def pendant_edge(g: MetricGraph) -> int:
    """Index of the edge ending at the vertex named `tip`"""
    tip = g.vertex("tip").index
    for e in g.finite_edges:
        if tip in e.endpoints:
            return e.index
    raise ValueError("graph has no pendant ending at 'tip'")


def bubble_tower(arcs: Sequence[ArcSpec]) -> MetricGraph:
    """
    Two half-lines at base `b0` and a chain of bubbles b0-b1-...-bk. An
    entry of `arcs` is either one length (two equal arcs) or a pair of
    lengths.
    """
    b = GraphBuilder()
    b.add_vertex("b0")
    for k in range(1, len(arcs) + 1):
        b.add_vertex(f"b{k}")
    b.add_infinity("inf1")
    b.add_infinity("inf2")
    b.add_halfline("b0", "inf1")
    b.add_halfline("b0", "inf2")
    for k, spec in enumerate(arcs, start=1):
        first, second = (spec, spec) if isinstance(spec, (int, float)) else spec
        b.add_edge(f"b{k - 1}", f"b{k}", first)
        b.add_edge(f"b{k - 1}", f"b{k}", second)
    return b.build()


def showcase() -> MetricGraph:
    """A typical non-compact graph with a self-loop and multiple connections"""
    b = GraphBuilder()
    for name in ("a", "b", "c", "d", "e", "f", "g"):
        b.add_vertex(name)
    for k in range(1, 6):
        b.add_infinity(f"inf{k}")
    b.add_halfline("a", "inf1")
    b.add_edge("a", "b", 1.0)
    b.add_edge("a", "c", 1.0)
    b.add_edge("b", "c", 1.4)
    b.add_halfline("c", "inf2")
    b.add_edge("b", "b", 1.2)
    b.add_edge("b", "d", 1.0)
    b.add_edge("d", "e", 1.0)
    b.add_edge("d", "e", 1.3)
    b.add_edge("d", "e", 1.3)
    b.add_edge("d", "f", 1.0)
    b.add_edge("d", "f", 1.5)
    b.add_edge("e", "f", 1.4)
    b.add_edge("f", "g", 1.0)
    b.add_edge("e", "g", 1.4)
    b.add_halfline("g", "inf3")
    b.add_halfline("e", "inf4")
    b.add_halfline("e", "inf5")
    return b.build()


BUNDLED: Dict[str, Callable[[], MetricGraph]] = {
    "line": line,
    "halfline": halfline,
    "star3": lambda: star(3),
    "star4": lambda: star(4),
    "line_with_pendant": lambda: line_with_pendant(1.0),
    "gl_2": lambda: gl_graph(2.0),
    "tower1": lambda: bubble_tower([2.0]),
    "tower2": lambda: bubble_tower([2.0, 1.0]),
    "tower3": lambda: bubble_tower([1.0, 1.5, 0.5]),
    "showcase": showcase,
}


def bundled_names() -> Sequence[str]:
    return sorted(BUNDLED)


def bundled_graph(name: str) -> MetricGraph:
    """Load a bundled graph from its file, falling back to the generator"""
    path = DATA_DIR / f"{name}.graph"
    if path.exists():
        return load_graph(path)
    if name not in BUNDLED:
        raise KeyError(f"Unknown bundled graph: {name}")
    return BUNDLED[name]()
