"""
Topological tests on metric graphs: the two formulations of the
"every point reaches infinity in two directions" condition, and the
bubble-tower pattern.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from .metric_graph import MetricGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HCheck:
    holds: bool
    witness: Optional[int] = None   # edge whose removal isolates a compact component
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds


def check_assumption_h(g: MetricGraph) -> HCheck:
    """
    Removal formulation: for every edge e, every connected component of
    g minus e contains a vertex at infinity.
    """
    if not g.edges:
        return HCheck(False, None, "graph has no edges")

    infinity = {v.index for v in g.infinity_vertices}
    for e in g.edges:
        topo = g.to_networkx(skip_edge=e.index)
        for component in nx.connected_components(topo):
            if not component & infinity:
                names = sorted(g.vertices[i].name for i in component)
                return HCheck(
                    False, e.index,
                    f"removing edge {e.index} leaves the compact component {{{', '.join(names)}}}"
                )
    return HCheck(True, None, "every edge removal leaves only components reaching infinity")


def _edge_on_trail(g: MetricGraph, edge_index: int, infinity: List[int]) -> bool:
    # Unit-capacity flow: two edge-disjoint routes leaving the ends of the
    # edge (which is removed) and arriving at two distinct vertices at infinity.
    edge = g.edges[edge_index]
    flow = nx.DiGraph()
    for f in g.edges:
        if f.index == edge_index:
            continue
        mid = ("edge", f.index)
        flow.add_edge(f.tail, mid, capacity=1)
        flow.add_edge(mid, f.head, capacity=1)
        flow.add_edge(f.head, mid, capacity=1)
        flow.add_edge(mid, f.tail, capacity=1)

    source, sink = "source", "sink"
    if edge.is_loop:
        flow.add_edge(source, edge.tail, capacity=2)
    else:
        flow.add_edge(source, edge.tail, capacity=1)
        flow.add_edge(source, edge.head, capacity=1)
    for v in infinity:
        flow.add_edge(v, sink, capacity=1)
    if sink not in flow:
        return False

    return nx.maximum_flow_value(flow, source, sink, capacity="capacity") >= 2


def check_assumption_h_trails(g: MetricGraph) -> bool:
    """
    Trail formulation: every edge lies on a trail (a walk with no repeated
    edge) joining two distinct vertices at infinity.
    """
    if not g.edges or len(g.infinity_vertices) < 2:
        return False
    for e in g.edges:
        if not trail_through_edge(g, e.index):
            logger.debug(f"Edge {e.index} lies on no trail between two vertices at infinity")
            return False
    return True


def trail_through_edge(g: MetricGraph, edge_index: int) -> bool:
    """Whether a single edge lies on a trail joining two distinct vertices at infinity"""
    infinity = [v.index for v in g.infinity_vertices]
    return len(infinity) >= 2 and _edge_on_trail(g, edge_index, infinity)


@dataclass(frozen=True)
class TowerLayout:
    """
    A bubble tower read from the base: the two half-lines hang at `base`,
    bubble k joins chain[k] to chain[k+1] through two arcs of (nearly)
    equal length.
    """
    base: int
    halflines: Tuple[int, int]
    chain: Tuple[int, ...]
    bubbles: Tuple[Tuple[int, int], ...]   # (first arc edge, second arc edge)
    arc_lengths: Tuple[float, ...]

    @property
    def height(self) -> float:
        return float(sum(self.arc_lengths))


def tower_layout(g: MetricGraph, tol: float = 1e-9) -> Optional[TowerLayout]:
    """
    Recognise exactly the pattern: two half-lines at one base vertex and a
    chain of bubbles, each made of two parallel edges of equal length
    (relative tolerance `tol`). Returns None otherwise. Extra structure
    (pendants, loops, half-lines elsewhere) is rejected.
    """
    halflines = g.halflines
    if len(halflines) != 2 or len(g.infinity_vertices) != 2:
        return None
    base = halflines[0].tail
    if halflines[1].tail != base:
        return None

    groups: Dict[FrozenSet[int], List[int]] = defaultdict(list)
    for e in g.finite_edges:
        if e.is_loop:
            return None
        groups[frozenset(e.endpoints)].append(e.index)

    chain = [base]
    visited = {base}
    bubbles: List[Tuple[int, int]] = []
    lengths: List[float] = []
    current = base
    while True:
        nxt = {v for key in groups if current in key for v in key if v not in visited}
        if not nxt:
            break
        if len(nxt) > 1:
            return None
        step = nxt.pop()
        arcs = groups[frozenset((current, step))]
        if len(arcs) != 2:
            return None
        a, b = (g.edges[i].length for i in arcs)
        if abs(a - b) > tol * max(a, b):
            return None
        bubbles.append((arcs[0], arcs[1]))
        lengths.append(0.5 * (a + b))
        chain.append(step)
        visited.add(step)
        current = step

    if len(bubbles) != len(groups):
        return None
    if visited != {v.index for v in g.finite_vertices}:
        return None

    return TowerLayout(
        base=base,
        halflines=(halflines[0].index, halflines[1].index),
        chain=tuple(chain),
        bubbles=tuple(bubbles),
        arc_lengths=tuple(lengths),
    )


def is_bubble_tower(g: MetricGraph, tol: float = 1e-9) -> bool:
    """Two half-lines at the base of a chain of equal-arc bubbles (the line is the empty tower)"""
    return tower_layout(g, tol) is not None
