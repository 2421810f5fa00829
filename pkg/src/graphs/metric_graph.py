"""
Metric graph data model: vertices (finite or at infinity), finite edges
with lengths, and half-lines.
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import networkx as nx

from src.errors import InvalidGraphError

logger = logging.getLogger(__name__)

HALFLINE = math.inf

VertexId = int


@dataclass(frozen=True)
class Vertex:
    index: VertexId
    name: str
    at_infinity: bool = False


@dataclass(frozen=True)
class Edge:
    """
    An edge identified with [0, length]; arclength runs from `tail` to
    `head`. A half-line has length HALFLINE, a finite tail and its vertex
    at infinity as head.
    """
    index: int
    tail: VertexId
    head: VertexId
    length: float

    @property
    def is_halfline(self) -> bool:
        return math.isinf(self.length)

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    @property
    def endpoints(self) -> Tuple[VertexId, VertexId]:
        return (self.tail, self.head)


@dataclass(frozen=True)
class Violation:
    rule: str
    element: str
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.element}: {self.message}"


@dataclass(frozen=True, eq=False)
class MetricGraph:
    """Immutable metric graph. Self-loops and parallel edges are allowed."""

    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MetricGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    @cached_property
    def adjacency(self) -> Dict[VertexId, List[Tuple[int, int]]]:
        """Per vertex: list of incident edge ends as (edge index, end) with end 0 = tail, 1 = head"""
        adj: Dict[VertexId, List[Tuple[int, int]]] = {v.index: [] for v in self.vertices}
        for e in self.edges:
            if e.tail in adj:
                adj[e.tail].append((e.index, 0))
            if e.head in adj:
                adj[e.head].append((e.index, 1))
        return adj

    @cached_property
    def _names(self) -> Dict[str, VertexId]:
        return {v.name: v.index for v in self.vertices}

    def vertex(self, key) -> Vertex:
        """Look a vertex up by index or by name"""
        if isinstance(key, str):
            return self.vertices[self._names[key]]
        return self.vertices[key]

    def degree(self, v: VertexId) -> int:
        return len(self.adjacency.get(v, []))

    @property
    def finite_vertices(self) -> List[Vertex]:
        return [v for v in self.vertices if not v.at_infinity]

    @property
    def infinity_vertices(self) -> List[Vertex]:
        return [v for v in self.vertices if v.at_infinity]

    @property
    def halflines(self) -> List[Edge]:
        return [e for e in self.edges if e.is_halfline]

    @property
    def finite_edges(self) -> List[Edge]:
        return [e for e in self.edges if not e.is_halfline]

    @property
    def is_compact(self) -> bool:
        return not self.halflines

    @property
    def compact_length(self) -> float:
        return float(sum(e.length for e in self.finite_edges))

    def to_networkx(self, skip_edge: Optional[int] = None) -> nx.MultiGraph:
        """Topology as a networkx multigraph keyed by edge index"""
        g = nx.MultiGraph()
        for v in self.vertices:
            g.add_node(v.index, at_infinity=v.at_infinity)
        for e in self.edges:
            if e.index == skip_edge:
                continue
            g.add_edge(e.tail, e.head, key=e.index, length=e.length)
        return g

    def with_lengths(self, lengths: Dict[int, float]) -> "MetricGraph":
        """Copy with some finite edge lengths replaced"""
        edges = tuple(
            Edge(e.index, e.tail, e.head, float(lengths.get(e.index, e.length)))
            for e in self.edges
        )
        return MetricGraph(self.vertices, edges)

    def scaled(self, factor: float) -> "MetricGraph":
        """Copy with every finite length multiplied by `factor`"""
        return self.with_lengths({e.index: e.length * factor for e in self.finite_edges})


class GraphBuilder:
    """Incremental construction of a MetricGraph by vertex names"""

    def __init__(self):
        self._vertices: List[Vertex] = []
        self._edges: List[Edge] = []
        self._index: Dict[str, VertexId] = {}

    def _add(self, name: str, at_infinity: bool) -> VertexId:
        if name in self._index:
            raise ValueError(f"Duplicate vertex name: {name}")
        vid = len(self._vertices)
        self._vertices.append(Vertex(vid, name, at_infinity))
        self._index[name] = vid
        return vid

    def add_vertex(self, name: str) -> VertexId:
        return self._add(name, False)

    def add_infinity(self, name: str) -> VertexId:
        return self._add(name, True)

    def _lookup(self, name: str) -> VertexId:
        if name not in self._index:
            raise ValueError(f"Unknown vertex: {name}")
        return self._index[name]

    def add_edge(self, a: str, b: str, length: float) -> int:
        eid = len(self._edges)
        self._edges.append(Edge(eid, self._lookup(a), self._lookup(b), float(length)))
        return eid

    def add_halfline(self, finite: str, infinity: str) -> int:
        eid = len(self._edges)
        self._edges.append(Edge(eid, self._lookup(finite), self._lookup(infinity), HALFLINE))
        return eid

    def build(self) -> MetricGraph:
        return MetricGraph(tuple(self._vertices), tuple(self._edges))


def validate(g: MetricGraph) -> List[Violation]:
    """
    Check the structural rules of a metric graph. Returns an empty list iff
    the graph is valid; violations are data, never raised.
    """
    violations: List[Violation] = []
    n = len(g.vertices)

    if n == 0:
        return [Violation("nonempty", "graph", "graph has no vertices")]

    for i, v in enumerate(g.vertices):
        if v.index != i:
            violations.append(Violation("vertex-index", f"vertex {v.name}", f"index {v.index} != position {i}"))

    for e in g.edges:
        label = f"edge {e.index}"
        if not (0 <= e.tail < n and 0 <= e.head < n):
            violations.append(Violation("endpoint", label, "endpoint refers to an unknown vertex"))
            continue
        tail_inf = g.vertices[e.tail].at_infinity
        head_inf = g.vertices[e.head].at_infinity

        if tail_inf and head_inf:
            violations.append(Violation(
                "infinity-pair", label,
                f"joins two vertices at infinity ({g.vertices[e.tail].name}, {g.vertices[e.head].name})"
            ))
            continue

        if e.is_halfline:
            if tail_inf or not head_inf:
                violations.append(Violation(
                    "halfline-endpoints", label,
                    "a half-line must run from a finite vertex to a vertex at infinity"
                ))
        else:
            if not (e.length > 0 and math.isfinite(e.length)):
                violations.append(Violation("edge-length", label, f"length must be positive, got {e.length}"))
            if tail_inf or head_inf:
                violations.append(Violation(
                    "finite-edge-at-infinity", label,
                    "a vertex at infinity can only end a half-line"
                ))

    for v in g.infinity_vertices:
        deg = g.degree(v.index)
        if deg != 1:
            violations.append(Violation("infinity-degree", f"vertex {v.name}", f"degree {deg}, expected 1"))

    if not any(rule.rule == "endpoint" for rule in violations):
        topo = g.to_networkx()
        components = nx.number_connected_components(topo)
        if components > 1:
            violations.append(Violation("connected", "graph", f"{components} connected components"))

    if violations:
        logger.debug(f"Graph validation found {len(violations)} violation(s)")
    return violations


def require_valid(g: MetricGraph) -> None:
    """Raise InvalidGraphError if the graph breaks any structural rule"""
    violations = validate(g)
    if violations:
        raise InvalidGraphError(violations)
