"""
Piecewise-linear meshes on (truncated) metric graphs and the functions
living on them.

Global node numbering: one node per graph vertex first (vertex index ==
node index; vertices at infinity become the Dirichlet ends of truncated
half-lines), then the interior nodes of each edge in edge order.
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from src.errors import ParameterError
from src.graphs.metric_graph import MetricGraph, require_valid

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EdgeMesh:
    edge: int
    positions: np.ndarray   # arclength from the tail, first 0, last the (truncated) length
    nodes: np.ndarray       # global node index per position
    truncated: bool         # half-line cut at the truncation length

    @property
    def length(self) -> float:
        return float(self.positions[-1])

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.positions)


@dataclass(frozen=True, eq=False)
class Mesh:
    graph: MetricGraph
    truncation: float
    edges: Tuple[EdgeMesh, ...]
    n_nodes: int

    @property
    def h_max(self) -> float:
        return max(float(em.spacings.max()) for em in self.edges)

    @cached_property
    def dirichlet(self) -> np.ndarray:
        mask = np.zeros(self.n_nodes, dtype=bool)
        for v in self.graph.infinity_vertices:
            mask[v.index] = True
        return mask

    @cached_property
    def free(self) -> np.ndarray:
        return ~self.dirichlet

    @cached_property
    def segments(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Flat segment arrays (left node, right node, length, edge index)"""
        left = np.concatenate([em.nodes[:-1] for em in self.edges])
        right = np.concatenate([em.nodes[1:] for em in self.edges])
        h = np.concatenate([em.spacings for em in self.edges])
        owner = np.concatenate([np.full(len(em.nodes) - 1, em.edge) for em in self.edges])
        return left, right, h, owner

    @cached_property
    def weights(self) -> np.ndarray:
        """Lumped (trapezoid) mass weights"""
        left, right, h, _ = self.segments
        w = np.zeros(self.n_nodes)
        np.add.at(w, left, 0.5 * h)
        np.add.at(w, right, 0.5 * h)
        return w

    @cached_property
    def stiffness(self) -> sparse.csr_matrix:
        left, right, h, _ = self.segments
        k = 1.0 / h
        rows = np.concatenate([left, right, left, right])
        cols = np.concatenate([left, right, right, left])
        data = np.concatenate([k, k, -k, -k])
        return sparse.coo_matrix((data, (rows, cols)), shape=(self.n_nodes, self.n_nodes)).tocsr()

    @cached_property
    def node_coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """Per node (edge index, arclength); vertex nodes report their first incident edge end"""
        edge_of = np.full(self.n_nodes, -1, dtype=int)
        where = np.zeros(self.n_nodes)
        for em in self.edges:
            for node, x in zip(em.nodes, em.positions):
                if edge_of[node] < 0:
                    edge_of[node] = em.edge
                    where[node] = x
        return edge_of, where

    def total_length(self) -> float:
        return float(sum(em.length for em in self.edges))

    def halfline_meshes(self) -> Sequence[EdgeMesh]:
        return [em for em in self.edges if em.truncated]

    @classmethod
    def from_positions(
        cls,
        g: MetricGraph,
        positions: Mapping[int, Sequence[float]],
        truncation: Optional[float] = None
    ) -> "Mesh":
        """
        Mesh with prescribed (possibly non-uniform) node positions per edge.
        Each array starts at 0, is strictly increasing and ends at the edge
        length (at the truncation length for a half-line).
        """
        require_valid(g)
        if g.halflines and (truncation is None or truncation <= 0):
            raise ParameterError("A positive truncation length is required for graphs with half-lines")

        n_nodes = len(g.vertices)
        edge_meshes = []
        for e in g.edges:
            if e.index not in positions:
                raise ParameterError(f"No node positions given for edge {e.index}")
            x = np.asarray(positions[e.index], dtype=float)
            target = truncation if e.is_halfline else e.length
            if len(x) < 2 or x[0] != 0.0 or np.any(np.diff(x) <= 0):
                raise ParameterError(f"Positions on edge {e.index} must start at 0 and increase strictly")
            if not math.isclose(x[-1], target, rel_tol=1e-12, abs_tol=1e-12):
                raise ParameterError(f"Positions on edge {e.index} must end at {target}, got {x[-1]}")
            x = x.copy()
            x[-1] = target

            interior = len(x) - 2
            nodes = np.empty(len(x), dtype=int)
            nodes[0] = e.tail
            nodes[-1] = e.head
            nodes[1:-1] = np.arange(n_nodes, n_nodes + interior)
            n_nodes += interior
            edge_meshes.append(EdgeMesh(e.index, x, nodes, e.is_halfline))

        return cls(g, float(truncation or 0.0), tuple(edge_meshes), n_nodes)


def build_mesh(g: MetricGraph, h_max: float, truncation: float) -> Mesh:
    """
    Uniform subdivision of every finite edge with spacing <= h_max; each
    half-line is replaced by a segment of length `truncation` whose far end
    (the vertex at infinity) carries a homogeneous Dirichlet condition.
    """
    if not h_max > 0:
        raise ParameterError(f"h_max must be positive, got {h_max}")
    if not truncation > 0:
        raise ParameterError(f"truncation must be positive, got {truncation}")

    positions: Dict[int, np.ndarray] = {}
    for e in g.edges:
        length = truncation if e.is_halfline else e.length
        intervals = max(1, math.ceil(length / h_max - 1e-9))
        if e.is_loop:
            intervals = max(intervals, 2)
        positions[e.index] = np.linspace(0.0, length, intervals + 1)

    mesh = Mesh.from_positions(g, positions, truncation)
    logger.debug(f"Built mesh: {mesh.n_nodes} nodes, h_max={h_max}, truncation={truncation}")
    return mesh


class GraphFunction:
    """Nodal values of a continuous piecewise-linear function on a mesh"""

    def __init__(self, mesh: Mesh, values):
        values = np.array(values, dtype=float)
        if values.shape != (mesh.n_nodes,):
            raise ParameterError(f"Expected {mesh.n_nodes} nodal values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ParameterError("Nodal values must be finite")
        self.mesh = mesh
        self.values = values

    @classmethod
    def from_edge_values(cls, mesh: Mesh, edge_values: Mapping[int, Sequence[float]]) -> "GraphFunction":
        """Assemble nodal values given along every edge (positions as in the mesh)"""
        values = np.zeros(mesh.n_nodes)
        for em in mesh.edges:
            vals = np.asarray(edge_values[em.edge], dtype=float)
            if vals.shape != em.positions.shape:
                raise ParameterError(f"Edge {em.edge}: expected {len(em.positions)} values, got {vals.shape}")
            values[em.nodes] = vals
        return cls(mesh, values)

    def on_edge(self, edge: int) -> Tuple[np.ndarray, np.ndarray]:
        """(positions, values) along one edge, from its tail"""
        em = self.mesh.edges[edge]
        return em.positions, self.values[em.nodes]

    def at_vertex(self, key) -> float:
        return float(self.values[self.mesh.graph.vertex(key).index])

    def with_values(self, values) -> "GraphFunction":
        return GraphFunction(self.mesh, values)

    def copy(self) -> "GraphFunction":
        return GraphFunction(self.mesh, self.values)

    def abs(self) -> "GraphFunction":
        return GraphFunction(self.mesh, np.abs(self.values))

    def __neg__(self) -> "GraphFunction":
        return GraphFunction(self.mesh, -self.values)

    def max(self) -> float:
        return float(self.values.max())

    def __repr__(self) -> str:
        return f"GraphFunction(n_nodes={self.mesh.n_nodes}, max={self.values.max():.6g})"


def sample(mesh: Mesh, fn: Callable[[int, np.ndarray], np.ndarray]) -> GraphFunction:
    """
    Build a GraphFunction from fn(edge_index, arclengths). Vertex values
    are averaged over incident edge ends so mismatched callables still
    give a continuous function; Dirichlet nodes are set to 0.
    """
    total = np.zeros(mesh.n_nodes)
    count = np.zeros(mesh.n_nodes)
    for em in mesh.edges:
        vals = np.asarray(fn(em.edge, em.positions), dtype=float)
        np.add.at(total, em.nodes, vals)
        np.add.at(count, em.nodes, 1.0)
    values = total / np.maximum(count, 1.0)
    values[mesh.dirichlet] = 0.0
    return GraphFunction(mesh, values)
