"""
Mass, norms, the NLS energy functional, its gradient and the Kirchhoff
residual for piecewise-linear functions.

Mass convention: mass(u) is the squared L2 norm.
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, Tuple

import numpy as np

from src.errors import ParameterError
from .mesh import GraphFunction, Mesh

logger = logging.getLogger(__name__)

QUADRATURES = ("lumped", "exact")

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


@dataclass(frozen=True)
class EnergyReport:
    mass: float
    kinetic: float
    potential: float
    total: float
    omega: float
    kirchhoff_residual: float   # vertices of degree >= 2
    neumann_residual: float     # outgoing derivative at finite vertices of degree 1

    @property
    def grad_norm(self) -> float:
        return math.sqrt(2.0 * self.kinetic)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def check_power(p: float) -> float:
    if not 2.0 < p < 6.0:
        raise ParameterError(f"Power p must lie in (2, 6), got {p}")
    return float(p)


def _check_quadrature(quadrature: str) -> None:
    if quadrature not in QUADRATURES:
        raise ParameterError(f"Unknown quadrature {quadrature!r}; expected one of {QUADRATURES}")


def _mean_power(x: np.ndarray, y: np.ndarray, q: float) -> np.ndarray:
    """Mean of (linear from x to y)^q over [0, 1] for x, y >= 0"""
    out = np.empty_like(x)
    touching = np.minimum(x, y) == 0.0
    top = np.maximum(x, y)
    out[touching] = top[touching] ** q / (q + 1.0)
    inner = ~touching
    if np.any(inner):
        xi, yi = x[inner, None], y[inner, None]
        values = (xi + (yi - xi) * _GL_NODES) ** q
        out[inner] = values @ _GL_WEIGHTS
    return out


def segment_power_integrals(a: np.ndarray, b: np.ndarray, h: np.ndarray, q: float) -> np.ndarray:
    """
    Integral of |u|^q over each segment for u linear from a to b over
    length h. Segments are split at sign changes; each signed piece is
    integrated with 8-point Gauss-Legendre (exact for integer q <= 15).
    """
    a, b, h = (np.asarray(v, dtype=float) for v in (a, b, h))
    out = np.empty_like(a)
    cross = a * b < 0
    same = ~cross
    out[same] = h[same] * _mean_power(np.abs(a[same]), np.abs(b[same]), q)
    if np.any(cross):
        ac, bc = np.abs(a[cross]), np.abs(b[cross])
        s0 = ac / (ac + bc)
        out[cross] = h[cross] * (s0 * ac ** q + (1.0 - s0) * bc ** q) / (q + 1.0)
    return out


def lq_integral(u: GraphFunction, q: float, quadrature: str = "lumped") -> float:
    """Integral of |u|^q over the (truncated) graph"""
    _check_quadrature(quadrature)
    mesh = u.mesh
    if quadrature == "lumped":
        return float(mesh.weights @ np.abs(u.values) ** q)
    left, right, h, _ = mesh.segments
    return float(segment_power_integrals(u.values[left], u.values[right], h, q).sum())


def mass(u: GraphFunction, quadrature: str = "lumped") -> float:
    """Squared L2 norm (composite trapezoid unless quadrature='exact')"""
    return lq_integral(u, 2.0, quadrature)


def grad_norm_squared(u: GraphFunction) -> float:
    """Exact for piecewise-linear u"""
    left, right, h, _ = u.mesh.segments
    du = u.values[right] - u.values[left]
    return float(np.sum(du * du / h))


def _outgoing_derivative(x: np.ndarray, v: np.ndarray) -> float:
    # x measured from the vertex, v the values there; one-sided second order
    if len(x) < 3:
        return float((v[1] - v[0]) / (x[1] - x[0]))
    h1 = x[1] - x[0]
    h2 = x[2] - x[1]
    c0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2))
    c1 = (h1 + h2) / (h1 * h2)
    c2 = -h1 / (h2 * (h1 + h2))
    return float(c0 * v[0] + c1 * v[1] + c2 * v[2])


def vertex_derivative_sums(u: GraphFunction) -> Dict[int, float]:
    """Per finite vertex: sum of outgoing derivatives over incident edge ends"""
    mesh = u.mesh
    sums: Dict[int, float] = {v.index: 0.0 for v in mesh.graph.finite_vertices}
    for em in mesh.edges:
        vals = u.values[em.nodes]
        x = em.positions
        tail, head = int(em.nodes[0]), int(em.nodes[-1])
        if tail in sums:
            sums[tail] += _outgoing_derivative(x[:3], vals[:3])
        if head in sums:
            sums[head] += _outgoing_derivative(em.length - x[::-1][:3], vals[::-1][:3])
    return sums


def kirchhoff_residuals(u: GraphFunction) -> Tuple[float, float]:
    """(max over degree >= 2 vertices, max over degree 1 finite vertices) of |sum of outgoing derivatives|"""
    g = u.mesh.graph
    kirchhoff, neumann = 0.0, 0.0
    for v, total in vertex_derivative_sums(u).items():
        if g.degree(v) >= 2:
            kirchhoff = max(kirchhoff, abs(total))
        elif g.degree(v) == 1:
            neumann = max(neumann, abs(total))
    return kirchhoff, neumann


def energy(u: GraphFunction, p: float, quadrature: str = "lumped") -> EnergyReport:
    """
    E(u) = 1/2 |u'|^2 - 1/p |u|_p^p. The kinetic term is exact; mass and
    potential use the lumped (trapezoid) rule unless quadrature='exact'.
    """
    p = check_power(p)
    _check_quadrature(quadrature)
    grad_sq = grad_norm_squared(u)
    m = mass(u, quadrature)
    lp = lq_integral(u, p, quadrature)
    kinetic = 0.5 * grad_sq
    potential = lp / p
    omega = (lp - grad_sq) / m if m > 0 else 0.0
    kirchhoff, neumann = kirchhoff_residuals(u)
    return EnergyReport(
        mass=m,
        kinetic=kinetic,
        potential=potential,
        total=kinetic - potential,
        omega=omega,
        kirchhoff_residual=kirchhoff,
        neumann_residual=neumann,
    )


def energy_at_mass(u: GraphFunction, p: float, mu: float, quadrature: str = "exact") -> EnergyReport:
    """
    Energy of u rescaled to mass mu under `quadrature`. With exact
    quadrature this is the energy of the truncated state extended by zero,
    an H1 function of mass mu on the untruncated graph, so it never lies
    below the infimum there.
    """
    m = mass(u, quadrature)
    if not m > 0:
        raise ParameterError("Cannot rescale the zero function to a positive mass")
    return energy(u.with_values(u.values * math.sqrt(mu / m)), p, quadrature)


def energy_value(values: np.ndarray, mesh: Mesh, p: float) -> float:
    """Lumped energy of raw nodal values (solver inner loop)"""
    ku = mesh.stiffness @ values
    return float(0.5 * values @ ku - (mesh.weights @ np.abs(values) ** p) / p)


def gradient_values(values: np.ndarray, mesh: Mesh, p: float) -> np.ndarray:
    g = mesh.stiffness @ values - mesh.weights * np.abs(values) ** (p - 2.0) * values
    g[mesh.dirichlet] = 0.0
    return g


def energy_gradient(u: GraphFunction, p: float) -> GraphFunction:
    """
    Gradient of the lumped energy as a nodal vector: stiffness action
    minus lumped-mass-weighted |u|^(p-2) u, zero at Dirichlet nodes.
    """
    p = check_power(p)
    return u.with_values(gradient_values(u.values, u.mesh, p))


def gn_lower_bound(mass: float, grad_norm: float, C: float, p: float) -> float:
    """
    1/2 |u'|^2 (1 - C mass^((p+2)/4) |u'|^((p-6)/2)), a lower bound for
    E(u) when C is the energy-form Gagliardo-Nirenberg constant.
    """
    if mass < 0 or grad_norm < 0 or C < 0:
        raise ParameterError("gn_lower_bound arguments must be non-negative")
    p = check_power(p)
    if mass == 0:
        return 0.5 * grad_norm ** 2
    if grad_norm == 0:
        return 0.0
    return 0.5 * grad_norm ** 2 * (1.0 - C * mass ** ((p + 2.0) / 4.0) * grad_norm ** ((p - 6.0) / 2.0))


def gn_ratio(u: GraphFunction, p: float, quadrature: str = "lumped") -> float:
    """|u|_p^p / (mass^((p+2)/4) |u'|^((p-2)/2)); 0 for the zero function"""
    m = mass(u, quadrature)
    gn = math.sqrt(grad_norm_squared(u))
    if m == 0 or gn == 0:
        return 0.0
    return lq_integral(u, p, quadrature) / (m ** ((p + 2.0) / 4.0) * gn ** ((p - 2.0) / 2.0))


def calibrate_gn_constant(functions: Iterable[GraphFunction], p: float, floor: float = 0.0) -> float:
    """
    Energy-form constant (2/p) * max ratio over the given functions, never
    below `floor`. Empirical: it is a diagnostic, not ground truth.
    """
    p = check_power(p)
    ratio = max([gn_ratio(u, p) for u in functions] + [0.0])
    return max(2.0 / p * ratio, floor)
