"""
Closed-form reference objects: the line soliton, the half-soliton, the
stationary state of a star graph, and the energy levels they attain.

For p = 4 every level is an exact rational multiple of mass^3. For other
subcritical powers the soliton profile is still explicit,

    phi(x) = A sech^(2/(p-2))(B x),  A = (p w / 2)^(1/(p-2)),  B = (p-2) sqrt(w) / 2,

with the frequency w fixed by the mass through a Beta integral; the
energy is then computed by adaptive quadrature and the level is tagged
as derived.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import integrate, special

from src.errors import ParameterError
from src.discretize.functional import check_power
from src.discretize.mesh import GraphFunction, Mesh, sample

logger = logging.getLogger(__name__)

CUBIC = 4.0


class ReferenceKind(str, Enum):
    LINE = "LINE"
    HALFLINE = "HALFLINE"
    STAR3_STATIONARY = "STAR3_STATIONARY"


@dataclass(frozen=True)
class ReferenceLevel:
    kind: ReferenceKind
    mass: float
    value: float
    power: float = CUBIC
    derived: bool = False


def _check_mass(mu: float) -> float:
    if not mu > 0:
        raise ParameterError(f"Mass must be positive, got {mu}")
    return float(mu)


def _sech(y):
    y = np.abs(np.asarray(y, dtype=float))
    e = np.exp(-y)
    return 2.0 * e / (1.0 + e * e)


def soliton_frequency(mu: float, p: float = CUBIC) -> float:
    """Frequency w of the line soliton with mass mu"""
    mu = _check_mass(mu)
    p = check_power(p)
    s = 4.0 / (p - 2.0)
    k = (p / 2.0) ** (2.0 / (p - 2.0)) * 2.0 / (p - 2.0) * special.beta(s / 2.0, 0.5)
    exponent = (6.0 - p) / (2.0 * (p - 2.0))
    return (mu / k) ** (1.0 / exponent)


def soliton_parameters(mu: float, p: float = CUBIC) -> Tuple[float, float]:
    """(amplitude A, inverse width B) of the line soliton with mass mu"""
    if p == CUBIC:
        mu = _check_mass(mu)
        return mu / (2.0 * math.sqrt(2.0)), mu / 4.0
    w = soliton_frequency(mu, p)
    return (p * w / 2.0) ** (1.0 / (p - 2.0)), (p - 2.0) * math.sqrt(w) / 2.0


def soliton(mu: float, x, p: float = CUBIC):
    """The line soliton of mass mu centred at 0; for p = 4, mu/(2 sqrt 2) sech(mu x / 4)"""
    a, b = soliton_parameters(mu, p)
    value = a * _sech(b * np.asarray(x, dtype=float)) ** (2.0 / (p - 2.0))
    return float(value) if np.ndim(value) == 0 else value


def soliton_derivative(mu: float, x, p: float = CUBIC):
    a, b = soliton_parameters(mu, p)
    x = np.asarray(x, dtype=float)
    y = b * x
    value = -a * (2.0 / (p - 2.0)) * b * _sech(y) ** (2.0 / (p - 2.0)) * np.tanh(y)
    return float(value) if np.ndim(value) == 0 else value


def half_soliton(mu: float, x, p: float = CUBIC):
    """Decreasing half of the soliton of mass 2 mu, as a function of x >= 0"""
    return soliton(2.0 * mu, np.abs(np.asarray(x, dtype=float)), p)


@lru_cache(maxsize=256)
def soliton_norms(mu: float, p: float = CUBIC) -> Tuple[float, float, float]:
    """(mass, |phi'|^2, |phi|_p^p) of the line soliton by adaptive quadrature"""
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    m, _ = integrate.quad(lambda x: soliton(mu, x, p) ** 2, 0.0, np.inf, **opts)
    g, _ = integrate.quad(lambda x: soliton_derivative(mu, x, p) ** 2, 0.0, np.inf, **opts)
    lp, _ = integrate.quad(lambda x: soliton(mu, x, p) ** p, 0.0, np.inf, **opts)
    return 2.0 * m, 2.0 * g, 2.0 * lp


def line_level(mu: float, p: float = CUBIC) -> float:
    """Energy of the line soliton of mass mu"""
    mu = _check_mass(mu)
    if p == CUBIC:
        return -mu ** 3 / 96.0
    _, g, lp = soliton_norms(mu, check_power(p))
    return 0.5 * g - lp / p


def star_stationary_level(mu: float, n: int, p: float = CUBIC) -> float:
    """Energy of n half-solitons of mass mu/n glued at their maxima; -mu^3/(24 n^2) for p = 4"""
    mu = _check_mass(mu)
    if n < 1:
        raise ParameterError(f"A star needs at least one half-line, got {n}")
    if p == CUBIC:
        return -mu ** 3 / (24.0 * n * n)
    return n * 0.5 * line_level(2.0 * mu / n, p)


def level(kind, mu: float, p: float = CUBIC) -> ReferenceLevel:
    """Reference level of the given kind; exact for p = 4, derived by quadrature otherwise"""
    kind = ReferenceKind(kind)
    mu = _check_mass(mu)
    p = check_power(p)
    if kind is ReferenceKind.LINE:
        value = line_level(mu, p)
    elif kind is ReferenceKind.HALFLINE:
        value = star_stationary_level(mu, 1, p)
    else:
        value = star_stationary_level(mu, 3, p)
    return ReferenceLevel(kind, mu, value, p, derived=p != CUBIC)


def all_levels(mu: float, p: float = CUBIC) -> Tuple[ReferenceLevel, ...]:
    return tuple(level(kind, mu, p) for kind in ReferenceKind)


def star3_stationary(mu: float, n: int, x, p: float = CUBIC):
    """
    Value at distance x from the centre of the stationary state on the
    star with n >= 3 half-lines: the decreasing half of the soliton of
    mass 2 mu / n on every half-line.
    """
    mu = _check_mass(mu)
    if n < 3:
        raise ParameterError(f"The star stationary state needs n >= 3, got {n}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ParameterError("Distance from the centre must be non-negative")
    return half_soliton(mu / n, x, p)


def star_stationary_state(mesh: Mesh, mu: float, p: float = CUBIC) -> GraphFunction:
    """star3_stationary sampled on a mesh of a star graph (any number of half-lines >= 3)"""
    g = mesh.graph
    n = len(g.halflines)
    if n < 3 or g.finite_edges or len(g.finite_vertices) != 1:
        raise ParameterError("star_stationary_state needs a star graph with at least three half-lines")
    return sample(mesh, lambda _edge, x: star3_stationary(mu, n, x, p))


def comparison_test(e_candidate: float, mu: float, slack: float = 0.0, p: float = CUBIC) -> bool:
    """True iff the candidate energy reaches the line level (inclusive, up to `slack`)"""
    return e_candidate <= line_level(mu, p) + slack


@lru_cache(maxsize=16)
def gn_sharp_ratio(p: float = CUBIC) -> float:
    """
    |u|_p^p / (mass^((p+2)/4) |u'|^((p-2)/2)) for the half-soliton, the
    largest value of this ratio on graphs with at least one half-line.
    """
    _, g, lp = soliton_norms(2.0, check_power(p))
    return (0.5 * lp) / ((0.5 * g) ** ((p - 2.0) / 4.0))
