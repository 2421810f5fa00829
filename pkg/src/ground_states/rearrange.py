"""
Distribution functions and rearrangements of non-negative piecewise-linear
functions on metric graphs.

Everything here is exact for the piecewise-linear interpolant: the
distribution function rho(t) = |{u > t}| is itself piecewise linear in t
between consecutive nodal values (with jumps at plateau values), so the
monotone rearrangement u* is again piecewise linear with breakpoints at
the nodal values, and equimeasurability holds to round-off.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Any, List, Tuple

import numpy as np

from src.errors import ParameterError
from src.discretize.functional import EnergyReport, energy
from src.discretize.mesh import GraphFunction, Mesh
from src.graphs.metric_graph import GraphBuilder, MetricGraph

logger = logging.getLogger(__name__)


class ProfileKind(str, Enum):
    MONOTONE = "MONOTONE"     # non-increasing on [0, L]
    SYMMETRIC = "SYMMETRIC"   # even, non-increasing in |x|, on [-L/2, L/2]


@dataclass(frozen=True, eq=False)
class DistributionFunction:
    levels: np.ndarray       # distinct nodal values, ascending
    rho: np.ndarray          # |{u > t}| at each level
    rho_left: np.ndarray     # |{u >= t}|, the left limit (differs at plateaus)
    total_length: float

    @property
    def breakpoints(self) -> List[Tuple[float, float]]:
        """(t, rho(t)) by decreasing level"""
        return [(float(t), float(r)) for t, r in zip(self.levels[::-1], self.rho[::-1])]

    def __call__(self, t: float) -> float:
        levels = self.levels
        if t < levels[0]:
            return self.total_length
        if t >= levels[-1]:
            return 0.0
        k = int(np.searchsorted(levels, t, side="right")) - 1
        if t == levels[k]:
            return float(self.rho[k])
        lo, hi = levels[k], levels[k + 1]
        frac = (t - lo) / (hi - lo)
        return float(self.rho[k] + frac * (self.rho_left[k + 1] - self.rho[k]))


def _segment_data(u: GraphFunction):
    left, right, h, _ = u.mesh.segments
    a, b = u.values[left], u.values[right]
    return np.minimum(a, b), np.maximum(a, b), h


def _check_nonnegative(u: GraphFunction) -> None:
    if np.any(u.values < 0):
        raise ParameterError("Rearrangements need a non-negative function")


def distribution(u: GraphFunction) -> DistributionFunction:
    """
    Exact distribution function of the piecewise-linear interpolant of
    u >= 0, evaluated at every distinct nodal value.
    """
    _check_nonnegative(u)
    lo, hi, h = _segment_data(u)
    flat = hi == lo
    sloped = ~flat
    levels = np.unique(u.values)

    # Sloped segments contribute continuously: h for t <= lo, h (hi - t)/(hi - lo) inside, 0 above
    ls, hs, hh = lo[sloped], hi[sloped], h[sloped]
    r = hh / (hs - ls)
    order_lo = np.argsort(ls, kind="stable")
    order_hi = np.argsort(hs, kind="stable")
    lo_sorted, hi_sorted = ls[order_lo], hs[order_hi]
    cum = lambda x: np.concatenate([[0.0], np.cumsum(x)])
    h_by_lo = cum(hh[order_lo])
    r_by_lo, rhi_by_lo = cum(r[order_lo]), cum((r * hs)[order_lo])
    r_by_hi, rhi_by_hi = cum(r[order_hi]), cum((r * hs)[order_hi])

    below_lo = np.searchsorted(lo_sorted, levels, side="left")     # lo < t
    below_hi = np.searchsorted(hi_sorted, levels, side="right")    # hi <= t
    whole = h_by_lo[-1] - h_by_lo[below_lo]
    partial_r = r_by_lo[below_lo] - r_by_hi[below_hi]
    partial_rhi = rhi_by_lo[below_lo] - rhi_by_hi[below_hi]
    sloped_rho = whole + partial_rhi - levels * partial_r

    # Flat segments: included strictly below their value
    fv, fh = lo[flat], h[flat]
    order_f = np.argsort(fv, kind="stable")
    fv_sorted, fh_cum = fv[order_f], cum(fh[order_f])
    flat_rho = fh_cum[-1] - fh_cum[np.searchsorted(fv_sorted, levels, side="right")]
    flat_left = fh_cum[-1] - fh_cum[np.searchsorted(fv_sorted, levels, side="left")]

    rho = np.maximum(sloped_rho + flat_rho, 0.0)
    rho_left = np.maximum(sloped_rho + flat_left, 0.0)
    rho[-1] = 0.0
    return DistributionFunction(levels, rho, rho_left, float(h.sum()))


def _segment_graph(length: float) -> MetricGraph:
    b = GraphBuilder()
    b.add_vertex("origin")
    b.add_vertex("end")
    b.add_edge("origin", "end", length)
    return b.build()


@dataclass(frozen=True, eq=False)
class RearrangedProfile:
    """
    A 1-D profile given by breakpoints. MONOTONE lives on [0, L] with
    positions = s; SYMMETRIC lives on [-L/2, L/2] with positions = x.
    """
    kind: ProfileKind
    positions: np.ndarray
    values: np.ndarray

    @property
    def length(self) -> float:
        return float(self.positions[-1] - self.positions[0])

    def __call__(self, x):
        return np.interp(x, self.positions, self.values, left=0.0, right=0.0)

    @cached_property
    def as_graph_function(self) -> GraphFunction:
        """The profile as a function on a single segment (no boundary condition)"""
        g = _segment_graph(self.length)
        mesh = Mesh.from_positions(g, {0: self.positions - self.positions[0]})
        return GraphFunction(mesh, np.concatenate([self.values[[0, -1]], self.values[1:-1]]))

    def energy(self, p: float, quadrature: str = "exact") -> EnergyReport:
        return energy(self.as_graph_function, p, quadrature)

    def grad_norm_squared(self) -> float:
        dv = np.diff(self.values)
        return float(np.sum(dv * dv / np.diff(self.positions)))

    def rows(self) -> List[Dict[str, Any]]:
        """CSV rows in the profile schema"""
        edge_id = "rplus" if self.kind is ProfileKind.MONOTONE else "rline"
        return [
            {"edge_id": edge_id, "arclength": float(x), "value": float(v)}
            for x, v in zip(self.positions, self.values)
        ]


def _monotone_breakpoints(dist: DistributionFunction) -> Tuple[np.ndarray, np.ndarray]:
    s_points: List[float] = []
    t_points: List[float] = []
    for t, r, r_left in zip(dist.levels[::-1], dist.rho[::-1], dist.rho_left[::-1]):
        s_points.extend((r, r_left))
        t_points.extend((t, t))
    s = np.maximum.accumulate(np.asarray(s_points))
    t = np.asarray(t_points)
    s[0] = 0.0
    s[-1] = dist.total_length
    keep = np.concatenate([[True], np.diff(s) > 0])
    return s[keep], t[keep]


def monotone_rearrangement(u: GraphFunction) -> RearrangedProfile:
    """u*(s) = inf{t : rho(t) <= s} on [0, total length]"""
    dist = distribution(u)
    s, t = _monotone_breakpoints(dist)
    return RearrangedProfile(ProfileKind.MONOTONE, s, t)


def symmetric_from_monotone(profile: RearrangedProfile) -> RearrangedProfile:
    if profile.kind is not ProfileKind.MONOTONE:
        raise ParameterError("Expected a monotone profile")
    s, t = profile.positions, profile.values
    x = np.concatenate([-s[:0:-1] / 2.0, s / 2.0])
    values = np.concatenate([t[:0:-1], t])
    return RearrangedProfile(ProfileKind.SYMMETRIC, x, values)


def symmetric_rearrangement(u: GraphFunction) -> RearrangedProfile:
    """u_hat(x) = u*(2|x|) on [-L/2, L/2]"""
    return symmetric_from_monotone(monotone_rearrangement(u))


def preimage_count(u: GraphFunction, t: float) -> int:
    """Number of level-t crossings of the piecewise-linear interpolant"""
    top = float(u.values.max())
    if not 0.0 < t < top:
        raise ParameterError(f"Level must lie strictly between 0 and max u = {top}, got {t}")
    if np.any(u.values == t):
        raise ParameterError(f"Level {t} is a nodal value; counts are taken at regular levels only")
    left, right, _, _ = u.mesh.segments
    a, b = u.values[left] - t, u.values[right] - t
    return int(np.count_nonzero(a * b < 0))


def preimage_counts(u: GraphFunction) -> Tuple[np.ndarray, np.ndarray]:
    """(midlevels between consecutive distinct nodal values, crossing count at each)"""
    values = np.unique(u.values)
    if len(values) < 2:
        raise ParameterError("Preimage counts need a non-constant function")
    mids = 0.5 * (values[:-1] + values[1:])
    lo, hi, _ = _segment_data(u)
    counts = (np.searchsorted(np.sort(lo), mids, side="left")
              - np.searchsorted(np.sort(hi), mids, side="right"))
    return mids, counts


def min_preimage_count(u: GraphFunction) -> int:
    """Minimum crossing count over all regular midlevels"""
    _check_nonnegative(u)
    _, counts = preimage_counts(u)
    return int(counts.min())
