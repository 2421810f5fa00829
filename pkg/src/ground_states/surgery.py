"""
Competitor constructions by graph surgery (cut, paste, rearrange) and the
critical pendant length of the graph with three half-lines and a pendant.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from src.errors import ParameterError
from src.discretize.functional import energy_at_mass, mass
from src.discretize.mesh import GraphFunction, Mesh, build_mesh
from src.graphs import catalog
from src.graphs.metric_graph import GraphBuilder
from src.graphs.topology import tower_layout
from src.utils.logging_setup import get_event_logger
from .closed_forms import CUBIC, line_level, soliton, soliton_derivative, star_stationary_level
from .minimize import SolveOptions, Status, classify_existence, minimize
from .rearrange import monotone_rearrangement

logger = logging.getLogger(__name__)
events = get_event_logger(__name__)

SHAPE_TOLERANCE = 1e-6   # relative size of monotonicity violations that are clamped


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise ParameterError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class SolitonPieces:
    """The soliton cut at +-cut_width/2: one head and two (mirror) tails"""
    mu: float
    cut_width: float
    p: float = CUBIC

    @property
    def cut_value(self) -> float:
        return soliton(self.mu, 0.5 * self.cut_width, self.p)

    def head(self, x):
        """Head on [-cut_width/2, cut_width/2]"""
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > 0.5 * self.cut_width * (1 + 1e-12)):
            raise ParameterError("Head is defined on [-cut_width/2, cut_width/2] only")
        return soliton(self.mu, x, self.p)

    def tail(self, s):
        """Either tail at distance s >= 0 from its cut point"""
        return soliton(self.mu, 0.5 * self.cut_width + np.asarray(s, dtype=float), self.p)

    def _quad(self, fn, a: float, b: float) -> float:
        value, _ = integrate.quad(fn, a, b, epsabs=0.0, epsrel=1e-12, limit=400)
        return value

    @cached_property
    def head_mass(self) -> float:
        return 2.0 * self._quad(lambda x: soliton(self.mu, x, self.p) ** 2, 0.0, 0.5 * self.cut_width)

    @cached_property
    def tail_mass(self) -> float:
        return self._quad(lambda x: soliton(self.mu, x, self.p) ** 2, 0.5 * self.cut_width, np.inf)

    @cached_property
    def head_kinetic(self) -> float:
        return self._quad(lambda x: soliton_derivative(self.mu, x, self.p) ** 2, 0.0, 0.5 * self.cut_width)

    @cached_property
    def head_energy(self) -> float:
        potential = 2.0 * self._quad(lambda x: soliton(self.mu, x, self.p) ** self.p, 0.0, 0.5 * self.cut_width)
        return self.head_kinetic - potential / self.p

    @cached_property
    def tail_energy(self) -> float:
        half = 0.5 * self.cut_width
        kinetic = 0.5 * self._quad(lambda x: soliton_derivative(self.mu, x, self.p) ** 2, half, np.inf)
        potential = self._quad(lambda x: soliton(self.mu, x, self.p) ** self.p, half, np.inf)
        return kinetic - potential / self.p

    @property
    def reassembled_energy(self) -> float:
        return self.head_energy + 2.0 * self.tail_energy


def cut_soliton(mu: float, ell: float, p: float = CUBIC) -> SolitonPieces:
    """Cut the soliton of mass mu centred at 0 at +-ell/2"""
    _check_positive(mu=mu, ell=ell)
    return SolitonPieces(float(mu), float(ell), float(p))


def _default_mesh_parameters(mu: float, h_max: Optional[float], truncation: Optional[float]) -> Tuple[float, float]:
    opts = SolveOptions(h_max=h_max, truncation=truncation).resolved(mu)
    return opts.h_max, opts.truncation


def _renormalized(u: GraphFunction, mu: float) -> GraphFunction:
    return u.with_values(u.values * math.sqrt(mu / mass(u)))


@dataclass
class PendantCompetitor:
    function: GraphFunction
    pieces: SolitonPieces
    mesh_energy: float
    exact_margin: float      # E(competitor) - E(soliton), from the closed form
    level: float

    @property
    def mesh_margin(self) -> float:
        return self.mesh_energy - self.level

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pendant_length": self.pieces.cut_width,
            "mass": self.pieces.mu,
            "level": self.level,
            "exact_energy": self.level + self.exact_margin,
            "exact_margin": self.exact_margin,
            "mesh_energy": self.mesh_energy,
            "mesh_margin": self.mesh_margin,
        }


def pendant_competitor(
    mu: float,
    ell: float,
    p: float = CUBIC,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None
) -> PendantCompetitor:
    """
    Competitor on the line with a pendant of length ell: the two tails of
    the soliton cut at width ell meet at the vertex, and the head is
    monotonically rearranged onto the pendant with its maximum at the
    tip. Rearranging the head divides its kinetic energy by four, so the
    energy drops below the soliton level by 3/4 of the head kinetic energy.
    """
    pieces = cut_soliton(mu, ell, p)
    h_max, truncation = _default_mesh_parameters(mu, h_max, truncation)
    g = catalog.line_with_pendant(ell)
    mesh = build_mesh(g, h_max, truncation)
    pendant = catalog.pendant_edge(g)

    edge_values = {}
    for em in mesh.edges:
        if em.edge == pendant:
            edge_values[em.edge] = soliton(mu, 0.5 * (ell - em.positions), p)
        else:
            tail = np.array(pieces.tail(em.positions), dtype=float)
            tail[-1] = 0.0
            edge_values[em.edge] = tail
    u = _renormalized(GraphFunction.from_edge_values(mesh, edge_values), mu)
    margin = -0.75 * pieces.head_kinetic
    level = line_level(mu, p)
    result = PendantCompetitor(u, pieces, energy_at_mass(u, p, mu).total, margin, level)
    events.info("pendant_competitor", ell=ell, mass=mu, exact_margin=margin, mesh_margin=result.mesh_margin)
    return result


def bubble_tower_certificate(mesh: Mesh, mu: float, p: float = CUBIC) -> GraphFunction:
    """
    Cut-and-paste soliton on a bubble tower mesh: the soliton centred at
    the top of the chain, its two halves running down the two arcs of
    every bubble and then out along the two half-lines.
    """
    layout = tower_layout(mesh.graph)
    if layout is None:
        raise ParameterError("Graph is not a bubble tower with equal arcs")
    g = mesh.graph

    above = {}          # arc edge -> height of the chain above its upper end
    upper_end = {}
    remaining = 0.0
    for k in range(len(layout.bubbles) - 1, -1, -1):
        for arc in layout.bubbles[k]:
            above[arc] = remaining
            upper_end[arc] = layout.chain[k + 1]
        remaining += layout.arc_lengths[k]
    height = layout.height

    edge_values = {}
    for em in mesh.edges:
        e = g.edges[em.edge]
        x = em.positions
        if e.is_halfline:
            distance = height + x
            edge_values[em.edge] = np.where(x >= em.length, 0.0, soliton(mu, distance, p))
        else:
            from_upper = x if e.tail == upper_end[em.edge] else em.length - x
            edge_values[em.edge] = soliton(mu, above[em.edge] + from_upper, p)
    return _renormalized(GraphFunction.from_edge_values(mesh, edge_values), mu)


def bubble_tower_soliton(
    mu: float,
    arc_lengths: Sequence,
    p: float = CUBIC,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    tol: float = 1e-9
) -> GraphFunction:
    """The soliton wrapped onto the tower with the given bubble arcs"""
    _check_positive(mu=mu)
    for spec in arc_lengths:
        if not isinstance(spec, (int, float)):
            a, b = spec
            if abs(a - b) > tol * max(a, b):
                raise ParameterError(f"Bubble arcs must have equal lengths, got {a} and {b}")
    h_max, truncation = _default_mesh_parameters(mu, h_max, truncation)
    mesh = build_mesh(catalog.bubble_tower(list(arc_lengths)), h_max, truncation)
    return bubble_tower_certificate(mesh, mu, p)


def _clamped_decreasing(values: np.ndarray, scale: float, what: str) -> np.ndarray:
    clamped = np.minimum.accumulate(values)
    if np.max(values - clamped) > SHAPE_TOLERANCE * scale:
        raise ParameterError(f"{what} is not monotone")
    return clamped


def _superlevel_length(positions: np.ndarray, values: np.ndarray, t: float) -> float:
    """Length of {values > t} for a non-increasing profile starting at position 0"""
    below = np.flatnonzero(values <= t)
    if len(below) == 0:
        return float(positions[-1])
    k = int(below[0])
    if k == 0:
        return 0.0
    v0, v1 = values[k - 1], values[k]
    x0, x1 = positions[k - 1], positions[k]
    return float(x0 + (v0 - t) / (v0 - v1) * (x1 - x0))


def gl_competitor(psi: GraphFunction, ell_new: float) -> GraphFunction:
    """
    Competitor on the graph with pendant length ell_new > ell built from a
    state psi on the pendant-length-ell graph (maximum at the tip,
    non-increasing along every half-line). Every half-line is cut at the
    common level t whose superlevel set has total length ell_new - ell;
    the cut pieces are rearranged monotonically into one block inserted
    between the vertex and the old pendant, and the half-lines keep their
    tails (padded with zeros to the truncation length).
    """
    mesh = psi.mesh
    g = mesh.graph
    pendant = catalog.pendant_edge(g)
    ell = g.edges[pendant].length
    if not ell_new > ell:
        raise ParameterError(f"New pendant length must exceed {ell}, got {ell_new}")
    extra = ell_new - ell
    top = psi.max()
    if psi.at_vertex("tip") < top * (1.0 - SHAPE_TOLERANCE):
        raise ParameterError("The state must attain its maximum at the pendant tip")

    pendant_x, pendant_v = psi.on_edge(pendant)
    pendant_v = -_clamped_decreasing(-pendant_v, top, "Pendant profile")
    profiles = []
    for em in mesh.halfline_meshes():
        x, v = psi.on_edge(em.edge)
        profiles.append((em.edge, x, _clamped_decreasing(v, top, f"Half-line {em.edge} profile")))
    vertex_value = float(profiles[0][2][0])

    total = lambda t: sum(_superlevel_length(x, v, t) for _, x, v in profiles) - extra
    if total(0.0) <= 0:
        raise ParameterError(f"The half-lines cannot supply a block of length {extra}")
    level = optimize.brentq(total, 0.0, vertex_value, xtol=1e-15, rtol=1e-14, maxiter=500)

    # Glue the cut pieces at the vertex (all start at the vertex value) and rearrange them together
    builder = GraphBuilder()
    builder.add_vertex("centre")
    cuts = []
    for edge, x, v in profiles:
        cut = _superlevel_length(x, v, level)
        cuts.append(cut)
        builder.add_vertex(f"cut{edge}")
        builder.add_edge("centre", f"cut{edge}", cut)
    piece_graph = builder.build()
    piece_positions, piece_values = {}, {}
    for k, ((edge, x, v), cut) in enumerate(zip(profiles, cuts)):
        inside = x < cut
        piece_positions[k] = np.concatenate([x[inside], [cut]])
        piece_values[k] = np.concatenate([v[inside], [level]])
    piece_mesh = Mesh.from_positions(piece_graph, piece_positions)
    block = monotone_rearrangement(GraphFunction.from_edge_values(piece_mesh, piece_values))

    g_new = catalog.gl_graph(ell_new)
    new_pendant = catalog.pendant_edge(g_new)
    positions, values = {}, {}
    block_s, block_v = block.positions, block.values
    positions[new_pendant] = np.concatenate([extra - block_s[::-1], extra + pendant_x[1:]])
    values[new_pendant] = np.concatenate([block_v[::-1], pendant_v[1:]])
    positions[new_pendant][0] = 0.0

    new_halflines = [e.index for e in g_new.halflines]
    for new_edge, (edge, x, v), cut in zip(new_halflines, profiles, cuts):
        beyond = x > cut
        shifted = np.concatenate([[0.0], x[beyond] - cut])
        tail_values = np.concatenate([[level], v[beyond]])
        if shifted[-1] < mesh.truncation:
            shifted = np.concatenate([shifted, [mesh.truncation]])
            tail_values = np.concatenate([tail_values, [0.0]])
        positions[new_edge] = shifted
        values[new_edge] = tail_values

    new_mesh = Mesh.from_positions(g_new, positions, mesh.truncation)
    competitor = GraphFunction.from_edge_values(new_mesh, values)
    logger.debug(f"gl_competitor: ell {ell} -> {ell_new}, cut level {level:.6g}, cuts {cuts}")
    return competitor


def gl_ground_state(ell: float, mu: float, opts: Optional[SolveOptions] = None):
    """Minimizer on the pendant-length-ell graph started from the tip bump"""
    _check_positive(ell=ell, mu=mu)
    opts = replace(opts or SolveOptions(), starts=("vertex:tip",))
    return minimize(catalog.gl_graph(ell), mu, opts)


@dataclass(frozen=True)
class Probe:
    ell: float
    best_energy: float
    verdict: Status

    def to_row(self) -> Dict[str, Any]:
        return {"ell": self.ell, "best_energy": self.best_energy, "verdict": self.verdict.value}


@dataclass
class CriticalLengthResult:
    mu: float
    ell_low: float
    ell_high: float
    probes: List[Probe] = field(default_factory=list)
    complete: bool = True

    @property
    def ell_star(self) -> float:
        return 0.5 * (self.ell_low + self.ell_high)

    @property
    def width(self) -> float:
        return self.ell_high - self.ell_low

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mass": self.mu,
            "ell_low": self.ell_low,
            "ell_high": self.ell_high,
            "ell_star": self.ell_star,
            "width": self.width,
            "complete": self.complete,
            "probes": len(self.probes),
        }


def _probe(ell: float, mu: float, opts: SolveOptions) -> Tuple[Probe, bool]:
    verdict = classify_existence(catalog.gl_graph(ell), mu, opts)
    retried = False
    if verdict.status is Status.INCONCLUSIVE:
        wider = replace(opts, tol_level=10.0 * verdict.delta)
        logger.info(f"Probe at ell={ell:.6g} inconclusive; retrying with delta={wider.tol_level:.3e}")
        verdict = classify_existence(catalog.gl_graph(ell), mu, wider)
        retried = True
    probe = Probe(ell, verdict.best_energy, verdict.status)
    events.info("probe", ell=ell, energy=verdict.best_energy, verdict=verdict.status.value, retried=retried)
    return probe, retried


def critical_length(
    mu: float,
    opts: Optional[SolveOptions] = None,
    width: Optional[float] = None,
    ell_low: Optional[float] = None,
    ell_high: Optional[float] = None
) -> CriticalLengthResult:
    """
    Bisection on the pendant length using classify_existence (against the
    discrete line level) as oracle. The returned bracket has a
    non-existence verdict at ell_low and an existence verdict at ell_high;
    when a probe stays inconclusive after one retry the current bracket is
    returned with complete=False.
    """
    _check_positive(mu=mu)
    opts = replace(opts or SolveOptions(), reference="discrete")
    low = ell_low if ell_low is not None else 1e-3 / mu
    high = ell_high if ell_high is not None else 50.0 / mu
    width = width if width is not None else 1e-2 / mu
    _check_positive(ell_low=low, ell_high=high, width=width)
    if not low < high:
        raise ParameterError("ell_low must be smaller than ell_high")

    result = CriticalLengthResult(mu, low, high)
    for ell, expected in ((low, Status.LIKELY_NONEXISTENT), (high, Status.EXISTS)):
        probe, _ = _probe(ell, mu, opts)
        result.probes.append(probe)
        if probe.verdict is not expected:
            logger.warning(f"Bracket end ell={ell:.6g} gave {probe.verdict.value}, expected {expected.value}")
            result.complete = False
            return result

    while result.ell_high - result.ell_low > width:
        mid = result.ell_star
        probe, _ = _probe(mid, mu, opts)
        result.probes.append(probe)
        if probe.verdict is Status.EXISTS:
            result.ell_high = mid
        elif probe.verdict is Status.LIKELY_NONEXISTENT:
            result.ell_low = mid
        else:
            result.complete = False
            break

    logger.info(f"Critical length for mass {mu}: [{result.ell_low:.6g}, {result.ell_high:.6g}]")
    return result


@dataclass(frozen=True)
class CriticalMassResult:
    ell: float
    mass_low: float
    mass_high: float
    complete: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"ell": self.ell, "mass_low": self.mass_low, "mass_high": self.mass_high,
                "complete": self.complete}


def critical_mass(
    ell: float,
    opts: Optional[SolveOptions] = None,
    length: Optional[CriticalLengthResult] = None,
    **kwargs
) -> CriticalMassResult:
    """
    Mass threshold for existence at fixed pendant length. By scaling,
    ell*(mu) * mu does not depend on mu, so a critical length bracket at
    any mass gives the threshold mass mu * ell*(mu) / ell. Without
    `length` the bracket is computed at unit mass.
    """
    _check_positive(ell=ell)
    bracket = length if length is not None else critical_length(1.0, opts, **kwargs)
    scale = bracket.mu / ell
    return CriticalMassResult(ell, bracket.ell_low * scale, bracket.ell_high * scale, bracket.complete)


@dataclass(frozen=True)
class LimitRow:
    ell: float
    energy: float
    verdict: Status
    gap_to_halfline: float

    def to_row(self) -> Dict[str, Any]:
        return {"ell": self.ell, "energy": self.energy, "verdict": self.verdict.value,
                "gap_to_halfline": self.gap_to_halfline}


@dataclass
class LimitTable:
    mu: float
    rows: List[LimitRow]
    halfline_level: float
    monotone: bool
    strictly_decreasing: bool
    above_lower_pinch: bool

    @property
    def last_gap(self) -> float:
        return self.rows[-1].gap_to_halfline

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mass": self.mu,
            "halfline_level": self.halfline_level,
            "monotone": self.monotone,
            "strictly_decreasing": self.strictly_decreasing,
            "above_lower_pinch": self.above_lower_pinch,
            "last_gap": self.last_gap,
        }


def gl_limit_check(mu: float, ell_list: Sequence[float], opts: Optional[SolveOptions] = None,
                   slack: float = 1e-3) -> LimitTable:
    """
    Minimized energies on the pendant graphs for increasing pendant
    lengths, with the checks that they are non-increasing, strictly
    decreasing between lengths that both admit a ground state, and never
    below the half-line level minus `slack`.
    """
    _check_positive(mu=mu)
    ells = [float(x) for x in ell_list]
    if not ells or any(b <= a for a, b in zip(ells, ells[1:])):
        raise ParameterError("ell_list must be non-empty and strictly increasing")
    opts = replace(opts or SolveOptions(), reference="discrete")
    resolved = opts.resolved(mu)
    halfline = star_stationary_level(mu, 1, resolved.p)

    rows = []
    for ell in ells:
        verdict = classify_existence(catalog.gl_graph(ell), mu, opts)
        rows.append(LimitRow(ell, verdict.best_energy, verdict.status, verdict.best_energy - halfline))

    tiny = 1e-12 * abs(halfline)
    monotone = all(b.energy <= a.energy + tiny for a, b in zip(rows, rows[1:]))
    strict = all(
        b.energy < a.energy
        for a, b in zip(rows, rows[1:])
        if a.verdict is Status.EXISTS and b.verdict is Status.EXISTS
    )
    above = all(r.energy >= halfline - slack for r in rows)
    if not (monotone and strict):
        logger.warning(f"Energies on the pendant graphs are not decreasing in ell for mass {mu}")
    return LimitTable(mu, rows, halfline, monotone, strict, above)
