"""
Numerical solution of the mass-constrained minimization problem on a
truncated metric graph, stationarity certification, and existence
classification by comparison with the soliton level.

Descent: Sobolev-preconditioned projected gradient. The gradient of the
lumped energy is preconditioned with P = K + sigma W (stiffness plus the
soliton frequency times the lumped mass), projected onto the tangent
space of the mass sphere in the P inner product, and every trial point
is retracted onto the constraint (|u|, then rescaled to mass mu) before
the Armijo test, so accepted steps never increase the energy.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import dijkstra
from scipy.sparse.linalg import factorized

from src.config.settings import settings
from src.errors import ParameterError, SolverInvariantError
from src.discretize.functional import (
    EnergyReport,
    calibrate_gn_constant,
    check_power,
    energy,
    energy_at_mass,
    energy_value,
    gn_lower_bound,
    gradient_values,
)
from src.discretize.mesh import GraphFunction, Mesh, build_mesh, sample
from src.graphs.metric_graph import MetricGraph, require_valid
from src.graphs.topology import check_assumption_h, is_bubble_tower
from src.utils.logging_setup import get_event_logger
from .closed_forms import gn_sharp_ratio, line_level, soliton, soliton_frequency

logger = logging.getLogger(__name__)
events = get_event_logger(__name__)

REFERENCES = ("exact", "discrete")
ARMIJO_C1 = 1e-4
MAX_STEP = 2.0
MIN_STEP = 1e-12
BOUNDARY_ZONE = 0.1       # outer fraction of each truncated half-line
ESCAPE_ZONE = 0.25        # half-line points beyond this fraction of L count as escaped
DISCRETE_SLACK = 1e-6     # relative comparison slack against the discrete line level
GN_MARGIN = 1.01


class Status(str, Enum):
    EXISTS = "EXISTS"
    LIKELY_NONEXISTENT = "LIKELY_NONEXISTENT"
    INCONCLUSIVE = "INCONCLUSIVE"

    @property
    def exit_code(self) -> int:
        return {"EXISTS": 0, "LIKELY_NONEXISTENT": 1, "INCONCLUSIVE": 2}[self.value]


@dataclass(frozen=True)
class SolveOptions:
    """
    Solver options. Unset fields take their defaults from settings; h_max
    and truncation default to MESH_RESOLUTION / mu and TRUNCATION_SCALE / mu.
    `starts` selects start names (all default starts when None) and
    `tol_level` overrides the calibrated comparison slack.
    """
    p: Optional[float] = None
    h_max: Optional[float] = None
    truncation: Optional[float] = None
    tol_grad: Optional[float] = None
    tol_level: Optional[float] = None
    max_iters: Optional[int] = None
    starts: Optional[Tuple[str, ...]] = None
    seed: Optional[int] = None
    workers: Optional[int] = None
    reference: str = "exact"
    runaway_threshold: Optional[float] = None
    tol_level_floor: Optional[float] = None

    def resolved(self, mu: float) -> "SolveOptions":
        if not mu > 0:
            raise ParameterError(f"Mass must be positive, got {mu}")
        opts = replace(
            self,
            p=float(self.p if self.p is not None else settings.DEFAULT_POWER),
            h_max=float(self.h_max if self.h_max is not None else settings.MESH_RESOLUTION / mu),
            truncation=float(self.truncation if self.truncation is not None else settings.TRUNCATION_SCALE / mu),
            tol_grad=float(self.tol_grad if self.tol_grad is not None else settings.TOL_GRAD),
            max_iters=int(self.max_iters if self.max_iters is not None else settings.MAX_ITERS),
            starts=tuple(self.starts) if self.starts is not None else None,
            seed=int(self.seed if self.seed is not None else settings.DEFAULT_SEED),
            workers=int(self.workers if self.workers is not None else settings.SOLVER_WORKERS),
            runaway_threshold=float(
                self.runaway_threshold if self.runaway_threshold is not None else settings.RUNAWAY_THRESHOLD
            ),
            tol_level_floor=float(
                self.tol_level_floor if self.tol_level_floor is not None else settings.TOL_LEVEL_FLOOR
            ),
        )
        opts.validate()
        return opts

    def validate(self) -> None:
        check_power(self.p)
        if not (self.h_max > 0 and self.truncation > 0):
            raise ParameterError("h_max and truncation must be positive")
        if not (self.tol_grad > 0 and self.tol_level_floor > 0):
            raise ParameterError("Tolerances must be positive")
        if self.tol_level is not None and not self.tol_level > 0:
            raise ParameterError("tol_level must be positive")
        if self.max_iters < 1 or self.workers < 1:
            raise ParameterError("max_iters and workers must be at least 1")
        if self.starts is not None and not self.starts:
            raise ParameterError("starts must not be empty")
        if self.reference not in REFERENCES:
            raise ParameterError(f"reference must be one of {REFERENCES}, got {self.reference!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "h_max": self.h_max,
            "truncation": self.truncation,
            "tol_grad": self.tol_grad,
            "max_iters": self.max_iters,
            "seed": self.seed,
            "reference": self.reference,
        }


@dataclass(frozen=True)
class Start:
    name: str
    function: GraphFunction


@dataclass(frozen=True)
class StartRecord:
    name: str
    energy: float
    iterations: int
    converged: bool
    gradient_measure: float


@dataclass
class MinimizeResult:
    """
    `report` evaluates the best state rescaled to mass mu with exact
    quadrature; the start records keep the lumped energies the descent
    minimized.
    """
    mu: float
    options: SolveOptions
    best: GraphFunction
    best_start: str
    report: EnergyReport
    records: List[StartRecord]
    boundary_mass_fraction: float
    escape_fraction: float
    converged: bool
    gn_constant: Optional[float] = None

    @property
    def energy(self) -> float:
        return self.report.total

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mass": self.mu,
            "best_start": self.best_start,
            "converged": self.converged,
            "energy": self.report.to_dict(),
            "boundary_mass_fraction": self.boundary_mass_fraction,
            "escape_fraction": self.escape_fraction,
            "starts": [
                {
                    "name": r.name,
                    "energy": r.energy,
                    "iterations": r.iterations,
                    "converged": r.converged,
                }
                for r in self.records
            ],
            "options": self.options.to_dict(),
        }


@dataclass
class ExistenceVerdict:
    status: Status
    gap: float
    reference_level: float
    delta: float
    best_energy: float
    certificate: Optional[GraphFunction] = None
    structural: bool = False
    assumption_h: bool = False
    escape_fraction: float = 0.0
    boundary_mass_fraction: float = 0.0
    energy_drop: Optional[float] = None
    result: Optional[MinimizeResult] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "gap": self.gap,
            "best_energy": self.best_energy,
            "reference_level": self.reference_level,
            "delta": self.delta,
            "structural": self.structural,
            "assumption_h": self.assumption_h,
            "escape_fraction": self.escape_fraction,
            "boundary_mass_fraction": self.boundary_mass_fraction,
            "energy_drop": self.energy_drop,
        }


def _normalized(values: np.ndarray, mesh: Mesh, mu: float) -> np.ndarray:
    values = np.abs(values)
    values[mesh.dirichlet] = 0.0
    m = float(mesh.weights @ (values * values))
    if m <= 0:
        raise ParameterError("Cannot normalize the zero function")
    return values * math.sqrt(mu / m)


def _distance_graph(mesh: Mesh) -> sparse.csr_matrix:
    left, right, h, _ = mesh.segments
    shortest: Dict[Tuple[int, int], float] = {}
    for a, b, length in zip(left.tolist(), right.tolist(), h.tolist()):
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        shortest[key] = min(length, shortest.get(key, math.inf))
    rows = [k[0] for k in shortest]
    cols = [k[1] for k in shortest]
    return sparse.csr_matrix((list(shortest.values()), (rows, cols)), shape=(mesh.n_nodes, mesh.n_nodes))


def _bump(mesh: Mesh, distances: np.ndarray, mu: float, p: float) -> GraphFunction:
    values = soliton(mu, np.where(np.isfinite(distances), distances, 1e300), p)
    return GraphFunction(mesh, _normalized(np.asarray(values, dtype=float), mesh, mu))


def default_starts(mesh: Mesh, mu: float, p: float = 4.0, seed: int = 0) -> List[Start]:
    """
    Mass-normalized initial states: a soliton-shaped bump centred at each
    edge midpoint ("edge:<k>", half-lines at half the truncation length)
    and at each finite vertex ("vertex:<name>"), the constant, and one
    seeded random positive function.
    """
    g = mesh.graph
    distances = _distance_graph(mesh)
    starts: List[Start] = []

    for em in mesh.edges:
        target = 0.5 * em.length
        node = int(em.nodes[int(np.argmin(np.abs(em.positions - target)))])
        d = dijkstra(distances, directed=False, indices=node)
        starts.append(Start(f"edge:{em.edge}", _bump(mesh, d, mu, p)))

    for v in g.finite_vertices:
        d = dijkstra(distances, directed=False, indices=v.index)
        starts.append(Start(f"vertex:{v.name}", _bump(mesh, d, mu, p)))

    starts.append(Start("constant", GraphFunction(mesh, _normalized(np.ones(mesh.n_nodes), mesh, mu))))

    rng = np.random.default_rng(seed)
    noise = rng.uniform(0.1, 1.0, size=mesh.n_nodes)
    starts.append(Start("random", GraphFunction(mesh, _normalized(noise, mesh, mu))))
    return starts


def _boundary_fractions(u: GraphFunction) -> Tuple[float, float]:
    """(mass fraction in the outer 10% of half-lines, mass fraction beyond 1/4 of the truncation)"""
    mesh = u.mesh
    weights = mesh.weights * u.values ** 2
    total = float(weights.sum())
    if total <= 0:
        return 0.0, 0.0
    outer, escaped = 0.0, 0.0
    for em in mesh.halfline_meshes():
        interior = em.positions > 0
        x, nodes = em.positions[interior], em.nodes[interior]
        outer += float(weights[nodes[x >= (1.0 - BOUNDARY_ZONE) * em.length]].sum())
        escaped += float(weights[nodes[x > ESCAPE_ZONE * em.length]].sum())
    return outer / total, escaped / total


class _Descent:
    """Projected Sobolev-gradient descent for one start"""

    def __init__(self, mesh: Mesh, mu: float, opts: SolveOptions, gn_constant: Optional[float]):
        self.mesh = mesh
        self.mu = mu
        self.opts = opts
        self.p = opts.p
        self.gn_constant = gn_constant
        self.free = np.flatnonzero(mesh.free)
        sigma = soliton_frequency(mu, opts.p)
        precond = (mesh.stiffness + sparse.diags(sigma * mesh.weights)).tocsr()
        self.precond = precond[self.free][:, self.free].tocsc()
        self.solve = factorized(self.precond)

    def _retract(self, values: np.ndarray) -> np.ndarray:
        return _normalized(values, self.mesh, self.mu)

    def _check_invariants(self, values: np.ndarray, e_old: float, e_new: float) -> None:
        if e_new > e_old:
            raise SolverInvariantError(f"Energy increased from {e_old!r} to {e_new!r}")
        if self.gn_constant is not None:
            du_sq = float(values @ (self.mesh.stiffness @ values))
            bound = gn_lower_bound(self.mu, math.sqrt(max(du_sq, 0.0)), self.gn_constant, self.p)
            if e_new < bound - 1e-12 * max(1.0, abs(e_new)):
                raise SolverInvariantError(f"Energy {e_new!r} below the Gagliardo-Nirenberg bound {bound!r}")

    def run(self, start: Start) -> Tuple[np.ndarray, StartRecord]:
        mesh, p, free = self.mesh, self.p, self.free
        u = self._retract(start.function.values)
        e = energy_value(u, mesh, p)
        step = 1.0
        measure = math.inf
        iterations = 0
        converged = False

        while iterations < self.opts.max_iters:
            g = gradient_values(u, mesh, p)[free]
            wu = mesh.weights[free] * u[free]
            d = self.solve(g)
            c = self.solve(wu)
            d = d - (d @ wu) / (c @ wu) * c
            pd = self.precond @ d
            slope = float(d @ pd)
            norm_u = math.sqrt(float(u[free] @ (self.precond @ u[free])))
            measure = math.sqrt(max(slope, 0.0)) / norm_u
            if measure < self.opts.tol_grad:
                converged = True
                break

            accepted = False
            while step >= MIN_STEP:
                trial = u.copy()
                trial[free] -= step * d
                trial = self._retract(trial)
                e_trial = energy_value(trial, mesh, p)
                if e_trial <= e - ARMIJO_C1 * step * slope:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                converged = measure < 10.0 * self.opts.tol_grad
                logger.debug(f"Line search stalled for {start.name} at measure {measure:.3e}")
                break

            self._check_invariants(trial, e, e_trial)
            u, e = trial, e_trial
            iterations += 1
            step = min(2.0 * step, MAX_STEP)

        record = StartRecord(start.name, e, iterations, converged, measure)
        events.info("start_finished", start=start.name, energy=e, iterations=iterations,
                    converged=converged, measure=measure)
        return u, record


def _select_starts(starts: List[Start], names: Optional[Sequence[str]]) -> List[Start]:
    if names is None:
        return starts
    chosen = [s for s in starts if s.name in set(names)]
    if not chosen:
        available = ", ".join(s.name for s in starts)
        raise ParameterError(f"No start matches {list(names)}; available: {available}")
    return chosen


def minimize(g: MetricGraph, mu: float, opts: Optional[SolveOptions] = None) -> MinimizeResult:
    """
    Multi-start descent to a mass-mu stationary state. The best state is
    the lowest-energy converged start (ties broken by start name); when no
    start converges the lowest-energy start is returned with
    converged=False.
    """
    require_valid(g)
    opts = (opts or SolveOptions()).resolved(mu)
    mesh = build_mesh(g, opts.h_max, opts.truncation)
    starts = _select_starts(default_starts(mesh, mu, opts.p, opts.seed), opts.starts)

    gn_constant = None
    if not g.is_compact:
        floor = 2.0 / opts.p * gn_sharp_ratio(opts.p)
        gn_constant = GN_MARGIN * calibrate_gn_constant([s.function for s in starts], opts.p, floor=floor)

    logger.info(f"Minimizing on {len(mesh.graph.edges)} edges, {mesh.n_nodes} nodes, "
                f"mass {mu}, p {opts.p}, {len(starts)} start(s)")

    def run(start: Start):
        return _Descent(mesh, mu, opts, gn_constant).run(start)

    if opts.workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=opts.workers) as pool:
            outcomes = list(pool.map(run, starts))
    else:
        outcomes = [run(s) for s in starts]

    records = [record for _, record in outcomes]
    pool_ = [i for i, r in enumerate(records) if r.converged] or list(range(len(records)))
    best_index = min(pool_, key=lambda i: (records[i].energy, records[i].name))
    best = GraphFunction(mesh, outcomes[best_index][0])
    report = energy_at_mass(best, opts.p, mu)
    boundary, escape = _boundary_fractions(best)
    converged = any(r.converged for r in records)
    if not converged:
        logger.warning(f"No start converged within {opts.max_iters} iterations")

    events.info("minimize_finished", best_start=records[best_index].name, energy=report.total,
                converged=converged, escape_fraction=escape)
    return MinimizeResult(
        mu=mu,
        options=opts,
        best=best,
        best_start=records[best_index].name,
        report=report,
        records=records,
        boundary_mass_fraction=boundary,
        escape_fraction=escape,
        converged=converged,
        gn_constant=gn_constant,
    )


@dataclass(frozen=True)
class StationarityReport:
    stationary: bool
    residual_l2: float
    kirchhoff_residual: float
    neumann_residual: float
    omega: float
    tol: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stationary": self.stationary,
            "residual_l2": self.residual_l2,
            "kirchhoff_residual": self.kirchhoff_residual,
            "neumann_residual": self.neumann_residual,
            "omega": self.omega,
            "tol": self.tol,
        }


def certify_stationary(u: GraphFunction, p: float, tol: float) -> Tuple[bool, StationarityReport]:
    """
    Discrete residual of u'' + |u|^(p-2) u - omega u (omega from the energy
    report) in L2 over free nodes, plus the vertex derivative conditions.
    """
    report = energy(u, p)
    mesh = u.mesh
    free = mesh.free
    weak = -(mesh.stiffness @ u.values) + mesh.weights * (np.abs(u.values) ** (p - 2.0) - report.omega) * u.values
    w = mesh.weights[free]
    residual = math.sqrt(float(np.sum(weak[free] ** 2 / w)))
    ok = residual < tol and report.kirchhoff_residual < tol and report.neumann_residual < tol
    return ok, StationarityReport(ok, residual, report.kirchhoff_residual, report.neumann_residual,
                                  report.omega, tol)


@lru_cache(maxsize=64)
def _interpolated_soliton_error(mu: float, p: float, h_max: float, truncation: float) -> float:
    from src.graphs import catalog

    mesh = build_mesh(catalog.line(), h_max, truncation)
    u = sample(mesh, lambda _edge, x: soliton(mu, x, p))
    return abs(energy_at_mass(u, p, mu).total - line_level(mu, p))


@lru_cache(maxsize=64)
def _discrete_line_level(mu: float, opts: SolveOptions) -> float:
    from src.graphs import catalog

    line_opts = replace(opts, starts=("vertex:v",), reference="exact", workers=1)
    return minimize(catalog.line(), mu, line_opts).energy


def reference_level(mu: float, opts: SolveOptions) -> float:
    """The line level the gap is measured against (closed form, or minimized on the same mesh)"""
    opts = opts.resolved(mu)
    if opts.reference == "exact":
        return line_level(mu, opts.p)
    key = replace(opts, starts=None, workers=1, tol_level=None)
    return _discrete_line_level(mu, key)


def level_slack(mu: float, opts: SolveOptions) -> float:
    """
    Comparison slack delta: the explicit tol_level, else 10x the measured
    mesh and truncation error of the soliton level (exact reference) or a
    fixed relative slack (discrete reference), never below the floor.
    """
    opts = opts.resolved(mu)
    if opts.tol_level is not None:
        return opts.tol_level
    scale = abs(line_level(mu, opts.p))
    if opts.reference == "discrete":
        return max(opts.tol_level_floor, DISCRETE_SLACK) * scale
    measured = _interpolated_soliton_error(mu, opts.p, opts.h_max, opts.truncation)
    return max(opts.tol_level_floor * scale, 10.0 * measured)


def classify_existence(g: MetricGraph, mu: float, opts: Optional[SolveOptions] = None) -> ExistenceVerdict:
    """
    EXISTS when the best energy lies below the line level by more than
    delta; LIKELY_NONEXISTENT when it sits within delta of the level, a
    solve with doubled truncation lowers it by less than delta, and the
    mass escapes along the half-lines; INCONCLUSIVE otherwise. Bubble
    towers are classified structurally.
    """
    require_valid(g)
    opts = (opts or SolveOptions()).resolved(mu)
    h_holds = bool(check_assumption_h(g))
    ref = reference_level(mu, opts)
    delta = level_slack(mu, opts)

    if is_bubble_tower(g):
        from .surgery import bubble_tower_certificate

        mesh = build_mesh(g, opts.h_max, opts.truncation)
        certificate = bubble_tower_certificate(mesh, mu, opts.p)
        best = energy_at_mass(certificate, opts.p, mu).total
        _, escape = _boundary_fractions(certificate)
        verdict = ExistenceVerdict(
            status=Status.EXISTS, gap=best - ref, reference_level=ref, delta=delta,
            best_energy=best, certificate=certificate, structural=True, assumption_h=h_holds,
            escape_fraction=escape,
        )
        events.info("verdict", status=verdict.status.value, gap=verdict.gap, structural=True)
        return verdict

    result = minimize(g, mu, opts)
    gap = result.energy - ref
    common = dict(reference_level=ref, delta=delta, assumption_h=h_holds)

    if gap <= -delta:
        verdict = ExistenceVerdict(
            status=Status.EXISTS, gap=gap, best_energy=result.energy, certificate=result.best,
            escape_fraction=result.escape_fraction, boundary_mass_fraction=result.boundary_mass_fraction,
            result=result, **common,
        )
    elif g.is_compact:
        verdict = ExistenceVerdict(
            status=Status.INCONCLUSIVE, gap=gap, best_energy=result.energy, result=result, **common,
        )
    else:
        wide = replace(opts, truncation=2.0 * opts.truncation)
        wide_result = minimize(g, mu, wide)
        wide_gap = wide_result.energy - reference_level(mu, wide)
        drop = result.energy - wide_result.energy
        if wide_gap <= -delta:
            verdict = ExistenceVerdict(
                status=Status.EXISTS, gap=wide_gap, best_energy=wide_result.energy,
                certificate=wide_result.best, escape_fraction=wide_result.escape_fraction,
                boundary_mass_fraction=wide_result.boundary_mass_fraction, energy_drop=drop,
                result=wide_result, **common,
            )
        else:
            runaway = (abs(gap) <= delta and drop < delta
                       and wide_result.escape_fraction >= opts.runaway_threshold)
            verdict = ExistenceVerdict(
                status=Status.LIKELY_NONEXISTENT if runaway else Status.INCONCLUSIVE,
                gap=gap, best_energy=result.energy, escape_fraction=wide_result.escape_fraction,
                boundary_mass_fraction=wide_result.boundary_mass_fraction, energy_drop=drop,
                result=result, **common,
            )

    events.info("verdict", status=verdict.status.value, gap=verdict.gap, delta=delta,
                escape_fraction=verdict.escape_fraction)
    return verdict
