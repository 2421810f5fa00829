"""
graph_minimize tool - multi-start minimization of the energy at fixed mass
"""
from typing import Dict, Any, List, Optional
import asyncio
import logging

from src.discretize.profile_io import export_profile
from src.ground_states.closed_forms import line_level
from src.ground_states.minimize import certify_stationary, minimize
from .common import check_mass, failure, resolve_graph, solve_options

logger = logging.getLogger(__name__)

STATIONARY_TOL = 1e-3

async def graph_minimize(
    graph: str,
    mass: float,
    power: Optional[float] = None,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    tol_grad: Optional[float] = None,
    max_iters: Optional[int] = None,
    starts: Optional[List[str]] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    pendant_length: Optional[float] = None,
    include_profile: bool = True
) -> Dict[str, Any]:
    """
    Minimize the NLS energy at fixed mass on a (truncated) metric graph.

    Args:
        graph (str): Graph text, bundled name, `gl` or file path
        mass (float): Mass mu > 0
        power (float, optional): Nonlinearity power p in (2, 6)
        h_max (float, optional): Mesh spacing; default MESH_RESOLUTION / mu
        truncation (float, optional): Half-line truncation; default TRUNCATION_SCALE / mu
        tol_grad (float, optional): Relative projected-gradient tolerance
        max_iters (int, optional): Iteration cap per start
        starts (list, optional): Start names (edge:<k>, vertex:<name>, constant, random)
        seed (int, optional): Seed of the random start
        workers (int, optional): Parallel starts
        pendant_length (float, optional): Pendant length for the `gl` family
        include_profile (bool): Attach the best state as profile CSV
            Default: True

    Returns:
        Dict containing:
        - graph (str): Label of the resolved graph
        - report (dict): Energy report, starts, runaway diagnostics, options
        - line_level (float), gap (float): Comparison with the soliton level
        - stationarity (dict): Residuals of the best state
        - profile (dict): CSV export of the best state (if requested)
    """
    try:
        mu = check_mass(mass)
        label, g = resolve_graph(graph, pendant_length)
        opts = solve_options(power, h_max, truncation, tol_grad, None, max_iters, starts, seed, workers)

        result = await asyncio.to_thread(minimize, g, mu, opts)
        p = result.options.p
        _, stationarity = certify_stationary(result.best, p, STATIONARY_TOL)
        reference = line_level(mu, p)

        response = {
            "success": True,
            "graph": label,
            "report": result.to_dict(),
            "line_level": reference,
            "gap": result.energy - reference,
            "stationarity": stationarity.to_dict(),
        }
        if include_profile:
            response["profile"] = export_profile(result.best, f"{label}_profile")
        return response

    except Exception as e:
        return failure("graph_minimize", e, [
            "Check the mass and mesh parameters",
            "Increase max_iters if no start converged",
        ])
