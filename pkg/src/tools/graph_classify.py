"""
graph_classify tool - existence verdict for a ground state at fixed mass
"""
from typing import Dict, Any, Optional
import asyncio
import logging

from src.discretize.profile_io import export_profile
from src.ground_states.minimize import classify_existence
from .common import check_mass, failure, resolve_graph, solve_options

logger = logging.getLogger(__name__)

async def graph_classify(
    graph: str,
    mass: float,
    power: Optional[float] = None,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    tol_grad: Optional[float] = None,
    tol_level: Optional[float] = None,
    max_iters: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    reference: Optional[str] = None,
    pendant_length: Optional[float] = None,
    include_profile: bool = True
) -> Dict[str, Any]:
    """
    Decide whether a ground state of the given mass exists on the graph by
    comparing the minimized energy with the line soliton level.

    Args:
        graph (str): Graph text, bundled name, `gl` or file path
        mass (float): Mass mu > 0
        tol_level (float, optional): Comparison slack; calibrated when omitted
        reference (str, optional): "exact" (closed form) or "discrete"
            (line minimized on the same mesh). Default: "exact"
        Other arguments as for graph_minimize.

    Returns:
        Dict containing:
        - verdict (dict): status, gap, delta, structural flag, Assumption (H),
          runaway diagnostics
        - exit_code (int): 0 EXISTS, 1 LIKELY_NONEXISTENT, 2 INCONCLUSIVE
        - profile (dict): CSV of the certificate or best state (if requested)

    Example Usage:
        graph_classify(graph="line_with_pendant", mass=1.0)   # EXISTS
        graph_classify(graph="star3", mass=1.0)               # LIKELY_NONEXISTENT
    """
    try:
        mu = check_mass(mass)
        label, g = resolve_graph(graph, pendant_length)
        opts = solve_options(power, h_max, truncation, tol_grad, tol_level, max_iters, None, seed, workers,
                             reference)

        verdict = await asyncio.to_thread(classify_existence, g, mu, opts)
        logger.info(f"{label} at mass {mu}: {verdict.status.value} (gap {verdict.gap:.3e}, delta {verdict.delta:.3e})")

        response = {
            "success": True,
            "graph": label,
            "mass": mu,
            "verdict": verdict.to_dict(),
            "exit_code": verdict.status.exit_code,
        }
        state = verdict.certificate if verdict.certificate is not None else (
            verdict.result.best if verdict.result is not None else None
        )
        if include_profile and state is not None:
            response["profile"] = export_profile(state, f"{label}_state")
        return response

    except Exception as e:
        return failure("graph_classify", e, [
            "Check the mass and mesh parameters",
            "Pass tol_level explicitly if the calibrated slack is too tight",
        ])
