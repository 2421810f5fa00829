"""
graph_critical_length tool - bisection for the critical pendant length
"""
from typing import Dict, Any, Optional
import asyncio
import logging

from src.utils.export_utils import export_to_csv
from src.ground_states.surgery import critical_length, critical_mass
from .common import check_mass, failure, solve_options

logger = logging.getLogger(__name__)

PROBE_COLUMNS = ("ell", "best_energy", "verdict")

async def graph_critical_length(
    mass: float,
    width: Optional[float] = None,
    ell_low: Optional[float] = None,
    ell_high: Optional[float] = None,
    power: Optional[float] = None,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    max_iters: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    pendant_length: Optional[float] = None
) -> Dict[str, Any]:
    """
    Bracket the pendant length at which a ground state of the given mass
    starts to exist on three half-lines plus a pendant.

    Args:
        mass (float): Mass mu > 0
        width (float, optional): Final bracket width; default 1e-2 / mu
        ell_low, ell_high (float, optional): Initial bracket; default
            [1e-3 / mu, 50 / mu]
        pendant_length (float, optional): When given, also report the
            critical mass bracket for this pendant length (bisection at
            unit mass, rescaled)
        Other arguments as for graph_minimize.

    Returns:
        Dict containing:
        - result (dict): ell_low, ell_high, ell_star, width, complete
        - probes (dict): CSV export with columns ell, best_energy, verdict
        - critical_mass (dict): mass bracket (if pendant_length was given)
    """
    try:
        mu = check_mass(mass)
        opts = solve_options(power, h_max, truncation, None, None, max_iters, None, seed, workers)

        result = await asyncio.to_thread(critical_length, mu, opts, width, ell_low, ell_high)
        if not result.complete:
            logger.warning(f"Critical length search for mass {mu} stopped early")
        response = {
            "success": True,
            "result": result.to_dict(),
            "probes": export_to_csv([p.to_row() for p in result.probes], f"critical_length_{mu:g}", PROBE_COLUMNS),
        }
        if pendant_length is not None:
            response["critical_mass"] = critical_mass(float(pendant_length), length=result).to_dict()
        return response

    except Exception as e:
        return failure("graph_critical_length", e, [
            "Widen the initial bracket with ell_low / ell_high",
            "Use a longer truncation if the short-pendant end is inconclusive",
        ])
