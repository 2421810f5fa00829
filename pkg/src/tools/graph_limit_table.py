"""
graph_limit_table tool - ground-state energies for growing pendant length
"""
from typing import Dict, Any, List, Optional
import asyncio
import logging

from src.utils.export_utils import export_to_csv
from src.ground_states.surgery import gl_limit_check
from .common import check_mass, failure, solve_options

logger = logging.getLogger(__name__)

LIMIT_COLUMNS = ("ell", "energy", "verdict", "gap_to_halfline")
DEFAULT_LENGTHS = (1.0, 2.0, 5.0, 10.0, 50.0)

async def graph_limit_table(
    mass: float,
    lengths: Optional[List[float]] = None,
    power: Optional[float] = None,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    max_iters: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None
) -> Dict[str, Any]:
    """
    Minimized energies on three half-lines plus a pendant for increasing
    pendant lengths, checked for monotonicity and against the half-line
    level they approach.

    Args:
        mass (float): Mass mu > 0
        lengths (list, optional): Strictly increasing pendant lengths
            Default: 1, 2, 5, 10, 50 (scaled by 1 / mu)

    Returns:
        Dict containing:
        - summary (dict): halfline_level, monotone, strictly_decreasing,
          above_lower_pinch, last_gap
        - rows (dict): CSV export with columns ell, energy, verdict, gap_to_halfline
    """
    try:
        mu = check_mass(mass)
        ells = list(lengths) if lengths else [ell / mu for ell in DEFAULT_LENGTHS]
        opts = solve_options(power, h_max, truncation, None, None, max_iters, None, seed, workers)

        table = await asyncio.to_thread(gl_limit_check, mu, ells, opts)
        return {
            "success": True,
            "summary": table.to_dict(),
            "rows": export_to_csv([r.to_row() for r in table.rows], f"limit_table_{mu:g}", LIMIT_COLUMNS),
        }

    except Exception as e:
        return failure("graph_limit_table", e, ["lengths must be positive and strictly increasing"])
