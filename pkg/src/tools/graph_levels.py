"""
graph_levels tool - closed-form reference energy levels
"""
from typing import Dict, Any, Optional
import logging

from src.config.settings import settings
from src.ground_states.closed_forms import all_levels
from .common import check_mass, failure

logger = logging.getLogger(__name__)

async def graph_levels(mass: float, power: Optional[float] = None) -> Dict[str, Any]:
    """
    Reference levels at a given mass: the line soliton, the half-line
    (half-soliton) and the stationary state of the three-half-line star.

    Args:
        mass (float): Mass mu > 0
        power (float, optional): Nonlinearity power p in (2, 6)
            Default: settings.DEFAULT_POWER

    Returns:
        Dict containing:
        - levels (list): One entry per kind with `kind`, `value` and
          `derived` (True when obtained by quadrature rather than exactly)

    Example Usage:
        graph_levels(mass=1.0)   # -1/96, -1/24, -1/216
    """
    try:
        mu = check_mass(mass)
        p = float(power if power is not None else settings.DEFAULT_POWER)
        levels = all_levels(mu, p)
        return {
            "success": True,
            "mass": mu,
            "power": p,
            "levels": [
                {"kind": ref.kind.value, "value": ref.value, "derived": ref.derived}
                for ref in levels
            ],
        }

    except Exception as e:
        return failure("graph_levels", e, ["Mass must be positive", "Power must lie in (2, 6)"])
