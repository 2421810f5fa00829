"""
graph_competitor tool - explicit competitors built by graph surgery
"""
from typing import Dict, Any, List, Optional
import asyncio
import logging

from src.discretize.functional import energy, energy_at_mass, mass as mass_of
from src.discretize.profile_io import export_profile
from src.errors import ParameterError
from src.ground_states.closed_forms import line_level
from src.ground_states.surgery import bubble_tower_soliton, gl_competitor, gl_ground_state, pendant_competitor
from .common import check_mass, failure, solve_options

logger = logging.getLogger(__name__)

CONSTRUCTIONS = ("pendant", "gl", "tower")


def _pendant(mu, ell, p, h_max, truncation):
    built = pendant_competitor(mu, ell, p, h_max, truncation)
    return f"pendant_{ell:g}", built.to_dict(), built.function


def _gl(mu, ell, new_length, opts):
    if new_length is None:
        raise ParameterError("The gl construction needs new_length")
    psi = gl_ground_state(ell, mu, opts)
    p = psi.options.p
    competitor = gl_competitor(psi.best, new_length)
    before = energy(psi.best, p, "exact").total
    after = energy(competitor, p, "exact").total
    summary = {
        "pendant_length": ell,
        "new_length": new_length,
        "mass": mu,
        "state_energy": before,
        "competitor_energy": after,
        "competitor_mass": mass_of(competitor, "exact"),
        "decrease": after < before,
    }
    return f"gl_{ell:g}_to_{new_length:g}", summary, competitor


def _tower(mu, arcs, p, h_max, truncation):
    if not arcs:
        raise ParameterError("The tower construction needs at least one arc length")
    u = bubble_tower_soliton(mu, arcs, p, h_max, truncation)
    value = energy_at_mass(u, p, mu).total
    level = line_level(mu, p)
    summary = {"mass": mu, "bubbles": len(arcs), "energy": value, "level": level, "gap": value - level}
    return f"tower_{len(arcs)}", summary, u


async def graph_competitor(
    construction: str,
    mass: float,
    pendant_length: Optional[float] = None,
    new_length: Optional[float] = None,
    arcs: Optional[List[float]] = None,
    power: Optional[float] = None,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    seed: Optional[int] = None,
    include_profile: bool = True
) -> Dict[str, Any]:
    """
    Build and evaluate a competitor.

    Args:
        construction (str): One of
            - "pendant": soliton cut at +-pendant_length/2 on the line with a
              pendant, head rearranged onto the pendant
            - "gl": ground state on the three-half-line graph with pendant
              `pendant_length`, moved onto pendant `new_length` by cutting
              the half-lines at a common level
            - "tower": soliton wrapped onto a bubble tower with the given arcs
        mass (float): Mass mu > 0

    Returns:
        Dict containing:
        - construction (str), label (str)
        - summary (dict): Energies and margins of the construction
        - profile (dict): CSV export of the competitor (if requested)
    """
    try:
        mu = check_mass(mass)
        if construction not in CONSTRUCTIONS:
            raise ParameterError(f"construction must be one of {CONSTRUCTIONS}, got {construction!r}")
        opts = solve_options(power, h_max, truncation, seed=seed).resolved(mu)

        if construction == "tower":
            label, summary, u = await asyncio.to_thread(_tower, mu, arcs, opts.p, opts.h_max, opts.truncation)
        else:
            if pendant_length is None:
                raise ParameterError(f"The {construction} construction needs pendant_length")
            ell = float(pendant_length)
            if construction == "pendant":
                label, summary, u = await asyncio.to_thread(_pendant, mu, ell, opts.p, opts.h_max, opts.truncation)
            else:
                label, summary, u = await asyncio.to_thread(_gl, mu, ell, new_length, opts)

        response = {
            "success": True,
            "construction": construction,
            "label": label,
            "summary": summary,
        }
        if include_profile:
            response["profile"] = export_profile(u, f"{label}_competitor")
        return response

    except Exception as e:
        return failure("graph_competitor", e, [
            f"construction must be one of {', '.join(CONSTRUCTIONS)}",
            "gl needs pendant_length < new_length and a state peaked at the tip",
            "tower arcs must be positive",
        ])
