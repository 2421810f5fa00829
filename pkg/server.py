#!/usr/bin/env python3
"""
NLS Graph MCP Server - Main entry point
Exposes ground-state analysis of the nonlinear Schroedinger energy on
metric graphs as MCP tools
"""
import logging
import os
import sys
from pathlib import Path
from typing import Dict, Any, Optional, List

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from fastmcp import FastMCP
from src.config.settings import settings
from src.utils.logging_setup import configure_logging
from src.tools import graph_check, graph_levels, graph_minimize, graph_classify
from src.tools import graph_competitor, graph_critical_length, graph_limit_table

# Configure logging (stderr only; stdout belongs to the MCP transport)
configure_logging()

logger = logging.getLogger(__name__)

# Create FastMCP server instance
mcp = FastMCP("NLS Graph MCP Server")

# Log startup mode
if any(key.startswith("NLSGRAPH_") for key in os.environ):
    logger.info("Running under MCP with configuration from the client")
else:
    logger.info("Running in development mode, using .env file")

# Register tools
@mcp.tool(name="graph_check", description="Validate a metric graph and report Assumption (H) and the bubble-tower flag")
async def handle_graph_check(graph: str, pendant_length: Optional[float] = None) -> Dict[str, Any]:
    """
    Validate a metric graph and report its topology.

    Args:
        graph: Graph text, a bundled graph name, `gl` or a path to a graph file
        pendant_length: Pendant length for the `gl` family
    """
    return await graph_check(graph=graph, pendant_length=pendant_length)

@mcp.tool(name="graph_levels", description="Closed-form line, half-line and star stationary energy levels at a given mass")
async def handle_graph_levels(mass: float, power: Optional[float] = None) -> Dict[str, Any]:
    """
    Reference levels at a given mass.

    Args:
        mass: Mass mu > 0
        power: Nonlinearity power p in (2, 6)
    """
    return await graph_levels(mass=mass, power=power)

@mcp.tool(name="graph_minimize", description="Minimize the NLS energy at fixed mass on a metric graph and return the best state")
async def handle_graph_minimize(
    graph: str,
    mass: float,
    power: Optional[float] = None,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    tol_grad: Optional[float] = None,
    max_iters: Optional[int] = None,
    starts: Optional[List[str]] = None,
    seed: Optional[int] = None,
    pendant_length: Optional[float] = None,
    include_profile: bool = False
) -> Dict[str, Any]:
    """
    Minimize the energy at fixed mass.

    Args:
        graph: Graph text, bundled name, `gl` or file path
        mass: Mass mu > 0
        power: Nonlinearity power p in (2, 6)
        h_max: Mesh spacing
        truncation: Half-line truncation length
        tol_grad: Relative projected-gradient tolerance
        max_iters: Iteration cap per start
        starts: Start names
        seed: Seed of the random start
        pendant_length: Pendant length for the `gl` family
        include_profile: Attach the best state as CSV
    """
    return await graph_minimize(
        graph=graph, mass=mass, power=power, h_max=h_max, truncation=truncation,
        tol_grad=tol_grad, max_iters=max_iters, starts=starts, seed=seed,
        pendant_length=pendant_length, include_profile=include_profile
    )

@mcp.tool(name="graph_classify", description="Classify existence of an NLS ground state (EXISTS / LIKELY_NONEXISTENT / INCONCLUSIVE)")
async def handle_graph_classify(
    graph: str,
    mass: float,
    power: Optional[float] = None,
    h_max: Optional[float] = None,
    truncation: Optional[float] = None,
    tol_level: Optional[float] = None,
    reference: Optional[str] = None,
    seed: Optional[int] = None,
    pendant_length: Optional[float] = None,
    include_profile: bool = False
) -> Dict[str, Any]:
    """
    Existence verdict by comparison with the line soliton level.

    Args:
        graph: Graph text, bundled name, `gl` or file path
        mass: Mass mu > 0
        power: Nonlinearity power p in (2, 6)
        h_max: Mesh spacing
        truncation: Half-line truncation length
        tol_level: Comparison slack (calibrated when omitted)
        reference: "exact" or "discrete"
        seed: Seed of the random start
        pendant_length: Pendant length for the `gl` family
        include_profile: Attach the certificate as CSV
    """
    return await graph_classify(
        graph=graph, mass=mass, power=power, h_max=h_max, truncation=truncation,
        tol_level=tol_level, seed=seed, reference=reference,
        pendant_length=pendant_length, include_profile=include_profile
    )

@mcp.tool(name="graph_competitor", description="Build a cut-and-paste competitor (pendant, pendant lengthening, bubble tower) and evaluate it")
async def handle_graph_competitor(
    construction: str,
    mass: float,
    pendant_length: Optional[float] = None,
    new_length: Optional[float] = None,
    arcs: Optional[List[float]] = None,
    power: Optional[float] = None,
    include_profile: bool = False
) -> Dict[str, Any]:
    """
    Surgery competitor.

    Args:
        construction: "pendant", "gl" or "tower"
        mass: Mass mu > 0
        pendant_length: Pendant length (pendant, gl)
        new_length: Target pendant length (gl)
        arcs: Bubble arc lengths (tower)
        power: Nonlinearity power p in (2, 6)
        include_profile: Attach the competitor as CSV
    """
    return await graph_competitor(
        construction=construction, mass=mass, pendant_length=pendant_length,
        new_length=new_length, arcs=arcs, power=power, include_profile=include_profile
    )

@mcp.tool(name="graph_critical_length", description="Bisection for the critical pendant length of three half-lines plus a pendant")
async def handle_graph_critical_length(
    mass: float,
    width: Optional[float] = None,
    ell_low: Optional[float] = None,
    ell_high: Optional[float] = None,
    pendant_length: Optional[float] = None
) -> Dict[str, Any]:
    """
    Critical pendant length at the given mass.

    Args:
        mass: Mass mu > 0
        width: Final bracket width
        ell_low: Lower end of the initial bracket
        ell_high: Upper end of the initial bracket
        pendant_length: Also report the critical mass at this length
    """
    return await graph_critical_length(
        mass=mass, width=width, ell_low=ell_low, ell_high=ell_high, pendant_length=pendant_length
    )

@mcp.tool(name="graph_limit_table", description="Ground-state energies on three half-lines plus a pendant as the pendant grows")
async def handle_graph_limit_table(mass: float, lengths: Optional[List[float]] = None) -> Dict[str, Any]:
    """
    Energies for increasing pendant length.

    Args:
        mass: Mass mu > 0
        lengths: Strictly increasing pendant lengths
    """
    return await graph_limit_table(mass=mass, lengths=lengths)

def initialize_server():
    """Validate configuration before serving"""
    logger.info("Initializing NLS Graph MCP Server...")

    config_status = settings.validate_config()

    if not config_status['valid']:
        logger.error("Configuration errors found:")
        for error in config_status['errors']:
            logger.error(f"  - {error}")
        sys.exit(1)

    if config_status['warnings']:
        for warning in config_status['warnings']:
            logger.warning(f"Configuration warning: {warning}")

    logger.info(f"Configuration valid. Default power {settings.DEFAULT_POWER}, output dir {settings.OUTPUT_DIR}")
    logger.info("NLS Graph MCP Server ready!")

def main():
    """Main entry point"""
    try:
        initialize_server()

        logger.info("Starting MCP server...")
        mcp.run()

    except KeyboardInterrupt:
        logger.info("Server stopped by user")
    except Exception as e:
        logger.error(f"Server error: {e}", exc_info=True)
        sys.exit(1)

if __name__ == "__main__":
    main()
