"""
Configuration settings for the NLS graph ground-state toolkit
"""
import os
from pathlib import Path
from typing import Optional, Dict, Any
from dotenv import load_dotenv
from .mcp_config import get_config, MCPConfigAdapter

# Load environment variables (for development)
load_dotenv()

import logging
logger = logging.getLogger(__name__)

def _as_bool(value: Optional[str]) -> bool:
    return str(value).strip().lower() in ("1", "true", "yes", "on")

class Settings:
    """Application settings from environment variables"""

    # Output
    OUTPUT_DIR: str = "."

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None

    # Problem defaults
    DEFAULT_POWER: float = 4.0
    MESH_RESOLUTION: float = 0.1      # h_max * mu
    TRUNCATION_SCALE: float = 80.0    # L_inf * mu

    # Solver
    TOL_GRAD: float = 1e-6
    MAX_ITERS: int = 3000
    TOL_LEVEL_FLOOR: float = 1e-7     # relative to |reference level|
    RUNAWAY_THRESHOLD: float = 0.5
    SOLVER_WORKERS: int = 1
    DEFAULT_SEED: int = 0

    # Development
    DEBUG: bool = False

    @classmethod
    def refresh(cls) -> None:
        """(Re)read every setting from MCP config / environment"""
        cls.OUTPUT_DIR = get_config("OUTPUT_DIR", ".")
        cls.LOG_LEVEL = get_config("LOG_LEVEL", "INFO").upper()
        cls.LOG_FILE = get_config("LOG_FILE")
        cls.DEFAULT_POWER = MCPConfigAdapter.get_float("DEFAULT_POWER", 4.0)
        cls.MESH_RESOLUTION = MCPConfigAdapter.get_float("MESH_RESOLUTION", 0.1)
        cls.TRUNCATION_SCALE = MCPConfigAdapter.get_float("TRUNCATION_SCALE", 80.0)
        cls.TOL_GRAD = MCPConfigAdapter.get_float("TOL_GRAD", 1e-6)
        cls.MAX_ITERS = MCPConfigAdapter.get_int("MAX_ITERS", 3000)
        cls.TOL_LEVEL_FLOOR = MCPConfigAdapter.get_float("TOL_LEVEL_FLOOR", 1e-7)
        cls.RUNAWAY_THRESHOLD = MCPConfigAdapter.get_float("RUNAWAY_THRESHOLD", 0.5)
        cls.SOLVER_WORKERS = MCPConfigAdapter.get_int("SOLVER_WORKERS", 1)
        cls.DEFAULT_SEED = MCPConfigAdapter.get_int("DEFAULT_SEED", 0)
        cls.DEBUG = _as_bool(get_config("DEBUG", "false"))

    @classmethod
    def output_path(cls, name: str, output_dir: Optional[str] = None) -> Path:
        """Resolve an output file name against the configured directory"""
        directory = Path(output_dir or cls.OUTPUT_DIR)
        directory.mkdir(parents=True, exist_ok=True)
        return directory / name

    @classmethod
    def validate_config(cls) -> Dict[str, Any]:
        """Validate configuration and return status"""
        errors = []
        warnings = []

        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"Unknown LOG_LEVEL: {cls.LOG_LEVEL}")

        if not 2.0 < cls.DEFAULT_POWER < 6.0:
            errors.append(f"DEFAULT_POWER must lie in (2, 6), got {cls.DEFAULT_POWER}")
        if cls.MESH_RESOLUTION <= 0:
            errors.append("MESH_RESOLUTION must be positive")
        if cls.TRUNCATION_SCALE <= 0:
            errors.append("TRUNCATION_SCALE must be positive")
        if cls.TOL_GRAD <= 0 or cls.TOL_LEVEL_FLOOR <= 0:
            errors.append("Solver tolerances must be positive")
        if cls.MAX_ITERS < 1:
            errors.append("MAX_ITERS must be at least 1")
        if not 0.0 < cls.RUNAWAY_THRESHOLD <= 1.0:
            errors.append("RUNAWAY_THRESHOLD must lie in (0, 1]")
        if cls.SOLVER_WORKERS < 1:
            errors.append("SOLVER_WORKERS must be at least 1")

        if cls.TRUNCATION_SCALE < 20:
            warnings.append("TRUNCATION_SCALE below 20: soliton tails are cut noticeably")
        if cls.MESH_RESOLUTION > 0.5:
            warnings.append("MESH_RESOLUTION above 0.5: energies carry visible mesh error")
        if cls.OUTPUT_DIR and not os.path.isdir(cls.OUTPUT_DIR):
            warnings.append(f"Output directory {cls.OUTPUT_DIR} does not exist yet; it will be created")
        if cls.DEBUG:
            warnings.append("DEBUG mode is enabled")

        return {
            "valid": len(errors) == 0,
            "errors": errors,
            "warnings": warnings,
            "config": {
                "output_dir": cls.OUTPUT_DIR,
                "default_power": cls.DEFAULT_POWER,
                "mesh_resolution": cls.MESH_RESOLUTION,
                "truncation_scale": cls.TRUNCATION_SCALE,
                "tol_grad": cls.TOL_GRAD,
                "max_iters": cls.MAX_ITERS,
                "solver_workers": cls.SOLVER_WORKERS,
                "debug": cls.DEBUG,
                "config_source": MCPConfigAdapter.get_config_source()
            }
        }

Settings.refresh()

# Create singleton instance
settings = Settings()

logger.debug(f"Settings initialized - p: {settings.DEFAULT_POWER}, h*mu: {settings.MESH_RESOLUTION}, L*mu: {settings.TRUNCATION_SCALE}")
