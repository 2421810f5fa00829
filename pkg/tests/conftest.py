"""
Shared fixtures: coarse solver options, meshes of the catalogue graphs,
and isolated configuration.
"""
import pytest

from src.config.mcp_config import MCPConfigAdapter
from src.config.settings import Settings
from src.discretize.mesh import build_mesh
from src.graphs import catalog
from src.ground_states.minimize import SolveOptions


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Every test sees default settings and writes into its own directory"""
    MCPConfigAdapter.reset()
    monkeypatch.setenv("NLSGRAPH_OUTPUT_DIR", str(tmp_path / "out"))
    for key in ("LOG_FILE", "DEFAULT_POWER", "MESH_RESOLUTION", "TRUNCATION_SCALE", "TOL_GRAD",
                "MAX_ITERS", "TOL_LEVEL_FLOOR", "RUNAWAY_THRESHOLD", "SOLVER_WORKERS", "DEFAULT_SEED"):
        monkeypatch.delenv(key, raising=False)
    Settings.refresh()
    yield
    MCPConfigAdapter.reset()
    Settings.refresh()


@pytest.fixture
def coarse():
    """Options fast enough for the quick suite"""
    return SolveOptions(h_max=0.2, truncation=40.0, max_iters=2000)


@pytest.fixture
def line_mesh():
    return build_mesh(catalog.line(), 0.05, 60.0)


@pytest.fixture
def star3_mesh():
    return build_mesh(catalog.star(3), 0.01, 100.0)


@pytest.fixture
def segment_graph():
    from src.graphs.metric_graph import GraphBuilder

    b = GraphBuilder()
    b.add_vertex("a")
    b.add_vertex("b")
    b.add_edge("a", "b", 3.0)
    return b.build()
