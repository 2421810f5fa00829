"""
Profile CSV rows: `edge_id, arclength, value`, ordered by edge id and
then arclength.
"""
from typing import Any, Dict, List

from src.utils.export_utils import export_to_csv
from .mesh import GraphFunction

PROFILE_COLUMNS = ("edge_id", "arclength", "value")


def profile_rows(u: GraphFunction) -> List[Dict[str, Any]]:
    rows = []
    for em in u.mesh.edges:
        for x, value in zip(em.positions, u.values[em.nodes]):
            rows.append({"edge_id": em.edge, "arclength": float(x), "value": float(value)})
    return rows


def export_profile(u: GraphFunction, filename_prefix: str = "profile") -> Dict[str, Any]:
    return export_to_csv(profile_rows(u), filename_prefix, PROFILE_COLUMNS)
