"""
Line-based graph text format (UTF-8, '#' starts a comment):

    vertex <name>
    infinity <name>
    edge <name> <name> <length>
    halfline <name> <name>      # second name must be an infinity vertex
"""
import logging
from pathlib import Path
from typing import Union

from src.errors import GraphFormatError
from .metric_graph import GraphBuilder, MetricGraph

logger = logging.getLogger(__name__)


def parse_graph(text: str) -> MetricGraph:
    """Parse the text format into a MetricGraph (structure is not validated here)"""
    builder = GraphBuilder()
    infinity_names = set()

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        keyword, args = parts[0].lower(), parts[1:]

        try:
            if keyword == "vertex" and len(args) == 1:
                builder.add_vertex(args[0])
            elif keyword == "infinity" and len(args) == 1:
                builder.add_infinity(args[0])
                infinity_names.add(args[0])
            elif keyword == "edge" and len(args) == 3:
                try:
                    length = float(args[2])
                except ValueError:
                    raise GraphFormatError(f"invalid length {args[2]!r}", number, raw)
                builder.add_edge(args[0], args[1], length)
            elif keyword == "halfline" and len(args) == 2:
                if args[1] not in infinity_names:
                    raise GraphFormatError(f"{args[1]!r} is not an infinity vertex", number, raw)
                builder.add_halfline(args[0], args[1])
            else:
                raise GraphFormatError(f"unrecognised statement {keyword!r} with {len(args)} argument(s)", number, raw)
        except GraphFormatError:
            raise
        except ValueError as e:
            raise GraphFormatError(str(e), number, raw) from e

    return builder.build()


def serialize_graph(g: MetricGraph) -> str:
    """Exact inverse of parse_graph: lengths are written with repr() so floats round-trip"""
    lines = []
    for v in g.vertices:
        lines.append(f"{'infinity' if v.at_infinity else 'vertex'} {v.name}")
    for e in g.edges:
        a, b = g.vertices[e.tail].name, g.vertices[e.head].name
        if e.is_halfline:
            lines.append(f"halfline {a} {b}")
        else:
            lines.append(f"edge {a} {b} {e.length!r}")
    return "\n".join(lines) + "\n"


def load_graph(path: Union[str, Path]) -> MetricGraph:
    path = Path(path)
    logger.debug(f"Loading graph from {path}")
    return parse_graph(path.read_text(encoding="utf-8"))


def dump_graph(g: MetricGraph, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(serialize_graph(g), encoding="utf-8")
    return path
