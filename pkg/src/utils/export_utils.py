"""
Export utilities for reports and CSV profiles.

All numbers are written with 12 significant digits through %-formatting,
which does not depend on the locale, so repeated runs give identical bytes.
"""
import io
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union
import logging

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


def format_number(value: Any) -> str:
    """Deterministic text for a report value"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if value == 0.0:
            value = 0.0   # drop the sign of -0.0
        return FLOAT_FORMAT % value
    if value is None:
        return ""
    return str(value)


def format_report(report: Dict[str, Any], prefix: str = "") -> str:
    """
    Flatten a (nested) result dictionary into `key: value` lines. Nested
    keys are joined with dots; lists of scalars are comma separated.
    """
    lines: List[str] = []
    for key, value in report.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            nested = format_report(value, prefix=f"{name}.")
            if nested:
                lines.append(nested.rstrip("\n"))
        elif isinstance(value, (list, tuple)):
            if all(not isinstance(v, (dict, list, tuple)) for v in value):
                lines.append(f"{name}: {', '.join(format_number(v) for v in value)}")
            else:
                for i, item in enumerate(value):
                    if isinstance(item, dict):
                        lines.append(format_report(item, prefix=f"{name}.{i}.").rstrip("\n"))
                    else:
                        lines.append(f"{name}.{i}: {format_number(item)}")
        else:
            lines.append(f"{name}: {format_number(value)}")
    return "\n".join(line for line in lines if line) + "\n"


def export_to_csv(
    data: Iterable[Dict[str, Any]],
    filename_prefix: str = "export",
    columns: Optional[Sequence[str]] = None
) -> Dict[str, Any]:
    """
    Export rows to CSV text

    Args:
        data: Rows as dictionaries
        filename_prefix: File name without extension
        columns: Column order (defaults to the keys of the first row)

    Returns:
        Dict containing export information
    """
    try:
        rows = list(data)
        df = pd.DataFrame(rows, columns=list(columns) if columns else None)
        csv_buffer = io.StringIO()
        df.to_csv(csv_buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        csv_content = csv_buffer.getvalue()

        return {
            "success": True,
            "format": "csv",
            "data": csv_content,
            "filename": f"{filename_prefix}.csv",
            "size_bytes": len(csv_content.encode('utf-8')),
            "row_count": len(rows)
        }

    except Exception as e:
        logger.error(f"CSV export failed: {e}")
        return {
            "success": False,
            "error": f"CSV export failed: {str(e)}"
        }


def write_export(export_result: Dict[str, Any], output_dir: Union[str, Path]) -> Path:
    """Write an export result produced above to `output_dir`"""
    if not export_result.get("success"):
        raise ValueError(export_result.get("error", "Export failed"))
    directory = Path(output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / export_result["filename"]
    path.write_text(export_result["data"], encoding="utf-8", newline="")
    logger.info(f"Wrote {export_result['row_count']} rows to {path}")
    return path
