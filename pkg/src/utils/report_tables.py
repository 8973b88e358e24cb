# Report Tables - render command results as PrettyTable text, CSV or byte-stable JSON
# Main functions: render(), to_json(), to_csv(), to_table()
# Used by: commands/cli.py, scripts/verify_acceptance.py

import io
import json
import math
from fractions import Fraction
from typing import Dict, List, Optional

import pandas as pd
from prettytable import PrettyTable

from src.zariski_core.system import format_fraction


# ANSI color codes for terminal formatting
class Colors:
    BLUE = '\033[94m'
    CYAN = '\033[96m'
    GREEN = '\033[92m'
    RED = '\033[91m'
    BOLD = '\033[1m'
    END = '\033[0m'


def jsonable(value):
    """Fractions as "p/q", tuples as lists, non-finite reals as null"""
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "item"):
        return jsonable(value.item())
    return str(value)


def to_json(payload: Dict) -> str:
    """Key order follows the payload; floats use the shortest round-trip repr"""
    return json.dumps(jsonable(payload), ensure_ascii=False, allow_nan=False)


def to_csv(rows: List[Dict]) -> str:
    frame = pd.DataFrame([jsonable(row) for row in rows])
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue().rstrip("\n")


def format_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(format_cell(v) for v in value)
    if value is None:
        return "-"
    return str(value)


def format_flag(value: bool, color: bool = False) -> str:
    """Pass/fail cells: green when true, red when false"""
    if not color:
        return str(value)
    return f"{Colors.GREEN if value else Colors.RED}{value}{Colors.END}"


def _cell(value, color: bool) -> str:
    return format_flag(value, color) if isinstance(value, bool) else format_cell(value)


def header(title: str, color: bool = False) -> str:
    """A formatted header"""
    bar = "=" * 80
    lines = [bar, title.center(80), bar]
    if color:
        lines = [f"{Colors.BOLD}{Colors.BLUE}{line}{Colors.END}" for line in lines]
    return "\n".join(lines)


def section(title: str, color: bool = False) -> str:
    """A section header"""
    text = f"--- {title} ---"
    return f"{Colors.BOLD}{Colors.CYAN}{text}{Colors.END}" if color else text


def _scalars(payload: Dict) -> List[tuple]:
    return [(k, v) for k, v in payload.items() if not isinstance(v, (dict, list, tuple))]


def to_table(title: str, payload: Dict, rows: List[Dict], color: bool = False) -> str:
    """Summary table of the scalar payload entries, then the row table"""
    parts = [header(title, color)]

    summary = _scalars(payload)
    if summary:
        table = PrettyTable()
        table.field_names = ["Metric", "Value"]
        table.align["Metric"] = "l"
        table.align["Value"] = "r"
        for key, value in summary:
            table.add_row([key, _cell(value, color)])
        parts += [section("Summary", color), table.get_string()]

    if rows:
        columns = list(dict.fromkeys(k for row in rows for k in row))
        table = PrettyTable()
        table.field_names = columns
        for column in columns:
            table.align[column] = "r"
        for row in rows:
            table.add_row([_cell(row.get(column), color) for column in columns])
        parts += [section("Rows", color), table.get_string()]
    return "\n".join(parts)


def render(result, fmt: str, color: bool = False, title: Optional[str] = None) -> str:
    """
    Render a CommandResult

    Args:
        result: CommandResult from a command handler
        fmt: "json", "csv" or "table"
        color: ANSI colors in table headers
    """
    if fmt == "json":
        return to_json(result.payload)
    if fmt == "csv":
        return to_csv(result.rows or [dict(_scalars(result.payload))])
    return to_table(title or result.title or result.command, result.payload, result.rows, color)
