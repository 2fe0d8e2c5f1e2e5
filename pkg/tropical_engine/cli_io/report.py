"""
Rendering of command reports as JSON or text.
"""
from typing import Any, List

from tropical_engine.cli_io.schemas import Report
from tropical_engine.utils.file_utils import to_json_text


def render_json(report: Report) -> str:
    return to_json_text(report.model_dump())


def _lines(value: Any, indent: int) -> List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        out = []
        for key in sorted(value, key=str):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                out.append(f"{pad}{key}:")
                out.extend(_lines(item, indent + 1))
            else:
                out.append(f"{pad}{key}: {_scalar(item)}")
        return out
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return [pad + ", ".join(_scalar(v) for v in value)]
        out = []
        for item in value:
            out.append(f"{pad}-")
            out.extend(_lines(item, indent + 1))
        return out
    return [pad + _scalar(value)]


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (dict, list)):
        return "{}" if isinstance(value, dict) else "[]"
    return str(value)


def render_text(report: Report) -> str:
    lines = [f"command: {report.command}", f"status: {report.status} (exit {report.exit_code})"]
    if report.results:
        lines.append("results:")
        lines.extend(_lines(report.results, 1))
    if report.provenance:
        lines.append("provenance:")
        lines.extend(_lines(report.provenance, 1))
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str = "text") -> str:
    return render_json(report) if fmt == "json" else render_text(report)
