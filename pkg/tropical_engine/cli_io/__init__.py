"""
Input/output surface: JSON schemas, load/save, report rendering and the command dispatcher.
"""
from tropical_engine.cli_io.commands import build_parser, run_and_render, run_command
from tropical_engine.cli_io.schemas import Report
from tropical_engine.cli_io.serialize import load, save, to_dict

__all__ = ["Report", "build_parser", "load", "run_and_render", "run_command", "save", "to_dict"]
