"""Command line entry point and its JSON/CSV/SVG plumbing."""
from .emit import csv_text, emit_csv, emit_svg, format_value, svg_text
from .main import EXIT_INVALID, EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, build_parser, main, run

__all__ = ["main", "run", "build_parser", "emit_csv", "emit_svg", "csv_text", "svg_text",
           "format_value", "EXIT_OK", "EXIT_INVALID", "EXIT_TOLERANCE", "EXIT_USAGE"]
