"""Rendering companion for qi-cd-eval CSV output.

This package never computes physics quantities; it parses the CSV
dialect emitted by the evaluation CLI and renders deterministic figures.
"""

__version__ = "0.1.0"

from .csvio import CsvFormatError, MissingColumnError, Table, read_table
from .recipes import RECIPES, FigureRecipe
from .render import render
from .style import PLOT_FLOOR, SERIES_STYLES, STYLE_VERSION

__all__ = [
    "CsvFormatError",
    "FigureRecipe",
    "MissingColumnError",
    "PLOT_FLOOR",
    "RECIPES",
    "SERIES_STYLES",
    "STYLE_VERSION",
    "Table",
    "read_table",
    "render",
]
