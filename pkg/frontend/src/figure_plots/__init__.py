"""Render the smoother-study figures from their CSV tables.

Strictly a presentation layer: every number comes out of the CSVs produced
by the `rpsmooth` experiments; nothing is recomputed here.
"""

from .render import (
    FIGURES,
    EmptyInput,
    FigureSpec,
    MissingColumn,
    build_figure,
    discover_figures,
    render,
)

__version__ = "0.1.0"
