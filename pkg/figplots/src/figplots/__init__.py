"""Batch rendering of bound-comparison figures from sweep CSV tables."""

from .render import PlotError, PlotSpec, load_curve_table, main, render_bounds_figure

__all__ = ["PlotError", "PlotSpec", "load_curve_table", "main", "render_bounds_figure"]
