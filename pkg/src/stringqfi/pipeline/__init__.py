from __future__ import annotations

from stringqfi.pipeline.api import FIGURES, FigureSpec, figure_maxima, run_figure

__all__ = ["FIGURES", "FigureSpec", "figure_maxima", "run_figure"]
