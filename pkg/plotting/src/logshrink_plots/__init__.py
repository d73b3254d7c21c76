"""Figure rendering for logshrink benchmark CSVs."""

from .render import FigureSpec, render

__version__ = "0.1.0"
