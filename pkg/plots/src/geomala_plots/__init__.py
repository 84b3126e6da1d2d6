"""Offline figure rendering for geomala trace CSVs and report JSONs."""

from .render import plot_acf, plot_compare, plot_trace, plot_tuning, sample_acf
from .schemas import SchemaError, TraceData, read_summary, read_trace, read_tuning

__version__ = "0.1.0"

__all__ = [
    "SchemaError", "TraceData", "plot_acf", "plot_compare", "plot_trace",
    "plot_tuning", "read_summary", "read_trace", "read_tuning", "sample_acf",
]
