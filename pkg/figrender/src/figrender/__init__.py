"""Figure rendering for exceptional-gap proportion series.

Consumes a series.csv with columns N, proportion, proportion_times_logN
and renders the proportion curve (log-scaled N axis) and the
proportion-times-log-N curve with its conjectural reference band.
"""

__version__ = "1.0.0"

from .render import SchemaError, SeriesRow, load_series, render

__all__ = ["SchemaError", "SeriesRow", "load_series", "render", "__version__"]
