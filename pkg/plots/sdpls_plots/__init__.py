"""Figure scripts for the level set solver's CSV outputs.

Reads the solver's timeseries/reference/convergence CSV files and renders
paper-style figures: per-quantity time series with a dashed oracle overlay,
and log-log mesh studies with a slope-1 guide line. Purely a consumer of
the CSV interfaces; the solver package is never imported.
"""

from .figures import PlotSpec, QUANTITIES, plot_convergence, plot_timeseries
from .io import SchemaError, read_table

__all__ = [
    "PlotSpec",
    "QUANTITIES",
    "plot_convergence",
    "plot_timeseries",
    "SchemaError",
    "read_table",
]
