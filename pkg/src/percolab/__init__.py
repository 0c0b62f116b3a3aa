"""Bootstrap percolation on Z_m^d1 x K_n^d2."""

from percolab.engine import (
    Configuration,
    Region,
    RunStats,
    final_density,
    run_fast,
    run_naive,
    spans,
    step_sync,
)
from percolab.errors import (
    BoundaryError,
    BudgetError,
    DomainError,
    ParameterError,
    UnsupportedError,
)
from percolab.topology import GraphShape, RangeError, Site, degree, index_of, neighbors, site_of

__version__ = "0.1.0"

__all__ = [
    "BoundaryError",
    "BudgetError",
    "Configuration",
    "DomainError",
    "GraphShape",
    "ParameterError",
    "RangeError",
    "Region",
    "RunStats",
    "Site",
    "UnsupportedError",
    "degree",
    "final_density",
    "index_of",
    "neighbors",
    "run_fast",
    "run_naive",
    "site_of",
    "spans",
    "step_sync",
]
