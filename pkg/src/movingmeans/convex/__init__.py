"""Convex functions of one variable on a uniform grid."""

from .averages import (
    EpiAvgRun,
    ProxAvgRun,
    ProxAvgState,
    check_cofinite,
    epi_converged,
    moving_epi_average,
    moving_proximal_average,
    proximal_average,
    sup_distance,
)
from .conjugate import epi_scale, fenchel_conjugate, moreau_envelope, proximal_point
from .grid import (
    DEFAULT_HI,
    DEFAULT_LO,
    DEFAULT_N,
    GridFunction,
    absolute,
    from_callable,
    grid_points,
    indicator_interval,
    indicator_point,
    quadratic,
    zero,
)

__all__ = [
    "DEFAULT_HI",
    "DEFAULT_LO",
    "DEFAULT_N",
    "EpiAvgRun",
    "GridFunction",
    "ProxAvgRun",
    "ProxAvgState",
    "absolute",
    "check_cofinite",
    "epi_converged",
    "epi_scale",
    "fenchel_conjugate",
    "from_callable",
    "grid_points",
    "indicator_interval",
    "indicator_point",
    "moreau_envelope",
    "moving_epi_average",
    "moving_proximal_average",
    "proximal_average",
    "proximal_point",
    "quadratic",
    "sup_distance",
    "zero",
]
