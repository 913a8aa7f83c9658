"""Weighted moving averages: explicit limits, iteration matrices, circulant
limits, Kolmogorov and matrix means, and moving averages of convex
functions."""

from .circulant import CirculantSpec, build_circulant, krafft_limit
from .companion import build_companion, companion_limit, eigenvector_identities, is_diagonal_point
from .errors import *  # noqa: F401,F403
from .gauss_seidel import (
    build_T,
    build_Tk,
    closed_form_companion_power,
    closed_form_partial,
    closed_form_T_special,
    shift_identities,
    shift_matrices,
    special_weights,
    t_limit,
)
from .kolmogorov import builtin_generator, custom_generator, iterate_kolmogorov, kolmogorov_limit, kolmogorov_step
from .matrix_means import moving_matrix_mean, spd_inverse
from .recurrence import RecurrenceState, iterate_until, step
from .spectral import characteristic_polynomial, power_limit, rank_one_limit, roots
from .weights import Weights, check_basic_hypothesis, cumulative, limit_functional, new_weights

__version__ = "0.1.0"
