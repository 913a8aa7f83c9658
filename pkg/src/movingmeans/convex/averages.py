"""Proximal and epi-averages of convex grid functions and their moving
versions.

The proximal average of ``g_1, ..., g_m`` with weights ``w`` is
``(sum_k w_k (g_k + q)*)* - q``; its Moreau envelope is the ``w``-average of
the envelopes.  The epi-average is the infimal convolution of epi-scaled
functions; its conjugate is the ``w``-average of the conjugates, so the
moving epi-average is an ordinary moving average of conjugates.
Convergence of both is certified through Moreau envelopes.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    EnvelopeRecursionError,
    GridMismatchError,
    HypothesisFailsError,
    NotCofiniteError,
    SumNotOneError,
    DimensionMismatchError,
    NegativeWeightError,
)
from ..recurrence import RecurrenceState, step
from ..weights import Weights, check_basic_hypothesis, cumulative
from .conjugate import conjugate_with_argmax, moreau_envelope
from .grid import GridFunction, grid_points, require_common_grid

PROB_TOL = 1e-12
GENERIC_RESIDUAL_TOL = 1e-3


def _probabilities(w, m):
    p = w.as_float() if isinstance(w, Weights) else np.asarray(w, dtype=float)
    if p.shape != (m,):
        raise DimensionMismatchError(f"{p.size} weights for {m} functions")
    if np.any(p < 0):
        raise NegativeWeightError("weights must be nonnegative")
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise SumNotOneError(float(p.sum()), float(p.sum() - 1.0))
    return p


def _slope_range(g, extra=1.0):
    # subgradients of g + extra*q at the domain ends, read from the interpolant
    ip = g.interpolant
    a, b = ip.y[0], ip.y[-1]
    if ip.segments == 0:
        return extra * a, extra * b
    return ip.left[0] + extra * a, ip.right[-1] + extra * b


def _prox_breakpoints(g):
    # slopes s where the maximizer of s*y - (g + q)(y) changes regime
    ip = g.interpolant
    if ip.segments == 0:
        return np.empty(0)
    return np.column_stack([ip.left + ip.y[:-1], ip.right + ip.y[1:]]).reshape(-1)


def _exact_outer(p, gs, x):
    """``(sum_k p_k (g_k + q)*)*`` at ``x`` without sampling the inner sum.

    Each ``(g_k + q)*`` is piecewise quadratic with gradient ``y_k(s)``, the
    proximal point, which is piecewise linear in ``s`` with known kinks.
    The outer supremum is attained where ``Y(s) = sum_k p_k y_k(s)`` equals
    ``x``; ``Y`` is inverted exactly between the merged kinks.
    """
    active = [(pk, g) for pk, g in zip(p, gs) if pk > 0]
    ends = [_slope_range(g) for _, g in active]
    outer = [min(e[0] for e in ends) - 1.0, max(e[1] for e in ends) + 1.0]
    kinks = np.unique(np.concatenate([_prox_breakpoints(g) for _, g in active] + [outer]))

    def Y(s):
        out = np.zeros_like(s)
        for pk, g in active:
            out = out + pk * conjugate_with_argmax(g.interpolant, s, extra=1.0)[1]
        return out

    def phi(s):
        out = np.zeros_like(s)
        for pk, g in active:
            out = out + pk * conjugate_with_argmax(g.interpolant, s, extra=1.0)[0]
        return out

    yk = np.maximum.accumulate(Y(kinks))
    # past the outermost kinks Y is affine: constant at a closed end,
    # increasing along the continuation of an open one
    slope_l = (yk[1] - yk[0]) / (kinks[1] - kinks[0])
    slope_r = (yk[-1] - yk[-2]) / (kinks[-1] - kinks[-2])
    j = np.searchsorted(yk, x, side="left")
    jj = np.clip(j, 1, len(kinks) - 1)
    y0, y1 = yk[jj - 1], yk[jj]
    s0, s1 = kinks[jj - 1], kinks[jj]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(y1 > y0, (x - y0) / (y1 - y0), 1.0)
        s = s0 + np.clip(t, 0.0, 1.0) * (s1 - s0)
        s = np.where(j == 0, kinks[0] + (np.minimum(x - yk[0], 0.0) / slope_l if slope_l > 0 else 0.0), s)
        s = np.where(j >= len(kinks), kinks[-1] + (np.maximum(x - yk[-1], 0.0) / slope_r if slope_r > 0 else 0.0), s)
    vals = s * x - phi(s)
    slack = 1e-9 * max(1.0, float(np.max(np.abs(x))))
    outside = np.zeros(x.shape, dtype=bool)
    if slope_l <= 0:
        outside |= x < yk[0] - slack
    if slope_r <= 0:
        outside |= x > yk[-1] + slack
    vals[outside] = np.inf
    return vals


def proximal_average(w, gs, method="exact", dual=None):
    """``(sum_k w_k (g_k + q)*)* - q`` on the common grid of ``gs``.

    Parameters
    ----------
    w : Weights or sequence of float
        Probability vector, one weight per function.
    gs : sequence of GridFunction
    method : {"exact", "sampled"}
        ``"exact"`` conjugates the interpolants in closed form and inverts
        the averaged proximal map; ``"sampled"`` samples the inner sum on a
        dual grid and conjugates the samples.
    dual : (lo, hi, n), optional
        Dual grid for ``"sampled"``.  By default it spans every slope of
        every ``g_k + q`` (domain-end subgradients included), so the outer
        conjugate is never truncated, with as many points as the primal grid.

    Grid points outside ``sum_k w_k dom g_k`` are ``+inf`` in the result.
    """
    gs = list(gs)
    p = _probabilities(w, len(gs))
    lo, hi, n = require_common_grid(gs)
    x = grid_points(lo, hi, n)
    if method == "exact":
        vals = _exact_outer(p, gs, x) - 0.5 * x * x
        return GridFunction(lo, hi, vals, check_convex=False)
    if method != "sampled":
        raise ValueError(f"unknown method {method!r}")
    if dual is None:
        ranges = [_slope_range(g) for g in gs]
        dual = (min(r[0] for r in ranges), max(r[1] for r in ranges), n)
    s = grid_points(*dual)
    phi = np.zeros_like(s)
    for pk, g in zip(p, gs):
        if pk == 0:
            continue
        vals, _ = conjugate_with_argmax(g.interpolant, s, extra=1.0)
        phi = phi + pk * vals
    outer = GridFunction(dual[0], dual[1], phi, check_convex=False)
    vals, _ = conjugate_with_argmax(outer.interpolant, x)
    vals = vals - 0.5 * x * x
    dom_lo = sum(pk * g.domain[0] for pk, g in zip(p, gs) if pk > 0)
    dom_hi = sum(pk * g.domain[1] for pk, g in zip(p, gs) if pk > 0)
    slack = 1e-9 * max(1.0, abs(lo), abs(hi))
    vals[(x < dom_lo - slack) | (x > dom_hi + slack)] = np.inf
    return GridFunction(lo, hi, vals, check_convex=False)


def sup_distance(u, v, mask=None):
    """Largest ``|u - v|`` over grid points where both are finite."""
    a, b = np.asarray(u), np.asarray(v)
    ok = np.isfinite(a) & np.isfinite(b)
    if mask is not None:
        ok &= mask
    return float(np.max(np.abs(a[ok] - b[ok]), initial=0.0))


@dataclass
class ProxAvgState:
    """Window of the ``m`` most recent functions, oldest first."""

    window: list
    weights: Weights
    step_count: int = 0

    def __post_init__(self):
        self.window = list(self.window)
        if len(self.window) != self.weights.m:
            raise DimensionMismatchError(
                f"{len(self.window)} functions for {self.weights.m} weights"
            )
        require_common_grid(self.window)


@dataclass
class ProxAvgRun:
    iterates: list
    envelope_residuals: list
    limit: GridFunction | None
    hypothesis_holds: bool
    envelopes: list = field(default_factory=list, repr=False)


def moving_proximal_average(state, steps, residual_tol=GENERIC_RESIDUAL_TOL, method="exact"):
    """Run ``steps`` terms of the moving proximal average.

    Each new term is checked against the envelope recursion
    ``env(g_n) = sum_i alpha_i env(g_{n-m+i})``; a sup-norm residual above
    ``residual_tol`` raises :class:`EnvelopeRecursionError` (pass ``None``
    to only record it).  The limit ``(sum_k lambda_k (g_k + q)*)* - q`` of
    the starting window is returned when the weights satisfy the gcd
    criterion and is ``None`` otherwise; the iteration runs either way.
    """
    w = state.weights
    alphas = w.as_float()
    holds = check_basic_hypothesis(w).holds
    limit = None
    if holds:
        lam = np.array([float(v) for v in cumulative(w).lam])
        limit = proximal_average(lam, state.window, method)
    envs = [moreau_envelope(g).values for g in state.window]
    iterates, residuals, out_envs = [], [], []
    for _ in range(steps):
        g = proximal_average(alphas, state.window, method)
        env = moreau_envelope(g).values
        expected = sum(a * e for a, e in zip(alphas, envs))
        res = sup_distance(env, expected)
        if residual_tol is not None and res > residual_tol:
            raise EnvelopeRecursionError(
                f"step {state.step_count + 1}: envelope residual {res:.3e} exceeds {residual_tol:.1e}"
            )
        state.window = state.window[1:] + [g]
        envs = envs[1:] + [env]
        state.step_count += 1
        iterates.append(g)
        residuals.append(res)
        out_envs.append(env)
    return ProxAvgRun(iterates, residuals, limit, holds, out_envs)


def check_cofinite(g, dual_lo, dual_hi, dual_n):
    """Conjugate of ``g`` on the dual grid, after checking cofiniteness.

    A cofinite function has a conjugate that is finite everywhere.  On the
    grid this means the conjugate is finite at every dual point and ``g``
    grows faster than linearly past each open end, i.e. the end piece has
    positive curvature; a linear end piece makes the conjugate ``+inf``
    beyond its slope.  A bounded domain is always fine.
    """
    s = grid_points(dual_lo, dual_hi, dual_n)
    ip = g.interpolant
    vals, _ = conjugate_with_argmax(ip, s)
    if not np.all(np.isfinite(vals)):
        k = int(np.argmax(~np.isfinite(vals)))
        raise NotCofiniteError(f"conjugate is +inf at dual point {s[k]:.6g}")
    scale = max(1.0, float(np.max(np.abs(ip.kappa), initial=0.0)))
    for side, is_open, curv in (("left", ip.open_left, ip.kappa[:1]),
                                ("right", ip.open_right, ip.kappa[-1:])):
        if is_open and curv.size and curv[0] <= 1e-9 * scale:
            raise NotCofiniteError(
                f"function grows only linearly past the {side} end of the grid; "
                "its conjugate is +inf beyond the end slope"
            )
    return GridFunction(dual_lo, dual_hi, vals, check_convex=False)


@dataclass
class EpiAvgRun:
    """Moving epi-average computed on conjugates.

    ``conjugates`` holds the value vectors of ``g_n*`` on the dual grid,
    starting with the initial window; ``limit_conjugate`` is
    ``sum_k lambda_k g_k*``.  Primal functions are produced on demand.
    """

    primal_grid: tuple
    dual_grid: tuple
    conjugates: list
    limit_conjugate: GridFunction
    m: int

    def conjugate(self, n):
        return GridFunction(*self.dual_grid[:2], self.conjugates[n], check_convex=False)

    def primal(self, n):
        """``g_n`` as the conjugate of ``g_n*`` sampled on the primal grid."""
        return _back_to_primal(self.conjugate(n), self.primal_grid)

    @property
    def limit(self):
        return _back_to_primal(self.limit_conjugate, self.primal_grid)

    def iterates(self):
        return [self.primal(n) for n in range(self.m, len(self.conjugates))]


def _back_to_primal(conj, grid):
    lo, hi, n = grid
    vals, _ = conjugate_with_argmax(conj.interpolant, grid_points(lo, hi, n))
    return GridFunction(lo, hi, vals, check_convex=False)


def moving_epi_average(w, initial, steps, dual=None):
    """Moving epi-average ``g_n = (alpha_{m-1} * g_{n-1}) box ... box
    (alpha_0 * g_{n-m})`` via ``g_n* = sum_i alpha_i g*_{n-m+i}``.

    The conjugate value vectors are advanced with the ordinary moving
    average, so they match :func:`movingmeans.recurrence.step` bit for bit.
    Raises :class:`NotCofiniteError` for an initial function whose conjugate
    is not finite on the dual grid and :class:`HypothesisFailsError` when the
    weights fail the gcd criterion (no limit).
    """
    initial = list(initial)
    if len(initial) != w.m:
        raise DimensionMismatchError(f"{len(initial)} functions for {w.m} weights")
    grid = require_common_grid(initial)
    report = check_basic_hypothesis(w)
    if not report.holds:
        raise HypothesisFailsError(
            f"moving epi-average needs the gcd criterion; gcd of positive lags is {report.gcd_value}"
        )
    dual = tuple(grid) if dual is None else tuple(dual)
    conj = [check_cofinite(g, *dual).values for g in initial]
    state = RecurrenceState(conj)
    seq = list(conj)
    for _ in range(steps):
        seq.append(step(state, w))
    lam = np.array([float(v) for v in cumulative(w).lam])
    lim = np.zeros_like(conj[0])
    for lk, c in zip(lam, conj):
        lim = lim + lk * c
    lim_fn = GridFunction(dual[0], dual[1], lim, check_convex=False)
    return EpiAvgRun(grid, dual, seq, lim_fn, w.m)


def epi_converged(g_seq, g, tol, tail=1):
    """Envelope test for epi-convergence of ``g_seq`` to ``g``.

    True iff each of the last ``tail`` members has Moreau envelope within
    ``tol`` of the envelope of ``g`` in sup-norm over the grid.
    """
    g_seq = list(g_seq)
    if not g_seq:
        return False
    for f in g_seq:
        if not f.same_grid(g):
            raise GridMismatchError(f"grids {f.grid} and {g.grid} differ")
    target = moreau_envelope(g).values
    return all(
        sup_distance(moreau_envelope(f).values, target) < tol for f in g_seq[-tail:]
    )
