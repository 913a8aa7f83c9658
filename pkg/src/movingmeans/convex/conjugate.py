"""Fenchel conjugates, Moreau envelopes and epi-scaling of grid functions.

Two readings of the samples are supported.  ``"quadratic"`` (the default)
conjugates the piecewise-quadratic interpolant exactly, open ends included,
which is exact on quadratics and keeps averaged envelopes accurate to
round-off on that family.  ``"grid"`` is the plain discrete transform
``max_j (s y_j - g(y_j))`` over grid points, by brute force or by a
sorted-slope fast path that is valid for convex samples.
"""

import numpy as np

from ..errors import NegativeScaleError
from .grid import GridFunction, grid_points

BRUTE_CHUNK = 256


def _breakpoints(ip, extra):
    # slope ranges of the nodes and segments of Q + extra*q, in grid order
    y = ip.y
    lt = ip.left + extra * y[:-1]
    rt = ip.right + extra * y[1:]
    b = np.column_stack([lt, rt]).reshape(-1)
    return np.maximum.accumulate(b)


def conjugate_with_argmax(ip, s, extra=0.0):
    """``sup_y (s y - Q(y) - extra * y^2 / 2)`` and its maximizer.

    ``Q`` is the interpolant (``+inf`` beyond closed ends).  The maximizer
    sits at a node when ``s`` lies in the slope gap at that node, inside
    segment ``i`` when ``s`` lies in the slope range of the segment, and on
    the continuation of an end piece when ``s`` is beyond every slope on an
    open side.  There the supremum is ``+inf`` if that piece is linear.
    Returns ``(values, argmax)``; the argmax is ``nan`` where the value is
    infinite.
    """
    s = np.asarray(s, dtype=float)
    y = ip.y
    if ip.segments == 0:
        ystar = np.full(s.shape, y[0])
        return s * y[0] - ip.f[0] - 0.5 * extra * y[0] ** 2, ystar
    b = _breakpoints(ip, extra)
    pos = np.searchsorted(b, s, side="left")
    seg = (pos - 1) // 2
    interior = (pos % 2 == 1)
    node = np.where(interior, 0, pos // 2)
    ystar = y[node].astype(float)
    val = np.empty(s.shape)
    nm = ~interior
    ystar_n = y[node[nm]]
    val[nm] = s[nm] * ystar_n - ip.f[node[nm]] - 0.5 * extra * ystar_n ** 2
    last = ip.segments - 1
    # rays beyond open ends reuse the end pieces with an unclipped maximizer
    ray_l = (s < b[0]) if ip.open_left else np.zeros(s.shape, dtype=bool)
    ray_r = (s > b[-1]) if ip.open_right else np.zeros(s.shape, dtype=bool)
    seg = np.where(ray_l, 0, np.where(ray_r, last, seg))
    use = interior | ray_l | ray_r
    if np.any(use):
        i = seg[use]
        si = s[use]
        curv = ip.kappa[i] + extra
        lt = ip.left[i] + extra * y[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(curv > 0, (si - lt) / curv, 0.0)
        yi = y[i] + t
        inner = interior[use]
        yi = np.where(inner, np.clip(yi, y[i], y[i + 1]), yi)
        v = si * yi - ip.segment_value(i, yi) - 0.5 * extra * yi ** 2
        flat = ~inner & (curv <= 0)
        v = np.where(flat, np.inf, v)
        yi = np.where(flat, np.nan, yi)
        ystar[use] = yi
        val[use] = v
    return val, ystar


def _grid_brute(y, f, s):
    out = np.empty(s.shape)
    arg = np.empty(s.shape)
    for start in range(0, len(s), BRUTE_CHUNK):
        blk = s[start:start + BRUTE_CHUNK]
        M = blk[:, None] * y[None, :] - f[None, :]
        j = np.argmax(M, axis=1)
        out[start:start + BRUTE_CHUNK] = M[np.arange(len(blk)), j]
        arg[start:start + BRUTE_CHUNK] = y[j]
    return out, arg


def _grid_fast(y, f, s):
    # for convex samples the maximizing node is monotone in s: node j wins
    # between the secant slopes on either side of it
    if len(y) == 1:
        return s * y[0] - f[0], np.full(s.shape, y[0])
    slopes = np.maximum.accumulate(np.diff(f) / np.diff(y))
    j = np.searchsorted(slopes, s, side="left")
    return s * y[j] - f[j], y[j]


def grid_conjugate_values(g, s, fast=True):
    """``max_j (s y_j - g_j)`` over the finite samples."""
    i, j = g.domain_indices
    y, f = g.x[i:j + 1], g.values[i:j + 1]
    s = np.asarray(s, dtype=float)
    return (_grid_fast if fast else _grid_brute)(y, f, s)


def fenchel_conjugate(g, dual_lo=None, dual_hi=None, dual_n=None,
                      interpolation="quadratic", fast=True):
    """``g*(s) = sup_y (s y - g(y))`` sampled on a dual grid.

    The dual grid defaults to the primal one.  With ``interpolation="grid"``
    the supremum runs over grid points only; ``fast=False`` then forces the
    O(n^2) brute-force maximum.
    """
    dual_lo = g.lo if dual_lo is None else dual_lo
    dual_hi = g.hi if dual_hi is None else dual_hi
    dual_n = g.n if dual_n is None else dual_n
    s = grid_points(dual_lo, dual_hi, dual_n)
    if interpolation == "quadratic":
        vals, _ = conjugate_with_argmax(g.interpolant, s)
    elif interpolation == "grid":
        vals, _ = grid_conjugate_values(g, s, fast=fast)
    else:
        raise ValueError(f"unknown interpolation {interpolation!r}")
    return GridFunction(dual_lo, dual_hi, vals, check_convex=False)


def proximal_point(g, x, interpolation="quadratic", fast=True):
    """Minimizer and value of ``y -> g(y) + (x - y)^2 / 2``."""
    x = np.asarray(x, dtype=float)
    if interpolation == "quadratic":
        # the minimizer solves x in y + dQ(y): a conjugate with unit extra curvature
        _, y = conjugate_with_argmax(g.interpolant, x, extra=1.0)
        return y, g.interpolant(y) + 0.5 * (x - y) ** 2
    i, j = g.domain_indices
    yy, f = g.x[i:j + 1], g.values[i:j + 1]
    if not fast:
        out = np.empty(x.shape)
        arg = np.empty(x.shape)
        for start in range(0, len(x), BRUTE_CHUNK):
            blk = x[start:start + BRUTE_CHUNK]
            M = f[None, :] + 0.5 * (blk[:, None] - yy[None, :]) ** 2
            k = np.argmin(M, axis=1)
            out[start:start + BRUTE_CHUNK] = M[np.arange(len(blk)), k]
            arg[start:start + BRUTE_CHUNK] = yy[k]
        return arg, out
    if len(yy) == 1:
        return np.full(x.shape, yy[0]), f[0] + 0.5 * (x - yy[0]) ** 2
    # node j+1 beats node j once x passes the midpoint shifted by the secant slope
    thresholds = np.maximum.accumulate(np.diff(f) / np.diff(yy) + 0.5 * (yy[:-1] + yy[1:]))
    k = np.searchsorted(thresholds, x, side="left")
    return yy[k], f[k] + 0.5 * (x - yy[k]) ** 2


def moreau_envelope(g, interpolation="quadratic", fast=True):
    """``(g box q)(x) = min_y g(y) + (x - y)^2 / 2`` on the grid of ``g``.

    With ``interpolation="grid"`` the minimum runs over grid points only.
    """
    _, vals = proximal_point(g, g.x, interpolation, fast)
    return GridFunction(g.lo, g.hi, vals, check_convex=False)


def epi_scale(alpha, g):
    """``alpha * g(x / alpha)`` for ``alpha > 0``; the indicator of the grid
    point nearest 0 for ``alpha = 0``.

    ``g`` is evaluated through its interpolant, so ``x / alpha`` beyond the
    grid follows the continuation of an open end and is ``+inf`` past a
    closed one.
    """
    if alpha < 0:
        raise NegativeScaleError(f"epi-scaling factor {alpha} is negative")
    if alpha == 0:
        v = np.full(g.n, np.inf)
        v[int(np.argmin(np.abs(g.x)))] = 0.0
        return g.with_values(v)
    if alpha == 1:
        return g
    v = alpha * g(g.x / alpha)
    return g.with_values(v)
