"""Convex functions on a real interval, sampled on a uniform grid.

Values may be ``+inf`` (``numpy.inf``) on a prefix and a suffix of the grid,
so the effective domain is always an interval; ``-inf`` and NaN are
rejected.  Between grid points the function is read through a
piecewise-quadratic interpolant that preserves convexity, reproduces
quadratics exactly and falls back to linear interpolation across kinks.

A ``+inf`` sample marks a hard end of the domain.  Where the finite samples
reach the edge of the grid the function is taken to continue past it along
its end piece, so ``q`` sampled on ``[-8, 8]`` stands for ``q`` on the whole
line rather than for ``q`` restricted to the grid.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import GridMismatchError, ImproperFunctionError, NotConvexError

DEFAULT_LO = -8.0
DEFAULT_HI = 8.0
DEFAULT_N = 2001
CONVEXITY_TOL = 1e-9


def grid_points(lo, hi, n):
    return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class Interpolant:
    """Piecewise-quadratic reading of the finite samples.

    On segment ``i`` (knots ``y_i < y_{i+1}``)::

        Q_i(y) = f_i + s_i (y - y_i) + kappa_i / 2 (y - y_i)(y - y_{i+1})

    with secant slope ``s_i`` and curvature ``kappa_i >= 0``.  ``left`` and
    ``right`` hold the one-sided slopes at the segment ends; they are
    nondecreasing along the knots, which is what makes the interpolant
    convex.  Knots are the grid points plus one extra knot inside every cell
    that was found to contain a kink.  An open end continues the first
    (last) piece to minus (plus) infinity.
    """

    y: np.ndarray
    f: np.ndarray
    secant: np.ndarray
    kappa: np.ndarray
    left: np.ndarray
    right: np.ndarray
    open_left: bool = False
    open_right: bool = False

    @property
    def segments(self):
        return len(self.secant)

    def segment_value(self, i, t):
        """``Q_i(t)`` for arrays of segment indices and points."""
        y0 = self.y[i]
        return self.f[i] + self.secant[i] * (t - y0) + 0.5 * self.kappa[i] * (t - y0) * (t - self.y[i + 1])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, np.inf)
        lo, hi = self.y[0], self.y[-1]
        eps_lo = 1e-12 * max(1.0, abs(lo))
        eps_hi = 1e-12 * max(1.0, abs(hi))
        if self.segments == 0:
            out[(t >= lo - eps_lo) & (t <= hi + eps_hi)] = self.f[0]
            return out
        ok = np.ones(t.shape, dtype=bool)
        if not self.open_left:
            ok &= t >= lo - eps_lo
        if not self.open_right:
            ok &= t <= hi + eps_hi
        tt = t[ok]
        i = np.clip(np.searchsorted(self.y, tt, side="right") - 1, 0, self.segments - 1)
        # open ends extend the end pieces; closed ends only absorb round-off
        tt = np.where((tt < lo) & ~self.open_left, lo, tt)
        tt = np.where((tt > hi) & ~self.open_right, hi, tt)
        out[ok] = self.segment_value(i, tt)
        return out


KINK_RATIO = 0.5


def _kink_position(y, f, s, kappa, h, i):
    """Crossing of the neighbouring pieces extended into cell ``i``, or None.

    ``QL`` continues segment ``i-1`` to the right and ``QR`` continues
    segment ``i+1`` to the left.  A convex kink inside the cell shows up as
    ``QR <= QL`` at the left node and ``QL <= QR`` at the right node.
    """
    def ql(t):
        return f[i - 1] + s[i - 1] * (t - y[i - 1]) + 0.5 * kappa[i - 1] * (t - y[i - 1]) * (t - y[i])

    def qr(t):
        return f[i + 1] + s[i + 1] * (t - y[i + 1]) + 0.5 * kappa[i + 1] * (t - y[i + 1]) * (t - y[i + 2])

    d0 = qr(y[i]) - f[i]
    d1 = f[i + 1] - ql(y[i + 1])
    if not (d0 < 0 < d1):
        return None
    # D(u) = QR - QL = a u^2 + b u + d0 on u in [0, h]
    a = 0.5 * (kappa[i + 1] - kappa[i - 1])
    b = (d1 - d0) / h - a * h
    if abs(a) * h <= 1e-12 * max(abs(b), 1e-300):
        u = -d0 / b
    else:
        disc = b * b - 4 * a * d0
        if disc < 0:
            return None
        r = np.sqrt(disc)
        q_ = -0.5 * (b + np.copysign(r, b))
        cands = [c for c in ((q_ / a) if a else None, (d0 / q_) if q_ else None) if c is not None]
        cands = [c for c in cands if 0 <= c <= h and 2 * a * c + b >= 0]
        if not cands:
            return None
        u = min(cands)
    if not (1e-9 * h < u < h - 1e-9 * h):
        return None
    xi = y[i] + u
    return xi, float(ql(xi))


def build_interpolant(y, f, h, open_left=False, open_right=False):
    k = len(f)
    if k == 1:
        e = np.empty(0)
        return Interpolant(y, f, e, e, e, e)
    s = np.diff(f) / h
    if k == 2:
        kappa = np.zeros(1)
    else:
        d = np.maximum(np.diff(s) / h, 0.0)  # at interior nodes 1..k-2
        kappa = np.empty(k - 1)
        kappa[0] = d[0]
        kappa[-1] = d[-1]
        kappa[1:-1] = np.minimum(d[:-1], d[1:])
    knots, vals = y, f
    if k >= 6:
        # cell i spans nodes i, i+1 whose second differences are d[i-1], d[i];
        # a kink inside it inflates both well above d[i-2] and d[i+1]
        lo_d = np.minimum(d[1:-2], d[2:-1])
        outer = np.maximum(d[:-3], d[3:])
        flag = lo_d - outer > KINK_RATIO * lo_d
        lonely = flag & ~np.concatenate([[False], flag[:-1]]) & ~np.concatenate([flag[1:], [False]])
        cells = np.flatnonzero(lonely) + 2
        found = [(i, _kink_position(y, f, s, kappa, h, i)) for i in cells]
        found = [(i, r) for i, r in found if r is not None]
        if found:
            at = [i + 1 for i, _ in found]
            knots = np.insert(y, at, [r[0] for _, r in found])
            vals = np.insert(f, at, [r[1] for _, r in found])
            # the two halves of a split cell inherit the neighbouring curvatures
            kap = np.insert(kappa, at, [kappa[i + 1] for i, _ in found])
            for n, (i, _) in enumerate(found):
                kap[i + n] = kappa[i - 1]
            kappa = kap
            s = np.diff(vals) / np.diff(knots)
    widths = np.diff(knots)
    left = s - 0.5 * kappa * widths
    right = s + 0.5 * kappa * widths
    # rounding can break the ordering left_i <= right_i <= left_{i+1}
    seq = np.maximum.accumulate(np.column_stack([left, right]).reshape(-1))
    left, right = seq[0::2].copy(), seq[1::2].copy()
    return Interpolant(knots, vals, s, kappa, left, right, open_left, open_right)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Proper convex function sampled at ``n`` equispaced points of
    ``[lo, hi]``.

    Parameters
    ----------
    lo, hi : float
        Grid bounds, ``lo < hi``.
    values : array_like
        ``n >= 2`` samples; ``numpy.inf`` marks points outside the domain.
    check_convex : bool
        Reject samples whose second differences fall below
        ``-1e-9 * scale``.
    """

    lo: float
    hi: float
    values: np.ndarray
    check_convex: bool = True

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or len(v) < 2:
            raise GridMismatchError("a grid function needs at least 2 samples")
        if not self.lo < self.hi:
            raise GridMismatchError(f"empty grid [{self.lo}, {self.hi}]")
        if np.any(np.isnan(v)) or np.any(v == -np.inf):
            raise ImproperFunctionError("values must not be NaN or -inf")
        finite = np.isfinite(v)
        if not finite.any():
            raise ImproperFunctionError("function is +inf everywhere")
        idx = np.flatnonzero(finite)
        if idx[-1] - idx[0] + 1 != len(idx):
            raise NotConvexError("effective domain is not an interval")
        if self.check_convex and len(idx) >= 3:
            fv = v[idx]
            scale = max(1.0, float(np.max(np.abs(fv))))
            d2 = fv[:-2] + fv[2:] - 2 * fv[1:-1]
            worst = float(d2.min())
            if worst < -CONVEXITY_TOL * scale:
                raise NotConvexError(f"second difference {worst:.3e} below tolerance")
        v.setflags(write=False)
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return len(self.values)

    @property
    def h(self):
        return (self.hi - self.lo) / (self.n - 1)

    @cached_property
    def x(self):
        return grid_points(self.lo, self.hi, self.n)

    @cached_property
    def domain_indices(self):
        """First and last index of the effective domain."""
        idx = np.flatnonzero(np.isfinite(self.values))
        return int(idx[0]), int(idx[-1])

    @property
    def open_ends(self):
        """Whether the finite samples run into the left / right grid edge
        (and the function continues beyond it)."""
        i, j = self.domain_indices
        single = i == j
        return (i == 0 and not single, j == self.n - 1 and not single)

    @property
    def domain(self):
        """Effective domain ``(a, b)``; infinite on open sides."""
        i, j = self.domain_indices
        ol, orr = self.open_ends
        return (-np.inf if ol else float(self.x[i]), np.inf if orr else float(self.x[j]))

    @cached_property
    def interpolant(self):
        i, j = self.domain_indices
        return build_interpolant(self.x[i:j + 1], self.values[i:j + 1], self.h, *self.open_ends)

    def __call__(self, t):
        """Evaluate the interpolant; ``+inf`` outside the effective domain."""
        return self.interpolant(t)

    @property
    def grid(self):
        return (self.lo, self.hi, self.n)

    def same_grid(self, other):
        return self.grid == other.grid

    def with_values(self, values, check_convex=True):
        return GridFunction(self.lo, self.hi, values, check_convex)

    def to_dict(self):
        vals = ["inf" if np.isinf(v) else float(v) for v in self.values]
        return {"lo": self.lo, "hi": self.hi, "values": vals}

    @classmethod
    def from_dict(cls, data):
        try:
            raw = data["values"]
            lo, hi = float(data["lo"]), float(data["hi"])
        except (KeyError, TypeError) as exc:
            raise GridMismatchError(f"grid function needs lo, hi and values: {exc}") from exc
        vals = [np.inf if (isinstance(v, str) and v.strip().lower() in ("inf", "+inf")) else float(v) for v in raw]
        return cls(lo, hi, vals)


def require_common_grid(gs):
    first = gs[0]
    for g in gs[1:]:
        if not g.same_grid(first):
            raise GridMismatchError(f"grids {first.grid} and {g.grid} differ")
    return first.grid


def from_callable(fn, lo=DEFAULT_LO, hi=DEFAULT_HI, n=DEFAULT_N):
    x = grid_points(lo, hi, n)
    return GridFunction(lo, hi, np.asarray(fn(x), dtype=float))


def quadratic(c=1.0, lo=DEFAULT_LO, hi=DEFAULT_HI, n=DEFAULT_N):
    """``c * q`` with ``q(x) = x^2 / 2``."""
    return from_callable(lambda x: 0.5 * c * x * x, lo, hi, n)


def zero(lo=DEFAULT_LO, hi=DEFAULT_HI, n=DEFAULT_N):
    return from_callable(np.zeros_like, lo, hi, n)


def absolute(lo=DEFAULT_LO, hi=DEFAULT_HI, n=DEFAULT_N):
    return from_callable(np.abs, lo, hi, n)


def indicator_point(x0=0.0, lo=DEFAULT_LO, hi=DEFAULT_HI, n=DEFAULT_N):
    """0 at the grid point nearest ``x0``, ``+inf`` elsewhere."""
    x = grid_points(lo, hi, n)
    v = np.full(n, np.inf)
    v[int(np.argmin(np.abs(x - x0)))] = 0.0
    return GridFunction(lo, hi, v)


def indicator_interval(a, b, lo=DEFAULT_LO, hi=DEFAULT_HI, n=DEFAULT_N):
    x = grid_points(lo, hi, n)
    v = np.where((x >= a) & (x <= b), 0.0, np.inf)
    return GridFunction(lo, hi, v)
