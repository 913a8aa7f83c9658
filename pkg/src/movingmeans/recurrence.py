"""Iterating the moving average on vectors of any fixed shape.

The state keeps the last ``m`` terms in a ring buffer (oldest first); each
step appends ``sum_i alpha_i * history[i]`` and evicts the oldest term.
Scalars, vectors and matrices are all stored as flat arrays.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError
from .weights import check_basic_hypothesis

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


def weighted_sum(coefficients, terms):
    """``sum_i c_i * terms[i]`` as one product ``c @ terms``.

    Every averaging step in the package goes through this function, so
    results agree bit for bit whichever entry point produced them.
    """
    return np.asarray(coefficients) @ np.asarray(terms)


class RecurrenceState:
    """Ring buffer of the ``m`` most recent terms of a moving-average sequence.

    Parameters
    ----------
    initial : sequence
        The ``m`` starting terms ``y_0, ..., y_{m-1}``; each may be a scalar
        or an array, all of the same shape.
    """

    def __init__(self, initial):
        items = [np.asarray(y) for y in initial]
        if not items:
            raise DimensionMismatchError("empty initial window")
        self.shape = items[0].shape
        for y in items:
            if y.shape != self.shape:
                raise DimensionMismatchError(
                    f"initial terms have shapes {self.shape} and {y.shape}"
                )
        exact = any(y.dtype == object for y in items)
        dtype = object if exact else float
        self._buf = np.array([y.reshape(-1) for y in items], dtype=dtype)
        self._head = 0  # index of the oldest term
        self.step_count = 0

    @property
    def m(self):
        return self._buf.shape[0]

    @property
    def dim(self):
        return self._buf.shape[1]

    @property
    def history(self):
        """Current window, oldest first, as an ``(m, dim)`` array."""
        return np.roll(self._buf, -self._head, axis=0)

    def terms(self):
        """Window rows, oldest first."""
        buf, h, m = self._buf, self._head, self._buf.shape[0]
        return [buf[(h + i) % m] for i in range(m)]

    def rotated(self, coefficients):
        """Coefficient vectors aligned with the raw ring buffer, one per head
        position: ``rotated[h] @ buf`` equals ``coefficients @ window``."""
        c = np.asarray(coefficients)
        return [np.roll(c, h) for h in range(self.m)]

    def advance(self, rotated):
        """Apply the averaging rule with pre-rotated coefficients; return the
        new flat term."""
        y = weighted_sum(rotated[self._head], self._buf)
        self._buf[self._head] = y
        self._head = (self._head + 1) % self._buf.shape[0]
        self.step_count += 1
        return y

    def window_diameter(self):
        buf = self._buf if self._buf.dtype != object else self._buf.astype(float)
        return float(np.max(buf.max(axis=0) - buf.min(axis=0)))

    def push(self, y):
        y = np.asarray(y).reshape(-1)
        if y.shape[0] != self.dim:
            raise DimensionMismatchError(f"term of size {y.shape[0]}, expected {self.dim}")
        self._buf[self._head] = y
        self._head = (self._head + 1) % self.m
        self.step_count += 1

    def unflatten(self, v):
        v = np.asarray(v)
        return v.reshape(self.shape) if self.shape else v.reshape(()).item()


def _coefficients(w, state):
    if state._buf.dtype == object and w.exact:
        return np.array(w.alphas, dtype=object)
    return w.as_float()


def step(state, w):
    """Produce the next term, push it into the window and return it."""
    if w.m != state.m:
        raise DimensionMismatchError(f"{w.m} weights for a window of {state.m} terms")
    y = state.advance(state.rotated(_coefficients(w, state)))
    return state.unflatten(y.copy())


@dataclass
class ConvergenceResult:
    limit: object
    iterations: int
    final_residual: float
    diagnosis: str  # converged | oscillating | max_iter
    period: int | None = None
    trace: list = field(default_factory=list, repr=False)


def _periodic(recent, p, tol):
    # recent: array of the last terms, newest last
    if len(recent) < 2 * p:
        return False
    a = recent[-p:]
    b = recent[-2 * p:-p]
    return float(np.max(np.abs(a - b))) < tol


def iterate_until(state, w, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, record=False):
    """Step until the window diameter drops below ``tol``.

    The window diameter (sup-norm over coordinates) bounds the distance of
    every later term to the limit, because all later terms stay in the convex
    hull of the current window.  When the diameter stalls but the last ``2p``
    terms repeat with some period ``2 <= p <= m``, the run stops early as
    ``oscillating``.
    """
    m = state.m
    rot = state.rotated(_coefficients(w, state))
    trace = [state.unflatten(y) for y in state.history] if record else []
    recent = [y.astype(float) for y in state.history]
    periods = range(2, m + 1) if not check_basic_hypothesis(w).holds else ()
    it = 0
    while True:
        diam = state.window_diameter()
        if diam < tol:
            limit = state.unflatten(state.terms()[-1].copy())
            return ConvergenceResult(limit, it, diam, "converged", trace=trace)
        if it >= max_iter:
            return ConvergenceResult(None, it, diam, "max_iter", trace=trace)
        if periods and it >= m:
            arr = np.array(recent)
            for p in periods:
                if _periodic(arr, p, tol):
                    return ConvergenceResult(None, it, diam, "oscillating", period=p, trace=trace)
        y = state.advance(rot)
        it += 1
        if record:
            trace.append(state.unflatten(y.copy()))
        if periods:
            recent.append(np.asarray(y, dtype=float))
            if len(recent) > 2 * m:
                recent.pop(0)


def write_trace_csv(path, trace, start=0):
    """Write ``step, x0, x1, ...`` rows for a recorded trace."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        first = np.asarray(trace[0]).reshape(-1)
        writer.writerow(["step"] + [f"x{i}" for i in range(first.size)])
        for n, y in enumerate(trace, start=start):
            writer.writerow([n] + [format(float(v), ".17g") for v in np.asarray(y).reshape(-1)])
