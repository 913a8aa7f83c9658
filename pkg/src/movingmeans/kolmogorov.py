"""Moving Kolmogorov means ``y_n = f^-1(sum_i alpha_i f(y_{n-m+i}))``.

The transformed values ``f(y_n)`` follow the ordinary moving average, so the
limit is ``f^-1(sum_k lambda_k f(y_k))``.  Iteration runs on the transformed
values with the recurrence machinery and maps back through ``f^-1``.
"""

from dataclasses import dataclass
from math import inf, isfinite
from typing import Callable

import numpy as np

from .errors import BadParameterError, DomainViolationError, DimensionMismatchError
from .recurrence import RecurrenceState, step
from .weights import limit_functional, require_hypothesis

ROUND_TRIP_TOL = 1e-10
SAMPLE_COUNT = 1000


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = True

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        ok = np.isfinite(x)
        ok &= (x > self.lo) if self.lo_open else (x >= self.lo)
        ok &= (x < self.hi) if self.hi_open else (x <= self.hi)
        return ok

    def sample(self, n=SAMPLE_COUNT):
        """Deterministic points spread over the interval (log-spaced near an
        open zero endpoint, clipped to ``[-1e3, 1e3]`` when unbounded)."""
        lo = self.lo if isfinite(self.lo) else -1e3
        hi = self.hi if isfinite(self.hi) else 1e3
        if lo == 0 and hi > 0:
            pts = np.geomspace(1e-6, hi, n)
            if not self.lo_open:
                pts[0] = 0.0
        else:
            pts = np.linspace(lo, hi, n)
        return pts[self.contains(pts)]

    def describe(self):
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo}, {self.hi}{right}"


REALS = Interval(-inf, inf)
POSITIVE = Interval(0.0, inf, lo_open=True)
NONNEGATIVE = Interval(0.0, inf, lo_open=False)


@dataclass(frozen=True)
class MeanGenerator:
    """An injective scalar map ``f`` with its inverse and domain."""

    name: str
    forward: Callable
    inverse: Callable
    domain: Interval
    parameter: float | None = None

    def check_domain(self, values):
        x = np.asarray(values, dtype=float)
        bad = ~self.domain.contains(x)
        if np.any(bad):
            first = x.reshape(-1)[np.argmax(bad.reshape(-1))]
            raise DomainViolationError(
                f"{self.name}: value {first} outside the domain {self.domain.describe()}"
            )
        return x


def _round_trip_check(gen):
    x = gen.domain.sample()
    with np.errstate(all="ignore"):
        y = np.asarray(gen.forward(x), dtype=float)
        back = np.asarray(gen.inverse(y), dtype=float)
        err = np.abs(back - x) / np.maximum(1.0, np.abs(x))
    if not np.all(np.isfinite(y)) or not np.all(err <= ROUND_TRIP_TOL):
        raise BadParameterError(
            f"generator {gen.name!r} fails the round trip: relative error {np.max(err):.3e}"
        )
    d = np.diff(y)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise BadParameterError(f"generator {gen.name!r} is not strictly monotone on its domain")
    return gen


def custom_generator(name, forward, inverse, domain=REALS, parameter=None):
    """Wrap a user-supplied ``f`` and ``f^-1``, testing round trip and strict
    monotonicity on a 1000-point domain sample."""
    return _round_trip_check(MeanGenerator(name, forward, inverse, domain, parameter))


def builtin_generator(name, p=None):
    """``identity``, ``log``, ``power`` (exponent ``p``) or ``reciprocal``.

    ``power`` with ``p > 0`` lives on ``[0, inf)``; with ``p < 0`` on
    ``(0, inf)``.
    """
    if name == "identity":
        gen = MeanGenerator("identity", lambda x: x, lambda y: y, REALS)
    elif name == "log":
        gen = MeanGenerator("log", np.log, np.exp, POSITIVE)
    elif name == "reciprocal":
        gen = MeanGenerator("reciprocal", lambda x: 1.0 / x, lambda y: 1.0 / y, POSITIVE)
    elif name == "power":
        if p is None or p == 0 or not isfinite(p):
            raise BadParameterError(f"power generator needs a finite nonzero exponent, got {p}")
        p = float(p)
        dom = NONNEGATIVE if p > 0 else POSITIVE
        gen = MeanGenerator(
            f"power({p:g})",
            lambda x: np.power(x, p),
            lambda y: np.power(y, 1.0 / p),
            dom,
            p,
        )
    else:
        raise BadParameterError(f"unknown generator {name!r}")
    return _round_trip_check(gen)


def parse_generator(spec):
    """``"log"``, ``"power(2)"``, ``"power:2"``, ... -> builtin generator."""
    s = spec.strip().lower()
    for sep in ("(", ":", "="):
        if s.startswith("power" + sep):
            arg = s[len("power") + 1:].rstrip(")")
            try:
                return builtin_generator("power", float(arg))
            except ValueError as exc:
                raise BadParameterError(f"bad exponent in {spec!r}") from exc
    aliases = {"arithmetic": "identity", "geometric": "log", "harmonic": "reciprocal"}
    return builtin_generator(aliases.get(s, s))


def _window(gen, w, values):
    x = gen.check_domain(values)
    if x.ndim != 1 or x.shape[0] != w.m:
        raise DimensionMismatchError(f"expected {w.m} scalar terms, got shape {x.shape}")
    return x


def kolmogorov_step(gen, w, window):
    """One term ``f^-1(sum_i alpha_i f(window_i))`` of the moving mean."""
    x = _window(gen, w, window)
    state = RecurrenceState(gen.forward(x))
    return float(gen.inverse(step(state, w)))


def kolmogorov_limit(gen, w, initial):
    """``f^-1(sum_k lambda_k f(y_k))``."""
    require_hypothesis(w)
    x = _window(gen, w, initial)
    return float(gen.inverse(limit_functional(w, gen.forward(x))))


@dataclass
class KolmogorovRun:
    limit: float | None
    iterations: int
    final_residual: float
    diagnosis: str  # converged | max_iter
    iterates: list


def iterate_kolmogorov(gen, w, initial, tol=1e-10, max_iter=100_000, record=False):
    """Iterate the moving mean until the window spans less than ``tol``.

    The window lives in the transformed space; its spread in the original
    space is measured through ``f^-1``, which is monotone.
    """
    x = _window(gen, w, initial)
    state = RecurrenceState(gen.forward(x))
    rot = state.rotated(w.as_float())
    iterates = list(x) if record else []
    it = 0
    while True:
        z = state._buf[:, 0]
        ends = np.asarray(gen.inverse(np.array([z.min(), z.max()])), dtype=float)
        diam = float(abs(ends[1] - ends[0]))
        if diam < tol:
            limit = float(gen.inverse(state.terms()[-1][0]))
            return KolmogorovRun(limit, it, diam, "converged", iterates)
        if it >= max_iter:
            return KolmogorovRun(None, it, diam, "max_iter", iterates)
        y = state.advance(rot)
        it += 1
        if record:
            iterates.append(float(gen.inverse(y[0])))
