"""Weight vectors of a moving average and the Basic Hypothesis.

A weight vector ``alpha = (alpha_0, ..., alpha_{m-1})`` drives the recurrence

    y_n = alpha_{m-1} y_{n-1} + ... + alpha_0 y_{n-m}.

Weights built from ``int``/``Fraction`` entries are *exact*: every derived
quantity (partial sums, normalized weights, matrices) is then rational and
identities can be checked with zero tolerance.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, isfinite
from numbers import Rational

import numpy as np

from .errors import (
    DegenerateAllZeroTailError,
    DimensionMismatchError,
    HypothesisFailsError,
    NegativeWeightError,
    SumNotOneError,
    TooShortError,
)

SUM_TOL = 1e-12

GCD_ONE = "gcd-one"
LAST_WEIGHT_POSITIVE = "last-weight-positive"
ADJACENT_PAIR = "adjacent-pair"
COPRIME_PAIR = "coprime-pair"

# report order: the three sufficient conditions, then the gcd criterion they imply
CONDITION_ORDER = (LAST_WEIGHT_POSITIVE, ADJACENT_PAIR, COPRIME_PAIR, GCD_ONE)

UNIT_ROOT_TOL = 1e-9
MARGIN_FLOOR = 1e-9


@dataclass(frozen=True)
class Weights:
    """Validated weight vector.

    Parameters
    ----------
    alphas : sequence of real
        Nonnegative weights summing to one, ``len(alphas) >= 2``.  Pass
        ``int``/``Fraction`` values for the exact path; a float sum may
        deviate from one by at most ``1e-12``.
    """

    alphas: tuple
    exact: bool = field(init=False)

    def __post_init__(self):
        raw = tuple(self.alphas)
        if len(raw) < 2:
            raise TooShortError(f"need at least 2 weights, got {len(raw)}")
        exact = all(isinstance(a, Rational) for a in raw)
        if exact:
            vals = tuple(Fraction(a) for a in raw)
        else:
            vals = tuple(float(a) for a in raw)
            if not all(isfinite(a) for a in vals):
                raise NegativeWeightError("weights must be finite")
        for i, a in enumerate(vals):
            if a < 0:
                raise NegativeWeightError(f"alpha_{i} = {a} is negative")
        if exact:
            total = sum(vals)
            if total != 1:
                raise SumNotOneError(total, total - 1)
        else:
            total = float(np.sum(vals))
            if abs(total - 1.0) > SUM_TOL:
                raise SumNotOneError(total, total - 1.0)
        object.__setattr__(self, "alphas", vals)
        object.__setattr__(self, "exact", exact)

    @property
    def m(self):
        return len(self.alphas)

    def alpha(self, i):
        """``alpha_i`` with the cyclic convention ``alpha_m := alpha_0``."""
        return self.alphas[i % self.m]

    def as_array(self):
        """Float array of the weights (object array of Fractions if exact)."""
        if self.exact:
            return np.array(self.alphas, dtype=object)
        return np.array(self.alphas, dtype=float)

    def as_float(self):
        return np.array([float(a) for a in self.alphas])

    @classmethod
    def from_rationals(cls, pairs):
        """Build exact weights from ``[(numerator, denominator), ...]``."""
        return cls(tuple(Fraction(int(p), int(q)) for p, q in pairs))

    @classmethod
    def uniform(cls, m, exact=True):
        if exact:
            return cls((Fraction(1, m),) * m)
        return cls((1.0 / m,) * m)


def new_weights(alphas):
    return Weights(tuple(alphas))


@dataclass(frozen=True)
class CumulativeWeights:
    a: tuple
    lam: tuple


def cumulative(w):
    """Partial sums ``a_k = alpha_0 + ... + alpha_k`` and ``lambda = a / sum(a)``."""
    if w.exact:
        a = []
        run = Fraction(0)
        for x in w.alphas:
            run += x
            a.append(run)
        total = sum(a)
        return CumulativeWeights(tuple(a), tuple(x / total for x in a))
    a = np.cumsum(w.alphas)
    lam = a / a.sum()
    return CumulativeWeights(tuple(a.tolist()), tuple(lam.tolist()))


@dataclass(frozen=True)
class HypothesisReport:
    """Verdict on the Basic Hypothesis.

    ``holds`` follows the gcd criterion, which is necessary as well as
    sufficient: if ``d = gcd > 1`` then ``p(x)`` is ``x^r`` times a polynomial
    in ``x^d``, so every ``d``-th root of unity is a root.  The optional root
    certificate re-derives the verdict numerically.
    """

    holds: bool
    satisfied_conditions: tuple
    gcd_value: int
    root_certificate: tuple | None = None
    margin: float | None = None
    certificate_holds: bool | None = None
    unit_circle_roots: tuple = ()

    @property
    def agrees(self):
        if self.certificate_holds is None:
            return None
        return self.certificate_holds == self.holds

    def to_dict(self):
        out = {
            "holds": self.holds,
            "conditions": list(self.satisfied_conditions),
            "gcd": self.gcd_value,
        }
        if self.root_certificate is not None:
            out["roots"] = [
                {"re": z.real, "im": z.imag, "modulus": mod}
                for z, mod in self.root_certificate
            ]
            out["margin"] = self.margin
            out["certificate_holds"] = self.certificate_holds
            out["agrees"] = self.agrees
            out["unit_circle_roots"] = [
                {"re": z.real, "im": z.imag} for z in self.unit_circle_roots
            ]
        return out


def _positive_lags(w):
    # lags i in 1..m with alpha_{m-i} > 0
    m = w.m
    return [i for i in range(1, m + 1) if w.alphas[m - i] > 0]


def check_basic_hypothesis(w, verify_roots=False):
    """Evaluate the four sufficient conditions and, optionally, the roots."""
    m = w.m
    al = w.alphas
    lags = _positive_lags(w)
    if not lags:
        raise DegenerateAllZeroTailError("no positive weight: gcd of an empty set")
    g = reduce(gcd, lags)

    fired = set()
    if g == 1:
        fired.add(GCD_ONE)
    if al[m - 1] > 0:
        fired.add(LAST_WEIGHT_POSITIVE)
    if any(al[m - i] * al[m - i - 1] > 0 for i in range(1, m)):
        fired.add(ADJACENT_PAIR)
    small = [i for i in lags if i <= m - 1]
    if any(gcd(i, j) == 1 for k, i in enumerate(small) for j in small[k + 1:]):
        fired.add(COPRIME_PAIR)
    conditions = tuple(c for c in CONDITION_ORDER if c in fired)

    if not verify_roots:
        return HypothesisReport(g == 1, conditions, g)

    from .spectral import characteristic_polynomial, roots

    rs = roots(characteristic_polynomial(w)).roots
    cert = tuple((complex(z), abs(complex(z))) for z in rs)
    near_one = [z for z, _ in cert if abs(z - 1) <= UNIT_ROOT_TOL]
    others = [(z, r) for z, r in cert if abs(z - 1) > UNIT_ROOT_TOL]
    margin = 1.0 - max((r for _, r in others), default=0.0)
    cert_holds = len(near_one) == 1 and margin > MARGIN_FLOOR
    on_circle = tuple(z for z, r in others if r >= 1 - MARGIN_FLOOR)
    return HypothesisReport(
        holds=g == 1,
        satisfied_conditions=conditions,
        gcd_value=g,
        root_certificate=cert,
        margin=margin,
        certificate_holds=bool(cert_holds),
        unit_circle_roots=on_circle,
    )


def require_hypothesis(w):
    report = check_basic_hypothesis(w)
    if not report.holds:
        raise HypothesisFailsError(
            f"Basic Hypothesis fails for alphas={list(map(str, w.alphas))}: "
            f"gcd of positive lags is {report.gcd_value}"
        )
    return report


def limit_functional(w, y):
    """The limit ``sum_k lambda_k y_k`` of the moving average started at ``y``.

    ``y`` holds ``m`` initial terms (scalars, vectors or arrays of a common
    shape).  The result lies in their convex hull.
    """
    require_hypothesis(w)
    ys = np.asarray(y)
    if ys.shape[0] != w.m:
        raise DimensionMismatchError(f"expected {w.m} initial terms, got {ys.shape[0]}")
    lam = cumulative(w).lam
    if w.exact and ys.dtype == object:
        out = lam[0] * ys[0]
        for lk, yk in zip(lam[1:], ys[1:]):
            out = out + lk * yk
        return out
    lam = np.array([float(x) for x in lam])
    return np.tensordot(lam, ys.astype(float), axes=1)
