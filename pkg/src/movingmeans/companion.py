"""The companion matrix ``A`` of a weight vector and its power limit.

``A`` shifts a window ``(y_n, ..., y_{n+m-1})`` one step forward, so
``A^n`` applied to the initial window gives the window at step ``n``.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _matrix as mx
from .weights import cumulative, require_hypothesis


def build_companion(w):
    """Ones on the superdiagonal, last row ``(alpha_0, ..., alpha_{m-1})``."""
    m = w.m
    zero, one = (Fraction(0), Fraction(1)) if w.exact else (0.0, 1.0)
    A = np.full((m, m), zero, dtype=object if w.exact else float)
    for i in range(m - 1):
        A[i, i + 1] = one
    A[m - 1, :] = w.alphas
    return A


def partial_sums(w):
    """The vector ``a`` as an array (exact for exact weights)."""
    a = cumulative(w).a
    return np.array(a, dtype=object if w.exact else float)


@dataclass(frozen=True)
class EigenResiduals:
    left: object  # |a^T A - a^T|_inf
    right: object  # |A e - e|_inf


def eigenvector_identities(w):
    """Residuals of ``a^T A = a^T`` and ``A e = e``; both vanish exactly
    for exact weights."""
    A = build_companion(w)
    a = partial_sums(w)
    e = mx.ones(w.m, exact=w.exact)
    left = mx.matmul(a, A) - a
    right = mx.matmul(A, e) - e
    return EigenResiduals(mx.sup_norm(left), mx.sup_norm(right))


def companion_limit(w):
    """``lim A^n = e lambda^T``: every row equals the normalized partial sums."""
    require_hypothesis(w)
    lam = cumulative(w).lam
    m = w.m
    L = np.empty((m, m), dtype=object if w.exact else float)
    for i in range(m):
        L[i, :] = lam
    return L


def is_diagonal_point(x, tol=0.0):
    """Whether ``x`` lies on the diagonal ``D = {(t, ..., t)}``, the fixed
    point set of ``A``."""
    x = np.asarray(x)
    if x.size == 0:
        return True
    return bool(max(abs(xi - x[0]) for xi in x.flat) <= tol)
