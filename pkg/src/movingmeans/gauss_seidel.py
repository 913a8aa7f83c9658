"""Gauss-Seidel iteration matrices for the moving average.

Updating one coordinate of the window at a time with the averaging rule gives
the matrices ``T_1, ..., T_m``; one full sweep is ``T = T_m ... T_1``, which
coincides with ``A^m`` for the companion matrix ``A``.  For the special
weights ``alpha_0 = 0``, ``alpha_1 = ... = alpha_{m-1} = 1/(m-1)`` the sweep
and its partial products have closed forms in ``gamma = 1/(m-1)``.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _matrix as mx
from .companion import build_companion, companion_limit
from .errors import IndexOutOfRangeError, TooShortError
from .weights import Weights


def _check_index(k, m):
    if not 1 <= k <= m:
        raise IndexOutOfRangeError(f"k = {k} outside 1..{m}")


def build_Tk(w, k):
    """Identity except row ``k`` (1-based), which holds the rotated weights.

    Row ``k`` has ``alpha_{m-k+j}`` in column ``j < k`` and ``alpha_{j-k}``
    in column ``j >= k``.
    """
    m = w.m
    _check_index(k, m)
    T = mx.identity(m, exact=w.exact)
    for j in range(1, m + 1):
        T[k - 1, j - 1] = w.alphas[m - k + j] if j < k else w.alphas[j - k]
    return T


def build_T(w):
    """The full sweep ``T = T_m ... T_1``."""
    T = build_Tk(w, 1)
    for k in range(2, w.m + 1):
        T = mx.matmul(build_Tk(w, k), T)
    return T


@dataclass(frozen=True)
class ShiftMatrices:
    """Cyclic shifts: ``R e_i = e_{i-1}`` (with ``e_0 = e_m``) and ``L = R^T``."""

    R: np.ndarray
    L: np.ndarray
    m: int


def shift_matrices(m, exact=True):
    if m < 1:
        raise TooShortError(f"shift dimension must be positive, got {m}")
    R = np.zeros((m, m), dtype=object) if exact else np.zeros((m, m))
    if exact:
        R[:] = Fraction(0)
    one = Fraction(1) if exact else 1.0
    R[0, m - 1] = one
    for i in range(1, m):
        R[i, i - 1] = one
    return ShiftMatrices(R, R.T.copy(), m)


@dataclass(frozen=True)
class ShiftResiduals:
    """Largest entrywise deviation over ``k`` of each identity."""

    single: object  # T_k - R^k A L^(k-1)
    partial: object  # T_k ... T_1 - R^k A^k
    full: object  # T - A^m


def shift_identities(w):
    """Check ``T_k = R^k A L^(k-1)``, ``T_k ... T_1 = R^k A^k`` and ``T = A^m``.

    All three residuals are exactly zero for exact weights.
    """
    m = w.m
    A = build_companion(w)
    sh = shift_matrices(m, exact=w.exact)
    Rk = mx.identity(m, exact=w.exact)
    Lk1 = mx.identity(m, exact=w.exact)  # L^(k-1)
    Ak = mx.identity(m, exact=w.exact)
    prod = None
    single = partial = 0
    for k in range(1, m + 1):
        Rk = mx.matmul(Rk, sh.R)
        Ak = mx.matmul(Ak, A)
        Tk = build_Tk(w, k)
        prod = Tk if prod is None else mx.matmul(Tk, prod)
        single = max(single, mx.sup_norm(Tk - mx.chain(Rk, A, Lk1)))
        partial = max(partial, mx.sup_norm(prod - mx.matmul(Rk, Ak)))
        Lk1 = mx.matmul(Lk1, sh.L)
    full = mx.sup_norm(prod - Ak)
    return ShiftResiduals(single, partial, full)


def t_limit(w):
    """``lim T^n = e lambda^T``; the same matrix as the companion limit."""
    return companion_limit(w)


@dataclass(frozen=True)
class SpecialCaseParams:
    m: int
    gamma: Fraction


def special_weights(m):
    """``alpha_0 = 0`` and the remaining ``m - 1`` weights equal to ``1/(m-1)``."""
    if m < 2:
        raise TooShortError(f"need m >= 2, got {m}")
    g = Fraction(1, m - 1)
    return Weights((Fraction(0),) + (g,) * (m - 1)), SpecialCaseParams(m, g)


def closed_form_T_special(m):
    """Entrywise closed form of the sweep for the special weights.

    ``gamma (1+gamma)^(i-1)`` above the diagonal and
    ``gamma (1+gamma)^(i-1) - gamma (1+gamma)^(i-j)`` on and below it.
    """
    _, params = special_weights(m)
    g = params.gamma
    T = np.empty((m, m), dtype=object)
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            v = g * (1 + g) ** (i - 1)
            if i >= j:
                v -= g * (1 + g) ** (i - j)
            T[i - 1, j - 1] = v
    return T


def _stack_rows(top, m, k):
    # first k rows of `top` above the block [0_{(m-k) x k}  I_{m-k}]
    out = np.full((m, m), Fraction(0), dtype=object)
    out[:k, :] = top[:k, :]
    for r in range(k, m):
        out[r, r] = Fraction(1)
    return out


def closed_form_partial(m, k):
    """``T_k ... T_1`` for the special weights: first ``k`` rows of the
    closed-form sweep, identity rows below."""
    _check_index(k, m)
    return _stack_rows(closed_form_T_special(m), m, k)


def closed_form_companion_power(m, k):
    """``A^k`` for the special weights: the shift block ``[0  I_{m-k}]`` on
    top, the first ``k`` rows of the closed-form sweep below."""
    _check_index(k, m)
    T = closed_form_T_special(m)
    out = np.full((m, m), Fraction(0), dtype=object)
    for r in range(m - k):
        out[r, k + r] = Fraction(1)
    out[m - k:, :] = T[:k, :]
    return out
