"""Dense square-matrix helpers shared by the linear-algebra modules.

Matrices are plain numpy arrays.  A float64 array is the floating path; an
``object`` array whose entries are :class:`fractions.Fraction` (or ``int``)
is the exact rational path.  Every helper here accepts both and keeps exact
inputs exact.
"""

from fractions import Fraction
from math import lcm

import numpy as np


def is_exact(M):
    return np.asarray(M).dtype == object


def identity(n, exact=False):
    if exact:
        I = np.full((n, n), Fraction(0), dtype=object)
        for i in range(n):
            I[i, i] = Fraction(1)
        return I
    return np.eye(n)


def ones(n, exact=False):
    """The all-ones vector ``e``."""
    if exact:
        return np.array([Fraction(1)] * n, dtype=object)
    return np.ones(n)


def unit(n, k, exact=False):
    """Standard unit vector ``e_k``; ``k`` is 1-based, as in ``e_1, ..., e_m``."""
    if not 1 <= k <= n:
        raise IndexError(f"unit vector index {k} outside 1..{n}")
    v = np.array([Fraction(0)] * n, dtype=object) if exact else np.zeros(n)
    v[k - 1] = Fraction(1) if exact else 1.0
    return v


def to_float(M):
    return np.asarray(M, dtype=float)


def _scaled_integers(M):
    # common denominator d and the integer array d*M
    d = 1
    for x in M.flat:
        d = lcm(d, x.denominator)
    ints = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        ints[idx] = x.numerator * (d // x.denominator)
    return d, ints


def matmul(A, B):
    """Matrix (or matrix-vector) product, exact when both factors are exact.

    Exact products are formed on integer arrays scaled by a common
    denominator, which is far cheaper than summing Fractions entrywise.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if is_exact(A) and is_exact(B):
        da, ia = _scaled_integers(A)
        db, ib = _scaled_integers(B)
        P = ia @ ib
        den = da * db
        out = np.empty(P.shape, dtype=object)
        for idx, x in np.ndenumerate(P):
            out[idx] = Fraction(x, den)
        return out
    return to_float(A) @ to_float(B)


def chain(*factors):
    """Left-to-right product ``F1 @ F2 @ ... @ Fk``."""
    out = factors[0]
    for F in factors[1:]:
        out = matmul(out, F)
    return out


def matpow(M, k):
    M = np.asarray(M)
    if k < 0:
        raise ValueError("negative matrix power")
    result = identity(M.shape[0], exact=is_exact(M))
    base = M
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


def sup_norm(M):
    """Largest absolute entry (exact for exact input)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if is_exact(M):
        return max(abs(x) for x in M.flat)
    return float(np.max(np.abs(M)))


def is_stochastic(M, tol=1e-12):
    """Nonnegative entries and unit row sums (exactly, for exact input)."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    if is_exact(M):
        return all(x >= 0 for x in M.flat) and all(sum(row) == 1 for row in M)
    return bool(np.all(M >= -tol) and np.all(np.abs(M.sum(axis=1) - 1.0) <= tol))


def is_bistochastic(M, tol=1e-12):
    M = np.asarray(M)
    return is_stochastic(M, tol) and is_stochastic(M.T, tol)


def outer(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    if is_exact(x) or is_exact(y):
        out = np.empty((len(x), len(y)), dtype=object)
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                out[i, j] = xi * yj
        return out
    return np.outer(x, y)


def matrices_equal(A, B):
    """Exact entrywise equality (for exact arrays) or bitwise equality."""
    A = np.asarray(A)
    B = np.asarray(B)
    return A.shape == B.shape and all(a == b for a, b in zip(A.flat, B.flat))
