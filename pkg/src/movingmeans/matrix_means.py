"""Moving arithmetic, harmonic and resolvent means of positive definite
matrices.

Each mean is a Kolmogorov mean with a matrix-valued transform:

=========== ================== =====================
kind        f(X)               f^-1(Z)
=========== ================== =====================
arithmetic  X                  Z
harmonic    X^-1               Z^-1
resolvent   (X + I)^-1         Z^-1 - I
=========== ================== =====================

so the limit is ``f^-1(sum_k lambda_k f(Y_k))``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, NearSingularError, NotSpdError, BadParameterError
from .recurrence import RecurrenceState, iterate_until
from .weights import cumulative, require_hypothesis

SYMMETRY_TOL = 1e-12
COND_LIMIT = 1e14
KINDS = ("arithmetic", "harmonic", "resolvent")


def is_spd(M):
    """Symmetric within ``1e-12`` and admitting a Cholesky factorization."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or not np.all(np.isfinite(M)):
        return False
    if np.max(np.abs(M - M.T), initial=0.0) > SYMMETRY_TOL:
        return False
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return False
    return True


def require_spd(M, what="matrix"):
    if not is_spd(M):
        raise NotSpdError(f"{what} is not symmetric positive definite")
    return np.asarray(M, dtype=float)


def spd_inverse(M):
    """Inverse of an SPD matrix, symmetrized; rejects condition numbers
    above ``1e14``."""
    M = require_spd(M)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NearSingularError(f"condition number {cond:.3e} exceeds {COND_LIMIT:.0e}")
    X = np.linalg.inv(M)
    return 0.5 * (X + X.T)


def _transforms(kind, n):
    I = np.eye(n)
    if kind == "arithmetic":
        return (lambda X: X), (lambda Z: Z)
    if kind == "harmonic":
        return spd_inverse, spd_inverse
    if kind == "resolvent":
        return (lambda X: spd_inverse(X + I)), (lambda Z: spd_inverse(Z) - I)
    raise BadParameterError(f"unknown matrix mean {kind!r}; expected one of {KINDS}")


def _validate(w, initial):
    mats = [np.asarray(Y, dtype=float) for Y in initial]
    if len(mats) != w.m:
        raise DimensionMismatchError(f"expected {w.m} initial matrices, got {len(mats)}")
    n = mats[0].shape
    for k, Y in enumerate(mats):
        if Y.shape != n:
            raise DimensionMismatchError(f"initial matrix {k} has shape {Y.shape}, expected {n}")
        require_spd(Y, f"initial matrix {k}")
    return mats


def closed_form_matrix_limit(kind, w, initial):
    """``f^-1(sum_k lambda_k f(Y_k))`` for the chosen kind."""
    require_hypothesis(w)
    mats = _validate(w, initial)
    f, finv = _transforms(kind, mats[0].shape[0])
    lam = [float(x) for x in cumulative(w).lam]
    acc = sum(l * f(Y) for l, Y in zip(lam, mats))
    return finv(0.5 * (acc + acc.T))


@dataclass
class MatrixMeanResult:
    kind: str
    limit: np.ndarray
    iterated_limit: np.ndarray | None
    iterations: int
    final_residual: float
    diagnosis: str
    iterates: list = field(default_factory=list, repr=False)

    @property
    def discrepancy(self):
        """Frobenius distance between iterated and closed-form limits."""
        if self.iterated_limit is None:
            return None
        return float(np.linalg.norm(self.iterated_limit - self.limit))


def moving_matrix_mean(kind, w, initial, tol=1e-10, max_iter=100_000):
    """Iterate a moving matrix mean and compare with its closed-form limit.

    The arithmetic mean runs directly on flattened matrices; the harmonic and
    resolvent means run on the transformed matrices and map every term back.
    Every iterate is checked for positive definiteness.
    """
    limit = closed_form_matrix_limit(kind, w, initial)
    mats = _validate(w, initial)
    n = mats[0].shape[0]
    if kind == "arithmetic":
        res = iterate_until(RecurrenceState(mats), w, tol=tol, max_iter=max_iter, record=True)
        iterates = res.trace
        for k, Y in enumerate(iterates[w.m:], start=w.m):
            require_spd(0.5 * (Y + Y.T), f"iterate {k}")
        return MatrixMeanResult(kind, limit, res.limit, res.iterations,
                                res.final_residual, res.diagnosis, iterates)

    f, finv = _transforms(kind, n)
    state = RecurrenceState([f(Y) for Y in mats])
    rot = state.rotated(w.as_float())
    window = list(mats)
    iterates = list(mats)
    it = 0
    while True:
        stack = np.array(window)
        diam = float(np.max(stack.max(axis=0) - stack.min(axis=0)))
        if diam < tol:
            return MatrixMeanResult(kind, limit, window[-1], it, diam, "converged", iterates)
        if it >= max_iter:
            return MatrixMeanResult(kind, limit, None, it, diam, "max_iter", iterates)
        z = state.advance(rot).reshape(n, n)
        Y = finv(0.5 * (z + z.T))
        require_spd(Y, f"iterate {len(iterates)}")
        window = window[1:] + [Y]
        iterates.append(Y)
        it += 1
