"""Characteristic polynomials, their roots, and limits of matrix powers."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _matrix as mx
from .errors import DegeneratePairingError, NoConvergenceError

ROOT_CLUSTER_TOL = 1e-7
PAIRING_TOL = 1e-14


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with coefficients in ascending degree order."""

    coefficients: tuple

    def __post_init__(self):
        c = tuple(self.coefficients)
        if not c:
            raise ValueError("empty coefficient list")
        if c[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def as_complex(self):
        return np.array([complex(c) for c in self.coefficients])


def characteristic_polynomial(w):
    """``p(x) = x^m - alpha_{m-1} x^{m-1} - ... - alpha_1 x - alpha_0``."""
    one = Fraction(1) if w.exact else 1.0
    return Polynomial(tuple(-a for a in w.alphas) + (one,))


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    residual: float
    iterations: int

    def clusters(self, tol=ROOT_CLUSTER_TOL):
        """Group roots closer than ``tol``; returns ``[(center, multiplicity)]``."""
        groups = []
        for z in self.roots:
            for g in groups:
                if abs(g[0] / len(g[1]) - z) <= tol:
                    g[0] += z
                    g[1].append(z)
                    break
            else:
                groups.append([z, [z]])
        return [(g[0] / len(g[1]), len(g[1])) for g in groups]

    def multiplicity(self, z0, tol=ROOT_CLUSTER_TOL):
        return int(np.sum(np.abs(self.roots - z0) <= tol))


def _horner_with_derivative(c, z):
    # c descending, z array
    p = np.full_like(z, c[0])
    dp = np.zeros_like(z)
    for a in c[1:]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _aberth(monic_desc, max_iter, tol):
    n = len(monic_desc) - 1
    radius = 1.0 + np.max(np.abs(monic_desc[1:]))
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z = radius * np.exp(1j * angles)
    it = 0
    for it in range(1, max_iter + 1):
        p, dp = _horner_with_derivative(monic_desc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(p == 0, 0.0, p / dp)
            step = np.where(p == 0, 0.0, ratio / (1.0 - ratio * s))
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            break
    return z, it


def roots(p, max_iter=200, tol=1e-12):
    """All complex roots of ``p`` by Aberth-Ehrlich simultaneous iteration.

    Exact zero roots (vanishing low-order coefficients) are split off first.
    Raises :class:`NoConvergenceError` when the residual
    ``max |p(root)|`` exceeds ``1e-9 * max(1, max |coefficient|)``.
    """
    if p.degree < 1:
        raise ValueError("roots of a constant polynomial are undefined")
    c = p.as_complex()
    zeros = 0
    while c[zeros] == 0:
        zeros += 1
    reduced = c[zeros:]
    desc = reduced[::-1] / reduced[-1]
    n = len(desc) - 1
    if n == 0:
        found = np.array([], dtype=complex)
        iters = 0
    elif n == 1:
        found = np.array([-desc[1]])
        iters = 0
    else:
        found, iters = _aberth(desc, max_iter, tol)
    all_roots = np.concatenate([np.zeros(zeros, dtype=complex), found])
    cd = c[::-1]
    vals = np.zeros_like(all_roots)
    for a in cd:
        vals = vals * all_roots + a
    residual = float(np.max(np.abs(vals))) if len(all_roots) else 0.0
    bound = 1e-9 * max(1.0, float(np.max(np.abs(c))))
    if residual > bound:
        raise NoConvergenceError(
            f"root residual {residual:.3e} exceeds {bound:.3e} after {iters} iterations",
            best=all_roots,
            residual=residual,
        )
    order = np.lexsort((all_roots.imag, -np.abs(all_roots)))
    return RootSet(all_roots[order], residual, iters)


@dataclass(frozen=True)
class PowerLimitResult:
    """Outcome of :func:`power_limit`.

    ``limit`` is ``None`` when the powers do not converge; ``diagnosis`` is
    one of ``converged``, ``oscillating`` (with ``period``), ``divergent`` or
    ``no-convergence``.
    """

    limit: np.ndarray | None
    diagnosis: str
    squarings: int
    period: int | None = None
    projector_residual: float | None = None

    @property
    def exists(self):
        return self.limit is not None


def _rounding_floor(P, k):
    # B^(2^k) carries about 2^k * n * eps of accumulated rounding: eigenvalue
    # 1 of a float matrix is only 1 up to eps, and raising it to the power N
    # multiplies that error by N
    n = P.shape[0]
    return 2.0**k * n * np.finfo(float).eps * max(1.0, float(np.max(np.abs(P))))


def power_limit(B, tol=1e-12, max_squarings=64, confirm=2):
    """Limit of ``B^n`` as ``n -> infinity``, if it exists.

    The subsequence ``B^(2^k)`` is formed by repeated squaring until
    successive terms differ by less than ``tol`` (sup-norm) ``confirm`` times
    in a row, or until a squared power repeats an earlier one (a cycle).  The candidate ``L`` is accepted only if ``L B = B L = L`` and
    ``L^2 = L`` within ``10 * tol``.  Both tests are widened by the rounding
    accumulated over ``2^k`` implicit multiplications, which otherwise makes
    slowly converging powers unverifiable at ``tol = 1e-12``; otherwise a period ``p <= n`` with
    ``L B^p = L`` is searched for and reported.
    """
    B = mx.to_float(B)
    n = B.shape[0]
    P = B.copy()
    seen = [P]
    stable = 0
    k = 0
    converged = False
    for k in range(1, max_squarings + 1):
        P2 = P @ P
        if not np.all(np.isfinite(P2)) or np.max(np.abs(P2)) > 1e100:
            return PowerLimitResult(None, "divergent", k)
        diff = np.max(np.abs(P2 - P))
        P = P2
        stable = stable + 1 if diff < tol + _rounding_floor(P, k) else 0
        if stable >= confirm:
            converged = True
            break
        # a squared power returning to an earlier one (not its predecessor)
        # means the powers cycle; squaring further only accumulates rounding
        if stable == 0 and any(
            np.max(np.abs(P - Q)) < tol + _rounding_floor(P, k) for Q in seen[:-1]
        ):
            break
        seen.append(P)

    check = 10 * (tol + _rounding_floor(P, k))
    res = max(
        np.max(np.abs(P @ B - P)),
        np.max(np.abs(B @ P - P)),
        np.max(np.abs(P @ P - P)),
    )
    if converged and res <= check:
        return PowerLimitResult(P, "converged", k, projector_residual=float(res))

    Bp = np.eye(n)
    for p in range(1, n + 1):
        Bp = Bp @ B
        if np.max(np.abs(P @ Bp - P)) <= check:
            if p > 1:
                return PowerLimitResult(None, "oscillating", k, period=p)
            break
    return PowerLimitResult(None, "no-convergence", k)


def rank_one_limit(x, y):
    """``x y^T / (y^T x)``: the power limit for a simple dominant eigenvalue 1
    with right eigenvector ``x`` and left eigenvector ``y``."""
    x = np.asarray(x)
    y = np.asarray(y)
    if mx.is_exact(x) and mx.is_exact(y):
        pairing = sum(a * b for a, b in zip(y, x))
        if pairing == 0:
            raise DegeneratePairingError("y^T x = 0")
        out = mx.outer(x, y)
        for idx in np.ndindex(out.shape):
            out[idx] = out[idx] / pairing
        return out
    x = x.astype(float)
    y = y.astype(float)
    pairing = float(y @ x)
    if abs(pairing) <= PAIRING_TOL:
        raise DegeneratePairingError(f"y^T x = {pairing} is numerically zero")
    return np.outer(x, y) / pairing
