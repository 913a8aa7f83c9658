"""Circulant matrices built from the weights and the limit of their powers.

``C`` has first row ``(alpha_0, ..., alpha_{m-1})`` and each further row is
the previous one rotated right.  ``C`` is bistochastic and ``C^n`` converges
exactly when ``gcd(U + {m}) = gcd((U - U) + {m})``, where ``U`` collects the
indices ``k in 1..m`` with ``alpha_k > 0`` (``alpha_m = alpha_0``).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

import numpy as np


@dataclass(frozen=True)
class CirculantSpec:
    C: np.ndarray
    support: tuple
    gcd_period: int  # gcd(U + {m})
    diff_gcd: int  # gcd((U - U) + {m})
    exact: bool = False

    @property
    def m(self):
        return self.C.shape[0]

    @property
    def limit_exists(self):
        return self.gcd_period == self.diff_gcd


def build_circulant(w):
    m = w.m
    C = np.empty((m, m), dtype=object if w.exact else float)
    for i in range(m):
        for j in range(m):
            C[i, j] = w.alphas[(j - i) % m]
    U = tuple(k for k in range(1, m + 1) if w.alpha(k) > 0)
    g = reduce(gcd, U, m)
    diffs = [abs(a - b) for a in U for b in U]
    dg = reduce(gcd, diffs, m)
    return CirculantSpec(C, U, g, dg, w.exact)


def krafft_limit(spec):
    """``lim C^n`` when it exists, else ``None``.

    The limit has ``gcd_period / m`` where ``i = j (mod gcd_period)`` and zeros
    elsewhere: the average over each residue class.
    """
    if not spec.limit_exists:
        return None
    m, g = spec.m, spec.gcd_period
    if spec.exact:
        v, z = Fraction(g, m), Fraction(0)
        L = np.empty((m, m), dtype=object)
    else:
        v, z = g / m, 0.0
        L = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            L[i, j] = v if (i - j) % g == 0 else z
    return L
