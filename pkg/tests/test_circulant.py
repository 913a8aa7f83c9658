from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from movingmeans import build_circulant, krafft_limit, new_weights, power_limit
from movingmeans import _matrix as mx

from conftest import float_weights, random_weights, rational_weights

H = F(1, 2)


def test_build_examples():
    s = build_circulant(new_weights([H, H]))
    assert s.C.tolist() == [[H, H], [H, H]]
    assert s.support == (1, 2) and s.gcd_period == 1
    s = build_circulant(new_weights([0, 1]))
    assert s.C.tolist() == [[0, 1], [1, 0]]
    assert s.support == (1,) and s.gcd_period == 1 and s.diff_gcd == 2
    s = build_circulant(new_weights([1, 0, 0, 0]))
    assert mx.matrices_equal(s.C, mx.identity(4, exact=True))


@given(rational_weights())
def test_rows_rotate_and_bistochastic(w):
    C = build_circulant(w).C
    assert mx.is_bistochastic(C)
    for i in range(1, w.m):
        assert list(C[i]) == list(np.roll(C[i - 1], 1))


def test_limit_examples():
    L = krafft_limit(build_circulant(new_weights([H, H])))
    assert L.tolist() == [[H, H], [H, H]]
    assert krafft_limit(build_circulant(new_weights([0, 1]))) is None
    r = power_limit(build_circulant(new_weights([0.0, 1.0])).C)
    assert r.diagnosis == "oscillating" and r.period == 2


def test_period_classes():
    # support {2, 4} with m = 6: gcd 2, differences give gcd 2, limit averages residue classes
    w = new_weights([F(1, 2), 0, F(1, 4), 0, F(1, 4), 0])
    s = build_circulant(w)
    assert s.support == (2, 4, 6) and s.gcd_period == 2 and s.limit_exists
    L = krafft_limit(s)
    for i in range(6):
        for j in range(6):
            assert L[i, j] == (F(1, 3) if (i - j) % 2 == 0 else 0)


@pytest.mark.parametrize("m", range(2, 9))
def test_adjacent_support_projects_onto_diagonal(m):
    rng = np.random.default_rng(m)
    for i in range(1, m):
        a = np.zeros(m)
        a[i % m] = rng.random() + 0.1
        a[(i + 1) % m] = rng.random() + 0.1
        w = new_weights(a / a.sum())
        r = power_limit(build_circulant(w).C)
        np.testing.assert_allclose(r.limit, np.full((m, m), 1 / m), atol=1e-10)
        np.testing.assert_allclose(krafft_limit(build_circulant(w)), np.full((m, m), 1 / m), atol=1e-15)


def test_verdict_agrees_with_powers(rng):
    for _ in range(300):
        m = int(rng.integers(2, 9))
        w = random_weights(rng, m, density=float(rng.uniform(0.2, 0.8)))
        s = build_circulant(w)
        r = power_limit(s.C)
        assert r.exists == s.limit_exists, w.alphas
        if r.exists:
            np.testing.assert_allclose(r.limit, krafft_limit(s), atol=1e-9)


@given(float_weights(), st.integers(0, 2**32 - 1))
def test_nonexpansive(w, seed):
    C = build_circulant(w).C
    rng = np.random.default_rng(seed)
    for _ in range(5):
        x, y = rng.normal(size=(2, w.m))
        assert np.linalg.norm(C @ x - C @ y) <= np.linalg.norm(x - y) + 1e-12


@given(rational_weights())
def test_fixed_space(w):
    s = build_circulant(w)
    d = np.array([F(2, 9)] * w.m, dtype=object)
    assert mx.matrices_equal(mx.matmul(s.C, d), d)
    if s.gcd_period == 1:
        assert np.linalg.matrix_rank(mx.to_float(s.C) - np.eye(w.m), tol=1e-9) == w.m - 1
