from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from movingmeans import RecurrenceState, iterate_until, limit_functional, new_weights, step
from movingmeans.errors import DimensionMismatchError
from movingmeans.recurrence import write_trace_csv

from conftest import float_weights, random_weights


def test_step_examples():
    assert step(RecurrenceState([0.0, 3.0]), new_weights([0.5, 0.5])) == 1.5
    assert step(RecurrenceState([4.0, 4.0, 4.0]), new_weights([0.2, 0.3, 0.5])) == 4.0
    assert step(RecurrenceState([5.0, 9.0]), new_weights([0, 1])) == 9.0


def test_step_exact_and_window_shift():
    s = RecurrenceState([F(0), F(3)])
    w = new_weights([F(1, 2), F(1, 2)])
    assert step(s, w) == F(3, 2)
    assert step(s, w) == F(9, 4)
    assert [y[0] for y in s.history] == [F(3, 2), F(9, 4)]
    assert s.step_count == 2


def test_step_on_vectors_and_matrices():
    w = new_weights([0.25, 0.75])
    s = RecurrenceState([np.eye(2), 3 * np.eye(2)])
    np.testing.assert_array_equal(step(s, w), 2.5 * np.eye(2))
    with pytest.raises(DimensionMismatchError):
        RecurrenceState([np.zeros(2), np.zeros(3)])
    with pytest.raises(DimensionMismatchError):
        step(RecurrenceState([0.0, 1.0, 2.0]), w)


def test_iterate_examples():
    r = iterate_until(RecurrenceState([0.0, 3.0]), new_weights([0.5, 0.5]), tol=1e-10)
    assert r.diagnosis == "converged"
    assert abs(r.limit - 2) < 1e-10
    r = iterate_until(RecurrenceState([0.0, 1.0]), new_weights([1, 0]), max_iter=100)
    assert r.diagnosis == "oscillating" and r.period == 2 and r.limit is None
    r = iterate_until(RecurrenceState([7.0, 7.0, 7.0]), new_weights([0.2, 0.3, 0.5]))
    assert r.diagnosis == "converged" and r.iterations == 0 and r.limit == 7.0


def test_iterate_max_iter():
    r = iterate_until(RecurrenceState([0.0, 1.0]), new_weights([0.5, 0.5]), tol=1e-300, max_iter=5)
    assert r.diagnosis == "max_iter" and r.iterations == 5


def test_iterate_trace(tmp_path):
    r = iterate_until(RecurrenceState([0.0, 3.0]), new_weights([0.5, 0.5]), record=True)
    assert r.trace[:4] == [0.0, 3.0, 1.5, 2.25]
    path = tmp_path / "t.csv"
    write_trace_csv(path, r.trace)
    lines = path.read_text().splitlines()
    assert lines[0] == "step,x0" and lines[3] == "2,1.5"


@given(float_weights(), st.integers(0, 2**32 - 1))
def test_convex_hull_confinement(w, seed):
    y = np.random.default_rng(seed).uniform(-10, 10, w.m)
    s = RecurrenceState(y)
    for _ in range(60):
        v = step(s, w)
        assert y.min() <= v <= y.max()


@given(float_weights(last_positive=True), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_limit_matches_formula_vectors(w, dim, seed):
    y = np.random.default_rng(seed).uniform(-10, 10, (w.m, dim))
    r = iterate_until(RecurrenceState(list(y)), w, tol=1e-12)
    np.testing.assert_allclose(r.limit, limit_functional(w, y), atol=1e-8)


def test_limit_linear_in_data(rng):
    for _ in range(20):
        m = int(rng.integers(2, 7))
        w = random_weights(rng, m, last_positive=True)
        y, z = rng.normal(size=m), rng.normal(size=m)
        lim = lambda d: iterate_until(RecurrenceState(d), w, tol=1e-13).limit
        assert lim(y + z) == pytest.approx(lim(y) + lim(z), abs=1e-10)
        assert lim(3 * y) == pytest.approx(3 * lim(y), abs=1e-10)
