import numpy as np
import pytest
from hypothesis import given, strategies as st

from movingmeans import (
    RecurrenceState,
    builtin_generator,
    custom_generator,
    iterate_kolmogorov,
    iterate_until,
    kolmogorov_limit,
    kolmogorov_step,
    limit_functional,
    new_weights,
    step,
)
from movingmeans.errors import BadParameterError, DimensionMismatchError, DomainViolationError
from movingmeans.kolmogorov import NONNEGATIVE, POSITIVE, REALS, parse_generator

from conftest import float_weights, random_weights

EQ = new_weights([0.5, 0.5])


def test_builtin_maps():
    g = builtin_generator("identity")
    assert g.forward(3.5) == 3.5 and g.inverse(-2.0) == -2.0 and g.domain == REALS
    g = builtin_generator("log")
    assert g.forward(np.e) == pytest.approx(1.0) and g.domain == POSITIVE
    g = builtin_generator("power", 2)
    assert g.forward(3.0) == 9.0 and g.inverse(16.0) == 4.0 and g.domain == NONNEGATIVE
    assert builtin_generator("power", -1).domain == POSITIVE
    assert builtin_generator("reciprocal").inverse(4.0) == 0.25


def test_bad_parameters():
    with pytest.raises(BadParameterError):
        builtin_generator("power", 0)
    with pytest.raises(BadParameterError):
        builtin_generator("power")
    with pytest.raises(BadParameterError):
        builtin_generator("cosh")


def test_parse_generator():
    assert parse_generator("power(2)").parameter == 2.0
    assert parse_generator("power:-0.5").parameter == -0.5
    assert parse_generator("geometric").name == "log"
    assert parse_generator("harmonic").name == "reciprocal"
    assert parse_generator("arithmetic").name == "identity"


def test_custom_generator_checks():
    g = custom_generator("cube", lambda x: x**3, np.cbrt)
    assert g.forward(2.0) == 8.0
    with pytest.raises(BadParameterError):
        custom_generator("square", lambda x: x * x, np.sqrt)  # not injective on the reals
    with pytest.raises(BadParameterError):
        custom_generator("broken", np.exp, lambda y: y)


def test_step_examples():
    assert kolmogorov_step(builtin_generator("log"), EQ, [1.0, 8.0]) == pytest.approx(np.sqrt(8), rel=1e-15)
    assert kolmogorov_step(builtin_generator("reciprocal"), EQ, [1.0, 0.5]) == pytest.approx(2 / 3, rel=1e-15)


def test_domain_checked_eagerly():
    with pytest.raises(DomainViolationError):
        kolmogorov_step(builtin_generator("log"), EQ, [1.0, -1.0])
    with pytest.raises(DomainViolationError):
        iterate_kolmogorov(builtin_generator("reciprocal"), EQ, [0.0, 1.0])
    with pytest.raises(DimensionMismatchError):
        kolmogorov_limit(builtin_generator("log"), EQ, [1.0, 2.0, 3.0])


def test_limit_examples():
    assert kolmogorov_limit(builtin_generator("log"), EQ, [1.0, 8.0]) == pytest.approx(4.0, abs=1e-12)
    assert kolmogorov_limit(builtin_generator("identity"), EQ, [0.0, 3.0]) == pytest.approx(2.0, abs=1e-15)
    assert kolmogorov_limit(builtin_generator("reciprocal"), EQ, [1.0, 0.5]) == pytest.approx(0.6, abs=1e-15)


def test_iterated_geometric():
    run = iterate_kolmogorov(builtin_generator("log"), EQ, [1.0, 8.0])
    assert run.diagnosis == "converged"
    assert abs(run.limit - 4.0) < 1e-9


@pytest.mark.parametrize("name", ["identity", "log", "reciprocal", "power:3", "power:-2", "power:0.5"])
def test_iterated_matches_closed_form(name, rng):
    gen = parse_generator(name)
    for _ in range(15):
        m = int(rng.integers(2, 7))
        w = random_weights(rng, m, last_positive=True)
        y = rng.uniform(0.05, 20, m)
        run = iterate_kolmogorov(gen, w, y, tol=1e-12)
        assert abs(run.limit - kolmogorov_limit(gen, w, y)) < 1e-8
        assert y.min() - 1e-12 <= run.limit <= y.max() + 1e-12


@given(float_weights(last_positive=True), st.integers(0, 2**32 - 1))
def test_limit_is_conjugated_functional(w, seed):
    y = np.random.default_rng(seed).uniform(0.1, 10, w.m)
    g = builtin_generator("log")
    assert kolmogorov_limit(g, w, y) == float(np.exp(limit_functional(w, np.log(y))))


@given(float_weights(), st.integers(0, 2**32 - 1))
def test_identity_matches_recurrence_bitwise(w, seed):
    y = np.random.default_rng(seed).uniform(-5, 5, w.m)
    g = builtin_generator("identity")
    assert kolmogorov_step(g, w, y) == step(RecurrenceState(y), w)


@given(float_weights(last_positive=True), st.integers(0, 2**32 - 1))
def test_identity_iteration_matches_recurrence(w, seed):
    y = np.random.default_rng(seed).uniform(-5, 5, w.m)
    a = iterate_kolmogorov(builtin_generator("identity"), w, y, tol=1e-11)
    b = iterate_until(RecurrenceState(y), w, tol=1e-11)
    assert a.limit == b.limit and a.iterations == b.iterations


def test_record_iterates():
    run = iterate_kolmogorov(builtin_generator("log"), EQ, [1.0, 8.0], record=True)
    assert run.iterates[:2] == [1.0, 8.0]
    assert run.iterates[2] == pytest.approx(np.sqrt(8))
    assert len(run.iterates) == run.iterations + 2
