from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from movingmeans import Weights

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

F = Fraction


@st.composite
def rational_weights(draw, min_m=2, max_m=8, last_positive=False):
    m = draw(st.integers(min_m, max_m))
    nums = draw(st.lists(st.integers(0, 9), min_size=m, max_size=m))
    if last_positive and nums[-1] == 0:
        nums[-1] = 1
    if sum(nums) == 0:
        nums[-1] = 1
    total = sum(nums)
    return Weights(tuple(F(k, total) for k in nums))


@st.composite
def float_weights(draw, min_m=2, max_m=8, last_positive=False):
    m = draw(st.integers(min_m, max_m))
    raw = draw(st.lists(st.floats(0, 1), min_size=m, max_size=m))
    mask = draw(st.lists(st.booleans(), min_size=m, max_size=m))
    a = np.array(raw) * np.array(mask)
    if last_positive or a.sum() < 1e-3:
        a[-1] += 0.5
    return Weights(tuple(a / a.sum()))


def random_weights(rng, m, last_positive=False, density=0.7):
    a = rng.random(m) * (rng.random(m) < density)
    if last_positive or a.sum() == 0:
        a[-1] = rng.random() + 0.05
    return Weights(tuple(a / a.sum()))


def random_rational_weights(rng, m, hi=9):
    nums = [int(k) for k in rng.integers(0, hi + 1, m)]
    if sum(nums) == 0:
        nums[int(rng.integers(m))] = 1
    total = sum(nums)
    return Weights(tuple(F(k, total) for k in nums))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
