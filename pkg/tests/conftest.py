import numpy as np
import pytest
from hypothesis import strategies as st

from arsmooth import OffCenterWindow, TaperedWindow, Theta


def random_half(rng, k, center_free=False):
    """Non-increasing nonnegative half profile of length k + 1."""
    steps = rng.exponential(size=k + 1)
    if k and rng.random() < 0.3:
        # a zero step makes a flat stretch in the profile
        steps[rng.integers(0, k)] = 0.0
    half = np.cumsum(steps[::-1])[::-1]
    if center_free:
        half[0] = 0.0
        total = 2 * half[1:].sum()
    else:
        total = half[0] + 2 * half[1:].sum()
    return half / total


def random_tapered(rng, n, k=None):
    k = rng.integers(0, (n - 1) // 2 + 1) if k is None else k
    return TaperedWindow.from_half(random_half(rng, k))


def random_offcenter(rng, n, k=None):
    k = rng.integers(1, (n - 1) // 2 + 1) if k is None else k
    return OffCenterWindow.from_half(random_half(rng, k, center_free=True))


def random_theta(rng, n, a_mass=None, flat_center=False):
    """Random weights on the simplex A + B = 1 with tapered p and q."""
    kmax = (n - 1) // 2
    kp = rng.integers(1 if flat_center else 0, kmax + 1)
    half = random_half(rng, kp)
    if flat_center and kp >= 1:
        half[0] = half[1]
        half /= half[0] + 2 * half[1:].sum()
    p = TaperedWindow.from_half(half)
    q = random_offcenter(rng, n)
    a = rng.uniform(0.05, 1.0) if a_mass is None else a_mass
    return Theta.from_shapes(p.weights, q.weights, a)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@st.composite
def signals(draw, min_n=3, max_n=40):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return np.random.default_rng(seed).normal(size=n)


@st.composite
def signal_and_theta(draw, min_n=3, max_n=40):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return rng.normal(size=n), random_theta(rng, n)


@st.composite
def tapered_windows(draw, n):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tapered(np.random.default_rng(seed), n)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
