import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqsense.frames import (OrthogonalCurrents, PhaseCurrents, SynchronousCurrents, clarke,
                            inverse_park_abc, park, park_abc)

finite = st.floats(-1e3, 1e3, allow_nan=False)
angle = st.floats(-20.0, 20.0, allow_nan=False)


@pytest.mark.parametrize("abc, expected", [
    ((1.0, -0.5, -0.5), (1.0, 0.0, 0.0)),
    ((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)),
    ((1.0, 1.0, 1.0), (0.0, 0.0, 1.0)),
])
def test_clarke_examples(abc, expected):
    out = clarke(PhaseCurrents(*abc))
    assert (out.alpha, out.beta, out.zero) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("theta, expected", [(0.0, (1.0, 0.0)), (math.pi / 2, (0.0, -1.0))])
def test_park_examples(theta, expected):
    out = park(OrthogonalCurrents(1.0, 0.0), theta)
    assert (out.d, out.q) == pytest.approx(expected, abs=1e-15)


@given(angle)
def test_balanced_set_is_stationary(theta):
    abc = PhaseCurrents(math.cos(theta), math.cos(theta - 2 * math.pi / 3),
                        math.cos(theta + 2 * math.pi / 3))
    dq = park_abc(abc, theta)
    assert dq.d == pytest.approx(1.0, abs=1e-12)
    assert dq.q == pytest.approx(0.0, abs=1e-12)
    assert dq.zero == pytest.approx(0.0, abs=1e-12)


def test_park_abc_examples():
    dq = park_abc(PhaseCurrents(1.0, -0.5, -0.5), 0.0)
    assert (dq.d, dq.q) == pytest.approx((1.0, 0.0), abs=1e-15)
    dq = park_abc(PhaseCurrents(0.0, 0.0, 0.0), 1.234)
    assert (dq.d, dq.q) == (0.0, 0.0)


@given(st.floats(-10, 10, allow_nan=False), angle)
def test_single_phase_constant(delta, theta):
    # symbolic composition: d = 2/3 delta cos(theta), q = -2/3 delta sin(theta)
    dq = park_abc(PhaseCurrents(delta, 0.0, 0.0), theta)
    assert dq.d == pytest.approx(2 / 3 * delta * math.cos(theta), abs=1e-12)
    assert dq.q == pytest.approx(-2 / 3 * delta * math.sin(theta), abs=1e-12)


def test_inverse_examples():
    abc = inverse_park_abc(SynchronousCurrents(1.0, 0.0), 0.0)
    assert (abc.a, abc.b, abc.c) == pytest.approx((1.0, -0.5, -0.5), abs=1e-15)
    abc = inverse_park_abc(SynchronousCurrents(0.0, 0.0), 2.0)
    assert (abc.a, abc.b, abc.c) == (0.0, 0.0, 0.0)


def test_round_trip_random():
    rng = np.random.default_rng(7)
    dq = SynchronousCurrents(*rng.uniform(-100, 100, (2, 5000)))
    theta = rng.uniform(-50, 50, 5000)
    back = park_abc(inverse_park_abc(dq, theta), theta)
    assert np.max(np.abs(back.d - dq.d)) <= 1e-12
    assert np.max(np.abs(back.q - dq.q)) <= 1e-12
    assert np.max(np.abs(back.zero)) <= 1e-12


@given(finite, finite, angle)
def test_park_is_isometry(alpha, beta, theta):
    dq = park(OrthogonalCurrents(alpha, beta), theta)
    assert math.hypot(dq.d, dq.q) == pytest.approx(math.hypot(alpha, beta), rel=1e-12, abs=1e-9)


@given(finite, finite, finite, finite, finite, finite, st.floats(-5, 5), angle)
def test_linearity(a1, b1, c1, a2, b2, c2, k, theta):
    x = PhaseCurrents(a1, b1, c1)
    y = PhaseCurrents(a2, b2, c2)
    combo = PhaseCurrents(a1 + k * a2, b1 + k * b2, c1 + k * c2)
    lhs = park_abc(combo, theta)
    rx, ry = park_abc(x, theta), park_abc(y, theta)
    assert lhs.d == pytest.approx(rx.d + k * ry.d, abs=1e-8)
    assert lhs.q == pytest.approx(rx.q + k * ry.q, abs=1e-8)
    assert lhs.zero == pytest.approx(rx.zero + k * ry.zero, abs=1e-8)
