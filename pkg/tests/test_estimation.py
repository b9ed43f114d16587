import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqsense.estimation import (GAIN_PULSATION_SCALE, error_constants, estimate_dq_analytic,
                                estimate_dq_oracle, m_igp, m_iop, m_theta, predicted_orders,
                                resolve_gain_scale)
from dqsense.frames import SynchronousCurrents, inverse_park_abc
from dqsense.plant import REFERENCE_MOTOR as M
from dqsense.sensing import CurrentErrorSpec, PositionErrorSpec, PositionHarmonic
from dqsense.spectral import TimeSeries, harmonic_at, spectrum

gain = st.floats(-0.2, 0.2)
offset = st.floats(-2.0, 2.0)
amp = st.floats(-50.0, 50.0)
angle = st.floats(-2 * math.pi, 2 * math.pi)


def oracle(true_dq, theta, theta_hat, spec):
    return estimate_dq_oracle(inverse_park_abc(true_dq, theta), theta_hat, spec)


def test_oracle_identity_chain():
    theta = np.linspace(0, 10, 200)
    est = oracle(SynchronousCurrents(0.0, 21.5), theta, theta, CurrentErrorSpec())
    assert np.allclose(est.d, 0.0, atol=1e-12) and np.allclose(est.q, 21.5, atol=1e-12)


def test_oracle_single_offset():
    theta = np.linspace(0, 10, 200)
    est = oracle(SynchronousCurrents(0.0, 0.0), theta, theta, CurrentErrorSpec(offset_a=1.0))
    assert np.allclose(est.d, 2 / 3 * np.cos(theta), atol=1e-14)
    assert np.allclose(est.q, -2 / 3 * np.sin(theta), atol=1e-14)


@given(st.floats(-0.5, 0.5), amp, amp, angle)
def test_oracle_uniform_gain_scales(g, d, q, theta):
    est = oracle(SynchronousCurrents(d, q), theta, theta, CurrentErrorSpec(g, g, g))
    assert est.d == pytest.approx((1 + g) * d, abs=1e-10)
    assert est.q == pytest.approx((1 + g) * q, abs=1e-10)


def test_m_theta_examples():
    assert np.array_equal(m_theta(0.0), np.eye(2))
    assert np.allclose(m_theta(math.pi / 2), [[0, 1], [-1, 0]], atol=1e-16)
    assert np.allclose(m_theta(0.3) @ m_theta(0.5), m_theta(0.8), atol=1e-15)


@given(st.floats(-100, 100))
def test_rotation_matrices_orthonormal(x):
    for mat in (m_theta(x), m_igp(x, 0.5 * x, 0.1), m_iop(x, -0.7)):
        assert np.allclose(mat @ mat.T, np.eye(2), atol=1e-12)
        assert np.linalg.det(mat) == pytest.approx(1.0, abs=1e-12)


def test_error_constants_examples():
    dec = error_constants(CurrentErrorSpec(0.07, 0.07, 0.07))
    assert dec.K_igp == 0.0 and dec.K_igc == pytest.approx(0.07)
    dec = error_constants(CurrentErrorSpec(offset_a=1.5))
    assert dec.K_iop == pytest.approx(1.0, rel=1e-15)
    dec = error_constants(CurrentErrorSpec())
    assert (dec.K_igc, dec.K_igp, dec.K_iop, dec.phi_igp, dec.phi_iop) == (0, 0, 0, 0, 0)


def test_printed_magnitude_and_resolved_scale():
    dec = error_constants(CurrentErrorSpec(gain_a=0.1))
    assert dec.k_igp_unscaled == pytest.approx(0.1)
    assert dec.K_igp == pytest.approx(0.1 / 3)


@given(gain, gain, gain, offset, offset, offset)
def test_constants_vanish_iff_balanced(ga, gb, gc, oa, ob, oc):
    dec = error_constants(CurrentErrorSpec(ga, gb, gc, oa, ob, oc))
    assert dec.K_igp >= 0 and dec.K_iop >= 0
    assert dec.K_igc == pytest.approx((ga + gb + gc) / 3)
    gain_spread = max(ga, gb, gc) - min(ga, gb, gc)
    offset_spread = max(oa, ob, oc) - min(oa, ob, oc)
    # sqrt(sum x^2 - sum_pairs xy) >= spread / 2 and <= spread
    assert gain_spread / 6 - 1e-12 <= dec.K_igp <= gain_spread / 3 + 1e-12
    assert offset_spread / 3 - 1e-12 <= dec.K_iop <= 2 * offset_spread / 3 + 1e-12


def test_resolved_scale_matches_frozen():
    assert resolve_gain_scale() == pytest.approx(GAIN_PULSATION_SCALE, abs=1e-12)
    rng = np.random.default_rng(11)
    for _ in range(5):
        spec = CurrentErrorSpec(*rng.uniform(-0.2, 0.2, 3), *rng.uniform(-2, 2, 3))
        dq = SynchronousCurrents(*rng.uniform(-50, 50, 2))
        assert resolve_gain_scale(spec, dq, grid=24) == pytest.approx(GAIN_PULSATION_SCALE,
                                                                      abs=1e-12)
    with pytest.raises(ValueError, match="balanced"):
        resolve_gain_scale(CurrentErrorSpec(0.1, 0.1, 0.1))


def test_single_phase_gain_pulsation_is_one_third():
    # brute force: peak-to-peak of the pulsation over a full turn at theta_hat = theta
    theta = np.linspace(0, 2 * math.pi, 4096, endpoint=False)
    g = 0.1
    est = oracle(SynchronousCurrents(0.0, 1.0), theta, theta, CurrentErrorSpec(gain_a=g))
    pulsation = est.q - (1 + g / 3)
    assert np.max(np.abs(pulsation)) == pytest.approx(g / 3, rel=1e-9)


def test_analytic_zero_errors():
    out = estimate_dq_analytic(SynchronousCurrents(3.0, -4.0), 1.1, 1.1, CurrentErrorSpec())
    assert (out.d, out.q) == pytest.approx((3.0, -4.0), abs=1e-15)


@given(angle, st.floats(-1, 1), st.floats(-50, 50))
def test_analytic_static_position_error(theta, dth, i):
    out = estimate_dq_analytic(SynchronousCurrents(0.0, i), theta, theta + dth, CurrentErrorSpec())
    assert out.d == pytest.approx(math.sin(dth) * i, abs=1e-12)
    assert out.q == pytest.approx(math.cos(dth) * i, abs=1e-12)


@settings(max_examples=500)
@given(angle, angle, gain, gain, gain, offset, offset, offset, amp, amp)
def test_analytic_equals_oracle(theta, theta_hat, ga, gb, gc, oa, ob, oc, d, q):
    spec = CurrentErrorSpec(ga, gb, gc, oa, ob, oc)
    dq = SynchronousCurrents(d, q)
    a = estimate_dq_analytic(dq, theta, theta_hat, spec)
    o = oracle(dq, theta, theta_hat, spec)
    assert abs(a.d - o.d) <= 1e-9 and abs(a.q - o.q) <= 1e-9


def test_analytic_is_affine_in_current():
    spec = CurrentErrorSpec(0.05, -0.1, 0.15, 0.5, -1.0, 0.2)
    f = lambda d, q: estimate_dq_analytic(SynchronousCurrents(d, q), 0.4, 0.9, spec).as_array()
    x, y, k = np.array([3.0, -2.0]), np.array([-7.0, 11.0]), 2.5
    assert np.allclose(f(*(x + k * y)), f(*x) + k * (f(*y) - f(0, 0)), atol=1e-12)


def lines_dict(lines):
    return {(ln.order, ln.channel): ln.amplitude for ln in lines}


def test_predicted_no_errors():
    assert predicted_orders(PositionErrorSpec(), CurrentErrorSpec(), M,
                            SynchronousCurrents(0.0, 21.5)) == []


def test_predicted_offsets_only():
    lines = lines_dict(predicted_orders(PositionErrorSpec(), CurrentErrorSpec(offset_a=1.0), M,
                                        SynchronousCurrents(0.0, 21.5)))
    assert set(lines) == {(3, "d"), (3, "q")}
    assert lines[3, "d"] == pytest.approx(2 / 3) and lines[3, "q"] == pytest.approx(2 / 3)


def test_predicted_sidebands():
    pos = PositionErrorSpec(0.0, (PositionHarmonic(1, 0.01),))
    lines = lines_dict(predicted_orders(pos, CurrentErrorSpec(offset_a=1.0), M,
                                        SynchronousCurrents(0.0, 0.0)))
    assert {o for o, _ in lines} == {2, 3, 4}
    # first-order modulation: sideband ~ K_iop * p * amplitude / 2
    assert lines[2, "d"] == pytest.approx(2 / 3 * 0.03 / 2, rel=1e-3)


def test_predicted_rejects_large_modulation():
    pos = PositionErrorSpec(0.0, (PositionHarmonic(2, 0.1),))
    with pytest.raises(ValueError, match="modulation index"):
        predicted_orders(pos, CurrentErrorSpec(), M, SynchronousCurrents(0, 1))


@pytest.mark.parametrize("pos, cur, dq", [
    (PositionErrorSpec(0.02, (PositionHarmonic(1, 0.01, 0.4),)),
     CurrentErrorSpec(0.1, -0.03, 0.0, 1.0, 0.0, -0.5), (2.0, 21.5)),
    (PositionErrorSpec(0.0, (PositionHarmonic(2, 0.015, 1.0), PositionHarmonic(5, 0.004))),
     CurrentErrorSpec(0.0, 0.08, 0.0, 0.0, 0.7, 0.0), (-5.0, 10.0)),
])
def test_predicted_matches_fft(pos, cur, dq):
    omega_m = 100 * 2 * math.pi / 60
    fs, revs = 2000.0, 20
    n = int(round(revs * 2 * math.pi / omega_m * fs))
    theta_m = omega_m * np.arange(n) / fs
    theta_e = M.p * theta_m
    from dqsense.sensing import position_estimate
    est = oracle(SynchronousCurrents(*dq), theta_e, position_estimate(theta_m, M, pos), cur)
    spectra = {"d": spectrum(TimeSeries(1 / fs, "d", est.d), omega_m),
               "q": spectrum(TimeSeries(1 / fs, "q", est.q), omega_m)}
    lines = predicted_orders(pos, cur, M, SynchronousCurrents(*dq))
    dominant = max(ln.amplitude for ln in lines if ln.order > 0)
    checked = 0
    for ln in lines:
        if ln.order == 0 or ln.amplitude < 0.01 * dominant:
            continue
        assert harmonic_at(spectra[ln.channel], ln.order) == pytest.approx(ln.amplitude, rel=0.05)
        checked += 1
    assert checked >= 4
