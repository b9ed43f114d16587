"""Estimated dq currents under concurrent position and current-sensor errors.

Two independent routes are provided:

* :func:`estimate_dq_oracle` pushes the true phase currents through the
  corrupted sensors and a Park transform at the estimated angle. This is the
  ground truth.
* :func:`estimate_dq_analytic` evaluates the closed-form decomposition

      I_hat = (1 + K_igc) M_theta I + K_igp M_igp C I + K_iop m_iop

  where ``M_theta`` rotates by the position error, ``M_igp`` is the rotation
  on angle ``theta + theta_hat + phi_igp`` applied to the conjugated vector
  ``C I = (I_d, -I_q)`` (gain imbalance is a negative-sequence effect and
  therefore a reflection in dq), and ``m_iop`` is the offset vector
  ``(cos(theta_hat + phi_iop), -sin(theta_hat + phi_iop))``.

Gain imbalance constants
------------------------
The often-quoted magnitude ``sqrt(sum dK_x^2 - sum_{x<y} dK_x dK_y)`` (pairs
unordered) is the length of the gain-error space vector. The dq pulsation it
produces is one third of that; the factor is fitted against the oracle by
:func:`resolve_gain_scale` and frozen as :data:`GAIN_PULSATION_SCALE`.
``ErrorDecomposition.K_igp`` holds the resolved (used) value and
``ErrorDecomposition.k_igp_unscaled`` the raw magnitude.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import jv

from .frames import (ArrayLike, OrthogonalCurrents, PhaseCurrents, SynchronousCurrents,
                     clarke, inverse_park_abc, park_abc)
from .plant import MotorParams
from .sensing import CurrentErrorSpec, PositionErrorSpec, measure_currents

GAIN_PULSATION_SCALE = 1.0 / 3.0

# small-modulation regime for the sideband expansion of position harmonics
MAX_MODULATION_INDEX = 0.2


@dataclass(frozen=True)
class ErrorDecomposition:
    K_igc: float
    K_igp: float
    K_iop: float
    phi_igp: float
    phi_iop: float

    @property
    def k_igp_unscaled(self) -> float:
        return self.K_igp / GAIN_PULSATION_SCALE


@dataclass(frozen=True)
class PredictedLine:
    order: int        # mechanical order; 0 is a DC shift relative to the true current
    amplitude: float  # A
    channel: str      # "d" or "q"


def _sequence_magnitude(x: tuple[float, float, float]) -> float:
    a, b, c = x
    radicand = a * a + b * b + c * c - (a * b + b * c + a * c)
    return float(np.sqrt(max(radicand, 0.0)))


def _space_vector(x: tuple[float, float, float]) -> OrthogonalCurrents:
    return clarke(PhaseCurrents(*x))


def error_constants(current_spec: CurrentErrorSpec) -> ErrorDecomposition:
    gains = current_spec.gains
    offsets = current_spec.offsets

    k_igc = sum(gains) / 3.0
    k_igp = GAIN_PULSATION_SCALE * _sequence_magnitude(gains)
    k_iop = (2.0 / 3.0) * _sequence_magnitude(offsets)

    g = _space_vector(gains)
    o = _space_vector(offsets)
    phi_igp = float(np.arctan2(g.beta, g.alpha)) if k_igp > 0 else 0.0
    phi_iop = float(-np.arctan2(o.beta, o.alpha)) if k_iop > 0 else 0.0
    return ErrorDecomposition(k_igc, k_igp, k_iop, phi_igp, phi_iop)


def m_theta(delta_theta_e: float) -> np.ndarray:
    c, s = np.cos(delta_theta_e), np.sin(delta_theta_e)
    return np.array([[c, s], [-s, c]])


def m_igp(theta_e: float, theta_e_hat: float, phi_igp: float) -> np.ndarray:
    """Rotation on ``theta + theta_hat + phi_igp``; multiply by ``C I``, not ``I``."""
    return m_theta(theta_e + theta_e_hat + phi_igp)


def m_iop(theta_e_hat: float, phi_iop: float) -> np.ndarray:
    return m_theta(theta_e_hat + phi_iop)


def offset_vector(theta_e_hat: ArrayLike, decomposition: ErrorDecomposition
                  ) -> tuple[ArrayLike, ArrayLike]:
    """dq image of the sensor offsets at the estimated angle."""
    angle = theta_e_hat + decomposition.phi_iop
    return decomposition.K_iop * np.cos(angle), -decomposition.K_iop * np.sin(angle)


def gain_error_matrix(theta_e: float, theta_e_hat: float,
                      decomposition: ErrorDecomposition) -> np.ndarray:
    """Total gain map ``M_theta + M_ig`` acting on the true dq vector."""
    reflect = np.diag([1.0, -1.0])
    return ((1.0 + decomposition.K_igc) * m_theta(theta_e_hat - theta_e)
            + decomposition.K_igp * m_igp(theta_e, theta_e_hat, decomposition.phi_igp) @ reflect)


def estimate_dq_oracle(true_abc: PhaseCurrents, theta_e_hat: ArrayLike,
                       current_spec: CurrentErrorSpec) -> SynchronousCurrents:
    return park_abc(measure_currents(true_abc, current_spec), theta_e_hat)


def estimate_dq_analytic(true_dq: SynchronousCurrents, theta_e: ArrayLike,
                         theta_e_hat: ArrayLike, current_spec: CurrentErrorSpec,
                         decomposition: ErrorDecomposition | None = None
                         ) -> SynchronousCurrents:
    """Closed-form estimate; zero-sequence is not modelled (returned as 0)."""
    dec = decomposition or error_constants(current_spec)
    i_d, i_q = true_dq.d, true_dq.q

    dth = theta_e_hat - theta_e
    c, s = np.cos(dth), np.sin(dth)
    scale = 1.0 + dec.K_igc
    d = scale * (c * i_d + s * i_q)
    q = scale * (-s * i_d + c * i_q)

    psi = theta_e + theta_e_hat + dec.phi_igp
    cp, sp = np.cos(psi), np.sin(psi)
    d = d + dec.K_igp * (cp * i_d - sp * i_q)
    q = q + dec.K_igp * (-sp * i_d - cp * i_q)

    od, oq = offset_vector(theta_e_hat, dec)
    return SynchronousCurrents(d + od, q + oq, 0.0)


def resolve_gain_scale(current_spec: CurrentErrorSpec | None = None,
                       true_dq: SynchronousCurrents | None = None, grid: int = 64) -> float:
    """Least-squares scale of the gain-imbalance term against the oracle.

    Fits ``oracle - (everything but the gain-imbalance term)`` onto the
    unscaled gain-imbalance term over a dense ``grid x grid`` lattice of
    (theta, theta_hat). Defaults to a single-phase 10 % gain error.
    """
    spec = current_spec if current_spec is not None else CurrentErrorSpec(gain_a=0.1)
    true_dq = true_dq if true_dq is not None else SynchronousCurrents(3.0, 4.0)

    angles = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    theta_e, theta_e_hat = np.meshgrid(angles, angles)
    dec = error_constants(spec)
    oracle = estimate_dq_oracle(inverse_park_abc(true_dq, theta_e), theta_e_hat, spec)
    without = estimate_dq_analytic(true_dq, theta_e, theta_e_hat, spec,
                                   ErrorDecomposition(dec.K_igc, 0.0, dec.K_iop,
                                                      0.0, dec.phi_iop))
    psi = theta_e + theta_e_hat + dec.phi_igp
    k = dec.k_igp_unscaled
    basis_d = k * (np.cos(psi) * true_dq.d - np.sin(psi) * true_dq.q)
    basis_q = k * (-np.sin(psi) * true_dq.d - np.cos(psi) * true_dq.q)

    residual = np.concatenate([np.ravel(oracle.d - without.d), np.ravel(oracle.q - without.q)])
    basis = np.concatenate([np.ravel(basis_d), np.ravel(basis_q)])
    denom = float(basis @ basis)
    if denom <= 1e-24 * basis.size:
        raise ValueError("gain errors are balanced; pulsation scale is unobservable")
    return float(residual @ basis) / denom


def _modulation_series(position_spec: PositionErrorSpec, params: MotorParams,
                       bessel_order: int) -> dict[int, complex]:
    """Fourier coefficients of exp(-j * harmonic part of the position error).

    Keys are signed mechanical orders nu of exp(-j nu theta_m).
    """
    series: dict[int, complex] = {0: 1.0 + 0.0j}
    for h in position_spec.harmonics:
        beta = params.p * h.amplitude
        factor = {n * h.order: jv(n, beta) * np.exp(-1j * n * h.phase)
                  for n in range(-bessel_order, bessel_order + 1)}
        product: dict[int, complex] = {}
        for nu_a, ca in series.items():
            for nu_b, cb in factor.items():
                product[nu_a + nu_b] = product.get(nu_a + nu_b, 0.0) + ca * cb
        series = product
    return series


def predicted_orders(position_spec: PositionErrorSpec, current_spec: CurrentErrorSpec,
                     params: MotorParams, true_dq: SynchronousCurrents,
                     bessel_order: int = 3, rel_floor: float = 1e-3) -> list[PredictedLine]:
    """Spectral lines expected in the estimated dq currents at constant true current.

    Each error source is a carrier ``X exp(-j k theta_e)`` modulated by
    ``exp(-j delta_theta_e)``; position harmonics are expanded in Bessel
    series ``exp(-j beta sin x) = sum_n J_n(beta) exp(-j n x)`` with
    ``beta = p * amplitude`` up to ``|n| <= bessel_order``. Offsets give order
    p, gain imbalance order 2p, each position harmonic r adds sidebands at
    +-r around every carrier. Lines weaker than ``rel_floor`` times the
    strongest are dropped. Order 0 entries report the DC shift relative to
    the true current.
    """
    for h in position_spec.harmonics:
        beta = params.p * h.amplitude
        if abs(beta) >= MAX_MODULATION_INDEX:
            raise ValueError(
                f"position harmonic r={h.order}: modulation index p*amplitude={beta:.4g} rad "
                f">= {MAX_MODULATION_INDEX}; the sideband expansion is not valid")

    dec = error_constants(current_spec)
    current = complex(true_dq.d, true_dq.q)
    carriers = [
        ((1.0 + dec.K_igc) * current, 0),
        (dec.K_igp * np.exp(-1j * dec.phi_igp) * current.conjugate(), 2),
        (dec.K_iop * np.exp(-1j * dec.phi_iop), 1),
    ]
    modulation = _modulation_series(position_spec, params, bessel_order)
    static = np.exp(-1j * position_spec.static_offset_e)

    coeffs: dict[int, complex] = {}
    for x, k in carriers:
        if x == 0:
            continue
        for nu, c in modulation.items():
            key = k * params.p + nu
            coeffs[key] = coeffs.get(key, 0.0) + x * static * c

    candidates = []
    shift = coeffs.get(0, 0.0) - current
    candidates += [(0, "d", abs(shift.real)), (0, "q", abs(shift.imag))]
    for nu in sorted({abs(n) for n in coeffs if n != 0}):
        a = coeffs.get(nu, 0.0)
        b = np.conj(coeffs.get(-nu, 0.0))
        candidates += [(nu, "d", abs(a + b)), (nu, "q", abs(a - b))]

    strongest = max((amp for _, _, amp in candidates), default=0.0)
    floor = max(rel_floor * strongest, 1e-12 * (1.0 + abs(current)))
    return [PredictedLine(int(order), float(amp), channel)
            for order, channel, amp in candidates if amp > floor]
