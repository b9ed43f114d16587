"""Synchronous-frame current regulator: dual PI plus back-EMF feedforward.

The regulator only ever sees *estimated* dq currents. With perfect tracking
of a corrupted estimate the plant carries

    I = (M_theta + M_ig)^-1 (I* - m_io)

which :func:`ideal_closed_loop` evaluates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .estimation import error_constants, gain_error_matrix, offset_vector
from .frames import SynchronousCurrents
from .plant import MotorParams, Voltages, back_emf
from .sensing import CurrentErrorSpec


SINGULAR_MARGIN = 1e-9


class DegenerateGainError(ValueError):
    """Gain errors make the estimation map singular (1 + K_igc <= K_igp)."""


@dataclass(frozen=True)
class PiGains:
    kp_d: float
    ki_d: float
    kp_q: float
    ki_q: float

    def __post_init__(self):
        if min(self.kp_d, self.ki_d, self.kp_q, self.ki_q) < 0:
            raise ValueError(f"PI gains must be non-negative: {self}")


@dataclass(frozen=True)
class RegulatorState:
    integrator_d: float = 0.0
    integrator_q: float = 0.0
    error_d: float = 0.0  # previous sample, for trapezoidal integration
    error_q: float = 0.0
    voltage: Voltages = field(default_factory=Voltages)


def tune_bandwidth(params: MotorParams, bandwidth: float) -> PiGains:
    """Pole-zero cancellation: kp = L * w_bw, ki = R * w_bw on each axis."""
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be > 0 rad/s, got {bandwidth}")
    return PiGains(kp_d=params.L_d * bandwidth, ki_d=params.R * bandwidth,
                   kp_q=params.L_q * bandwidth, ki_q=params.R * bandwidth)


def _pi_axis(error, prev_error, integrator, kp, ki, feedforward, dt, v_limit):
    candidate = integrator + 0.5 * ki * dt * (error + prev_error)
    candidate = min(max(candidate, -v_limit), v_limit)
    unsat = kp * error + candidate + feedforward
    # conditional integration: hold the integrator while saturated and
    # the error keeps pushing in the saturated direction
    if abs(unsat) > v_limit and np.sign(unsat) == np.sign(error):
        candidate = integrator
    out = kp * error + candidate + feedforward
    return candidate, min(max(out, -v_limit), v_limit)


def regulator_step(state: RegulatorState, command_dq: SynchronousCurrents,
                   estimated_dq: SynchronousCurrents, omega_e: float, params: MotorParams,
                   gains: PiGains, dt: float, v_limit: float
                   ) -> tuple[RegulatorState, Voltages]:
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    ff = back_emf(omega_e, params)
    e_d = command_dq.d - estimated_dq.d
    e_q = command_dq.q - estimated_dq.q
    int_d, v_d = _pi_axis(e_d, state.error_d, state.integrator_d, gains.kp_d, gains.ki_d,
                          ff.v_d, dt, v_limit)
    int_q, v_q = _pi_axis(e_q, state.error_q, state.integrator_q, gains.kp_q, gains.ki_q,
                          ff.v_q, dt, v_limit)
    volts = Voltages(v_d, v_q)
    return RegulatorState(int_d, int_q, e_d, e_q, volts), volts


def ideal_closed_loop(command_dq: SynchronousCurrents, theta_e: float, theta_e_hat: float,
                      current_spec: CurrentErrorSpec) -> SynchronousCurrents:
    """True currents when the estimate tracks the command perfectly."""
    dec = error_constants(current_spec)
    # the map is x -> (1 + K_igc) R x + K_igp F x*, singular iff the two magnitudes meet
    if not 1.0 + dec.K_igc - dec.K_igp > SINGULAR_MARGIN:
        raise DegenerateGainError(
            f"1 + K_igc = {1.0 + dec.K_igc:.6g} must exceed K_igp = {dec.K_igp:.6g}")
    od, oq = offset_vector(theta_e_hat, dec)
    rhs = np.array([command_dq.d - od, command_dq.q - oq])
    i_d, i_q = np.linalg.solve(gain_error_matrix(theta_e, theta_e_hat, dec), rhs)
    return SynchronousCurrents(float(i_d), float(i_q))
