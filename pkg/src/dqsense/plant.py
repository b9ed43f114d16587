"""PMSM electrical model in the synchronous frame at an imposed speed.

The voltage equation is implemented with the off-diagonal sign placement

    v_d = (L_d s + R) i_d + w_e L_q i_q
    v_q = -w_e L_d i_d + (L_q s + R) i_q + w_e lambda_m

Note the V_d row carries ``+w_e L_q i_q``, the opposite of the usual
textbook sign. It is kept deliberately; every consumer in this package
(steady-state solve, regulator, ideal closed-loop prediction) uses the same
equation, so results are internally consistent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MotorParams:
    R: float
    L_d: float
    L_q: float
    lambda_m: float
    p: int

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"R must be > 0, got {self.R}")
        if not (self.L_d > 0 and self.L_q > 0):
            raise ValueError(f"inductances must be > 0, got L_d={self.L_d}, L_q={self.L_q}")
        if self.lambda_m < 0:
            raise ValueError(f"lambda_m must be >= 0, got {self.lambda_m}")
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"pole pairs must be a positive integer, got {self.p}")

    @property
    def time_constant(self) -> float:
        """Slowest electrical time constant max(L)/R, seconds."""
        return max(self.L_d, self.L_q) / self.R

    @property
    def max_step(self) -> float:
        return 0.2 * min(self.L_d, self.L_q) / self.R


# 9-slot / 6-pole non-salient test machine
REFERENCE_MOTOR = MotorParams(R=0.0106, L_d=59.45e-6, L_q=59.45e-6, lambda_m=0.0077, p=3)


@dataclass(frozen=True)
class PlantState:
    i_d: float = 0.0
    i_q: float = 0.0


@dataclass(frozen=True)
class Voltages:
    v_d: float = 0.0
    v_q: float = 0.0


def back_emf(omega_e: float, params: MotorParams) -> Voltages:
    return Voltages(0.0, omega_e * params.lambda_m)


def derivative(state: PlantState, volts: Voltages, omega_e: float,
               params: MotorParams) -> tuple[float, float]:
    did = (volts.v_d - params.R * state.i_d - omega_e * params.L_q * state.i_q) / params.L_d
    diq = (volts.v_q - params.R * state.i_q + omega_e * params.L_d * state.i_d
           - omega_e * params.lambda_m) / params.L_q
    return did, diq


def _static_matrix(omega_e: float, params: MotorParams) -> np.ndarray:
    return np.array([[params.R, omega_e * params.L_q],
                     [-omega_e * params.L_d, params.R]])


def steady_state(volts: Voltages, omega_e: float, params: MotorParams) -> PlantState:
    """Currents that make the derivative vanish for constant inputs."""
    rhs = np.array([volts.v_d, volts.v_q - omega_e * params.lambda_m])
    i_d, i_q = np.linalg.solve(_static_matrix(omega_e, params), rhs)
    return PlantState(float(i_d), float(i_q))


def steady_voltage(state: PlantState, omega_e: float, params: MotorParams) -> Voltages:
    """Inverse of :func:`steady_state`: voltages holding ``state`` constant."""
    v_d, v_q = _static_matrix(omega_e, params) @ np.array([state.i_d, state.i_q])
    return Voltages(float(v_d), float(v_q + omega_e * params.lambda_m))


def step(state: PlantState, volts: Voltages, omega_e: float, dt: float,
         params: MotorParams) -> PlantState:
    """Advance the currents by one classical RK4 step with voltages held."""
    if dt == 0:
        return state
    if not 0 < dt <= params.max_step:
        raise ValueError(
            f"dt={dt!r} outside (0, {params.max_step:.6g}] s "
            "(0.2 * min(L)/R stability bound)")

    def f(i_d, i_q):
        return derivative(PlantState(i_d, i_q), volts, omega_e, params)

    x0, y0 = state.i_d, state.i_q
    k1x, k1y = f(x0, y0)
    k2x, k2y = f(x0 + 0.5 * dt * k1x, y0 + 0.5 * dt * k1y)
    k3x, k3y = f(x0 + 0.5 * dt * k2x, y0 + 0.5 * dt * k2y)
    k4x, k4y = f(x0 + dt * k3x, y0 + dt * k3y)
    return PlantState(x0 + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x),
                      y0 + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y))


def torque(state: PlantState, params: MotorParams) -> float:
    return 1.5 * params.p * (params.lambda_m * state.i_q
                             + (params.L_d - params.L_q) * state.i_d * state.i_q)
