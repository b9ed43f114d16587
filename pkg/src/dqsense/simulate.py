"""Open- and closed-loop runners for a :class:`~dqsense.scenario.Scenario`."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import control, plant
from .estimation import PredictedLine, estimate_dq_oracle, predicted_orders
from .frames import PhaseCurrents, SynchronousCurrents, inverse_park_abc
from .scenario import Scenario, ScenarioError
from .sensing import measure_currents, position_estimate
from .spectral import Spectrum, TimeSeries, spectrum

DIVERGENCE_FACTOR = 100.0


class DivergenceError(RuntimeError):
    """Closed-loop currents blew up; the configuration is numerically unstable."""


@dataclass
class RunResult:
    scenario: Scenario
    t: np.ndarray
    theta_m: np.ndarray
    theta_e: np.ndarray
    theta_e_hat: np.ndarray
    true_abc: PhaseCurrents
    measured_abc: PhaseCurrents
    true_dq: SynchronousCurrents
    estimated_dq: SynchronousCurrents
    v_d: np.ndarray
    v_q: np.ndarray
    torque: np.ndarray
    predicted: list[PredictedLine]
    window_start: int = 0  # first sample of the steady analysis window
    spectra: dict[str, Spectrum] = field(default_factory=dict)
    ideal_dq: SynchronousCurrents | None = None  # closed loop only
    saturated: bool = False

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "t": self.t, "theta_m": self.theta_m, "theta_e": self.theta_e,
            "theta_e_hat": self.theta_e_hat,
            "ia": self.true_abc.a, "ib": self.true_abc.b, "ic": self.true_abc.c,
            "ia_m": self.measured_abc.a, "ib_m": self.measured_abc.b, "ic_m": self.measured_abc.c,
            "id": self.true_dq.d, "iq": self.true_dq.q,
            "id_est": self.estimated_dq.d, "iq_est": self.estimated_dq.q,
            "vd": self.v_d, "vq": self.v_q, "torque": self.torque,
        }

    def window(self, name: str) -> np.ndarray:
        return self.columns()[name][self.window_start:]

    def summary(self) -> dict:
        out = {
            "scenario": self.scenario.name,
            "mode": self.scenario.mode,
            "window_start_s": float(self.t[self.window_start]),
            "samples": int(self.t.size),
            "saturated": self.saturated,
        }
        for name in ("id", "iq", "id_est", "iq_est"):
            w = self.window(name)
            out[f"{name}_mean"] = float(np.mean(w))
            out[f"{name}_ripple_pp"] = float(np.ptp(w))
        if self.ideal_dq is not None:
            s = self.window_start
            dev = np.hypot(self.true_dq.d[s:] - self.ideal_dq.d[s:],
                           self.true_dq.q[s:] - self.ideal_dq.q[s:])
            out["ideal_max_deviation_amp"] = float(np.max(dev))
            out["ideal_d_mean"] = float(np.mean(self.ideal_dq.d[s:]))
            out["ideal_q_mean"] = float(np.mean(self.ideal_dq.q[s:]))
        return out


def _angles(s: Scenario, n: int):
    t = np.arange(n) / s.sample_rate_hz
    theta_m = s.omega_m * t
    theta_e = s.motor.p * theta_m
    theta_e_hat = position_estimate(theta_m, s.motor, s.position_error)
    return t, theta_m, theta_e, np.asarray(theta_e_hat, dtype=float)


def _spectra(result: RunResult) -> dict[str, Spectrum]:
    s = result.scenario
    return {name: spectrum(TimeSeries(s.dt, name, result.window(name)), s.omega_m)
            for name in ("id_est", "iq_est")}


def _predicted(s: Scenario) -> list[PredictedLine]:
    try:
        return predicted_orders(s.position_error, s.current_error, s.motor, s.command)
    except ValueError:
        # large position ripple: the expansion does not apply, simulation still does
        return []


def run_open_loop(s: Scenario) -> RunResult:
    """True dq held at the command; only the estimation chain is exercised."""
    s.validate()
    if s.mode != "open_loop":
        raise ScenarioError(f"run_open_loop needs mode 'open_loop', got {s.mode!r}")
    n = s.n_samples
    t, theta_m, theta_e, theta_e_hat = _angles(s, n)

    i_d = np.full(n, float(s.command.d))
    i_q = np.full(n, float(s.command.q))
    true_dq = SynchronousCurrents(i_d, i_q)
    true_abc = inverse_park_abc(true_dq, theta_e)
    measured = measure_currents(true_abc, s.current_error)
    estimated = estimate_dq_oracle(true_abc, theta_e_hat, s.current_error)

    volts = plant.steady_voltage(plant.PlantState(s.command.d, s.command.q), s.omega_e, s.motor)
    tq = plant.torque(plant.PlantState(i_d, i_q), s.motor)
    result = RunResult(s, t, theta_m, theta_e, theta_e_hat, true_abc, measured, true_dq,
                       estimated, np.full(n, volts.v_d), np.full(n, volts.v_q),
                       np.asarray(tq, dtype=float) * np.ones(n), _predicted(s))
    result.spectra = _spectra(result)
    return result


def run_closed_loop(s: Scenario) -> RunResult:
    """Plant, sensors, estimator and PI regulator in the loop.

    The record is ``5 / bandwidth`` of settling followed by ``duration_s`` of
    steady operation; statistics and spectra use the steady part only.
    """
    s.validate()
    if s.mode != "closed_loop":
        raise ScenarioError(f"run_closed_loop needs mode 'closed_loop', got {s.mode!r}")
    settle = int(math.ceil(5.0 / s.bandwidth_rad_s * s.sample_rate_hz))
    n = settle + s.n_samples
    t, theta_m, theta_e, theta_e_hat = _angles(s, n)
    dt, params, spec = s.dt, s.motor, s.current_error
    gains = control.tune_bandwidth(params, s.bandwidth_rad_s)
    limit = DIVERGENCE_FACTOR * max(math.hypot(s.command.d, s.command.q), 1.0)

    cols = np.empty((7, n))  # i_d, i_q, ia, ib, ic, v_d, v_q
    state = plant.PlantState()
    reg = control.RegulatorState()
    saturated = False
    for k in range(n):
        abc = inverse_park_abc(SynchronousCurrents(state.i_d, state.i_q), theta_e[k])
        est = estimate_dq_oracle(abc, theta_e_hat[k], spec)
        reg, volts = control.regulator_step(reg, s.command, est, s.omega_e, params, gains,
                                            dt, s.voltage_limit_v)
        saturated |= max(abs(volts.v_d), abs(volts.v_q)) >= s.voltage_limit_v
        cols[:, k] = (state.i_d, state.i_q, abc.a, abc.b, abc.c, volts.v_d, volts.v_q)
        state = plant.step(state, volts, s.omega_e, dt, params)
        if not (abs(state.i_d) < limit and abs(state.i_q) < limit):
            raise DivergenceError(
                f"{s.name}: |i| exceeded {limit:.6g} A at t={t[k]:.6g} s "
                f"(i_d={state.i_d:.6g}, i_q={state.i_q:.6g}); reduce bandwidth or raise "
                "sample_rate_hz")

    true_dq = SynchronousCurrents(cols[0], cols[1])
    true_abc = PhaseCurrents(cols[2], cols[3], cols[4])
    measured = measure_currents(true_abc, spec)
    estimated = estimate_dq_oracle(true_abc, theta_e_hat, spec)
    tq = plant.torque(plant.PlantState(cols[0], cols[1]), params)

    ideal = np.array([control.ideal_closed_loop(s.command, te, teh, spec).as_array()
                      for te, teh in zip(theta_e, theta_e_hat)])
    result = RunResult(s, t, theta_m, theta_e, theta_e_hat, true_abc, measured, true_dq,
                       estimated, cols[5], cols[6], np.asarray(tq, dtype=float),
                       _predicted(s), window_start=settle,
                       ideal_dq=SynchronousCurrents(ideal[:, 0], ideal[:, 1]),
                       saturated=bool(saturated))
    result.spectra = _spectra(result)
    return result


def run(s: Scenario) -> RunResult:
    return run_open_loop(s) if s.mode == "open_loop" else run_closed_loop(s)
