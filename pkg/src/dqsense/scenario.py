"""Scenario configuration: JSON documents with explicit units in the keys.

Example::

    {
      "name": "offset_a_1A",
      "motor": {"r_ohm": 0.0106, "l_d_henry": 5.945e-05, "l_q_henry": 5.945e-05,
                "lambda_m_weber": 0.0077, "pole_pairs": 3},
      "speed_rpm": 100.0,
      "command": {"i_d_amp": 0.0, "i_q_amp": 0.0},
      "position_error": {"static_offset_rad_e": 0.0,
                         "harmonics": [{"order": 1, "amplitude_rad_m": 0.01, "phase_rad": 0.0}]},
      "current_error": {"gain_a": 0.0, "gain_b": 0.0, "gain_c": 0.0,
                        "offset_a_amp": 1.0, "offset_b_amp": 0.0, "offset_c_amp": 0.0},
      "mode": "open_loop",
      "duration_s": 6.0,
      "sample_rate_hz": 2000.0,
      "bandwidth_rad_s": 3141.592653589793,
      "voltage_limit_v": 12.0
    }
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .frames import SynchronousCurrents
from .plant import REFERENCE_MOTOR, MotorParams
from .sensing import CurrentErrorSpec, PositionErrorSpec, PositionHarmonic

MODES = ("open_loop", "closed_loop")


class ScenarioError(ValueError):
    """Invalid or inconsistent scenario configuration."""


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    motor: MotorParams = REFERENCE_MOTOR
    speed_rpm: float = 100.0
    command: SynchronousCurrents = SynchronousCurrents(0.0, 0.0)
    position_error: PositionErrorSpec = field(default_factory=PositionErrorSpec)
    current_error: CurrentErrorSpec = field(default_factory=CurrentErrorSpec)
    mode: str = "open_loop"
    duration_s: float = 6.0
    sample_rate_hz: float = 10_000.0
    bandwidth_rad_s: float = 2 * math.pi * 500
    voltage_limit_v: float = 12.0

    @property
    def omega_m(self) -> float:
        return self.speed_rpm * 2.0 * math.pi / 60.0

    @property
    def omega_e(self) -> float:
        return self.motor.p * self.omega_m

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate_hz

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s * self.sample_rate_hz))

    def validate(self) -> "Scenario":
        if self.mode not in MODES:
            raise ScenarioError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.speed_rpm > 0:
            raise ScenarioError(f"speed_rpm must be > 0, got {self.speed_rpm}")
        if not self.sample_rate_hz > 0:
            raise ScenarioError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        speed_hz = self.speed_rpm / 60.0
        min_duration = 10.0 / speed_hz
        if self.duration_s < min_duration * (1 - 1e-9):
            raise ScenarioError(
                f"duration_s={self.duration_s} covers fewer than 10 revolutions "
                f"(need >= {min_duration:.6g} s at {self.speed_rpm} rpm)")
        min_rate = 20.0 * self.motor.p * speed_hz
        if self.sample_rate_hz < min_rate:
            raise ScenarioError(
                f"sample_rate_hz={self.sample_rate_hz} below 20 x electrical frequency "
                f"({min_rate:.6g} Hz)")
        if self.mode == "closed_loop":
            if not self.bandwidth_rad_s > 0:
                raise ScenarioError(f"bandwidth_rad_s must be > 0, got {self.bandwidth_rad_s}")
            if not self.voltage_limit_v > 0:
                raise ScenarioError(f"voltage_limit_v must be > 0, got {self.voltage_limit_v}")
            if self.dt > self.motor.max_step:
                raise ScenarioError(
                    f"closed loop needs sample_rate_hz >= {1.0 / self.motor.max_step:.6g} "
                    "for the plant integrator")
        return self

    def to_dict(self) -> dict:
        m, pe, ce = self.motor, self.position_error, self.current_error
        return {
            "name": self.name,
            "motor": {"r_ohm": m.R, "l_d_henry": m.L_d, "l_q_henry": m.L_q,
                      "lambda_m_weber": m.lambda_m, "pole_pairs": m.p},
            "speed_rpm": self.speed_rpm,
            "command": {"i_d_amp": self.command.d, "i_q_amp": self.command.q},
            "position_error": {
                "static_offset_rad_e": pe.static_offset_e,
                "harmonics": [{"order": h.order, "amplitude_rad_m": h.amplitude,
                               "phase_rad": h.phase} for h in pe.harmonics],
            },
            "current_error": {"gain_a": ce.gain_a, "gain_b": ce.gain_b, "gain_c": ce.gain_c,
                              "offset_a_amp": ce.offset_a, "offset_b_amp": ce.offset_b,
                              "offset_c_amp": ce.offset_c},
            "mode": self.mode,
            "duration_s": self.duration_s,
            "sample_rate_hz": self.sample_rate_hz,
            "bandwidth_rad_s": self.bandwidth_rad_s,
            "voltage_limit_v": self.voltage_limit_v,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Scenario":
        unknown = set(doc) - set(cls().to_dict())
        if unknown:
            raise ScenarioError(f"unknown keys: {sorted(unknown)}")
        try:
            kw = {}
            for key in ("name", "speed_rpm", "mode", "duration_s", "sample_rate_hz",
                        "bandwidth_rad_s", "voltage_limit_v"):
                if key in doc:
                    kw[key] = doc[key] if key in ("name", "mode") else float(doc[key])
            if "motor" in doc:
                m = doc["motor"]
                kw["motor"] = MotorParams(R=float(m["r_ohm"]), L_d=float(m["l_d_henry"]),
                                          L_q=float(m["l_q_henry"]),
                                          lambda_m=float(m["lambda_m_weber"]),
                                          p=int(m["pole_pairs"]))
            if "command" in doc:
                c = doc["command"]
                kw["command"] = SynchronousCurrents(float(c.get("i_d_amp", 0.0)),
                                                    float(c.get("i_q_amp", 0.0)))
            if "position_error" in doc:
                pe = doc["position_error"]
                kw["position_error"] = PositionErrorSpec(
                    float(pe.get("static_offset_rad_e", 0.0)),
                    tuple(PositionHarmonic(int(h["order"]), float(h["amplitude_rad_m"]),
                                           float(h.get("phase_rad", 0.0)))
                          for h in pe.get("harmonics", [])))
            if "current_error" in doc:
                ce = doc["current_error"]
                kw["current_error"] = CurrentErrorSpec(
                    *(float(ce.get(f"gain_{x}", 0.0)) for x in "abc"),
                    *(float(ce.get(f"offset_{x}_amp", 0.0)) for x in "abc"))
        except KeyError as exc:
            raise ScenarioError(f"missing key {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise ScenarioError(str(exc)) from exc
        return cls(**kw).validate()


def load_scenario(path: str | Path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ScenarioError(f"{path}: top level must be an object")
    return Scenario.from_dict(doc)


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario.to_dict(), indent=2) + "\n")


def reference_scenarios() -> list[Scenario]:
    """Validation runs on the 9-slot/6-pole test motor at 100 rpm."""
    iq_load = SynchronousCurrents(0.0, 21.5)
    idle = SynchronousCurrents(0.0, 0.0)
    ripple = PositionErrorSpec(0.0, (PositionHarmonic(1, 0.01, 0.0),))
    offset = CurrentErrorSpec(offset_a=1.0)
    base = Scenario(sample_rate_hz=2000.0)
    closed = replace(base, mode="closed_loop", sample_rate_hz=10_000.0)
    return [
        replace(base, name="ideal_21A5", command=iq_load),
        replace(base, name="offset_0A", command=idle, current_error=offset),
        replace(base, name="offset_21A5", command=iq_load, current_error=offset),
        replace(base, name="gain_21A5", command=iq_load, current_error=CurrentErrorSpec(gain_a=0.1)),
        replace(base, name="offset_ripple_0A", command=idle, current_error=offset,
                position_error=ripple),
        replace(base, name="combined_21A5", command=iq_load, position_error=ripple,
                current_error=CurrentErrorSpec(gain_a=0.1, offset_a=1.0)),
        replace(closed, name="cl_ideal_21A5", command=iq_load),
        replace(closed, name="cl_static30_21A5", command=iq_load,
                position_error=PositionErrorSpec(math.radians(30.0))),
        replace(closed, name="cl_offset_21A5", command=iq_load, current_error=offset),
    ]
