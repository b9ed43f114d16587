"""Position-sensor and phase-current-sensor error injection."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frames import ArrayLike, PhaseCurrents
from .plant import MotorParams


@dataclass(frozen=True)
class PositionHarmonic:
    order: int          # cycles per mechanical revolution
    amplitude: float    # rad, mechanical
    phase: float = 0.0  # rad


@dataclass(frozen=True)
class PositionErrorSpec:
    static_offset_e: float = 0.0
    harmonics: tuple[PositionHarmonic, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "harmonics", tuple(self.harmonics))
        orders = [h.order for h in self.harmonics]
        if len(set(orders)) != len(orders):
            raise ValueError(f"position harmonic orders must be distinct, got {orders}")
        for h in self.harmonics:
            if int(h.order) != h.order or h.order < 1:
                raise ValueError(f"harmonic order must be a positive integer, got {h.order}")
            if h.amplitude < 0:
                raise ValueError(f"harmonic amplitude must be >= 0, got {h.amplitude}")


@dataclass(frozen=True)
class CurrentErrorSpec:
    gain_a: float = 0.0
    gain_b: float = 0.0
    gain_c: float = 0.0
    offset_a: float = 0.0
    offset_b: float = 0.0
    offset_c: float = 0.0

    def __post_init__(self):
        for name, g in zip("abc", self.gains):
            if not 1.0 + g > 0:
                raise ValueError(f"phase {name}: 1 + gain error must be > 0, got gain {g}")

    @property
    def gains(self) -> tuple[float, float, float]:
        return (self.gain_a, self.gain_b, self.gain_c)

    @property
    def offsets(self) -> tuple[float, float, float]:
        return (self.offset_a, self.offset_b, self.offset_c)


def position_error(theta_m: ArrayLike, params: MotorParams,
                   spec: PositionErrorSpec) -> ArrayLike:
    """Electrical-angle error: static offset plus p times the mechanical harmonics."""
    err = spec.static_offset_e + 0.0 * np.asarray(theta_m, dtype=float)
    for h in spec.harmonics:
        err = err + params.p * h.amplitude * np.sin(h.order * theta_m + h.phase)
    return err if np.ndim(err) else float(err)


def position_estimate(theta_m: ArrayLike, params: MotorParams,
                      spec: PositionErrorSpec) -> ArrayLike:
    """Estimated electrical angle (not wrapped)."""
    return params.p * theta_m + position_error(theta_m, params, spec)


def measure_currents(true_abc: PhaseCurrents, spec: CurrentErrorSpec) -> PhaseCurrents:
    return PhaseCurrents((1.0 + spec.gain_a) * true_abc.a + spec.offset_a,
                         (1.0 + spec.gain_b) * true_abc.b + spec.offset_b,
                         (1.0 + spec.gain_c) * true_abc.c + spec.offset_c)
