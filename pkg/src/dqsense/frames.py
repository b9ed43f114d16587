"""Reference-frame transforms between abc, alpha-beta-0 and dq0.

Amplitude-invariant scaling throughout: a balanced set of peak amplitude A
maps to a dq vector of length A. The rotation convention is

    d =  cos(theta) * alpha + sin(theta) * beta
    q = -sin(theta) * alpha + cos(theta) * beta

so a position error ``dtheta`` shows up in dq as the matrix
``[[cos, sin], [-sin, cos]]``. All functions accept scalars or numpy arrays
(broadcast elementwise).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

SQRT3 = np.sqrt(3.0)
TWO_PI_3 = 2.0 * np.pi / 3.0


@dataclass(frozen=True)
class PhaseCurrents:
    a: ArrayLike
    b: ArrayLike
    c: ArrayLike


@dataclass(frozen=True)
class OrthogonalCurrents:
    alpha: ArrayLike
    beta: ArrayLike
    zero: ArrayLike = 0.0


@dataclass(frozen=True)
class SynchronousCurrents:
    d: ArrayLike = 0.0
    q: ArrayLike = 0.0
    zero: ArrayLike = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.d, self.q], dtype=float)


def clarke(abc: PhaseCurrents) -> OrthogonalCurrents:
    alpha = (2.0 / 3.0) * (abc.a - 0.5 * abc.b - 0.5 * abc.c)
    beta = (abc.b - abc.c) / SQRT3
    zero = (abc.a + abc.b + abc.c) / 3.0
    return OrthogonalCurrents(alpha, beta, zero)


def inverse_clarke(ab: OrthogonalCurrents) -> PhaseCurrents:
    a = ab.alpha + ab.zero
    b = -0.5 * ab.alpha + 0.5 * SQRT3 * ab.beta + ab.zero
    c = -0.5 * ab.alpha - 0.5 * SQRT3 * ab.beta + ab.zero
    return PhaseCurrents(a, b, c)


def park(ab: OrthogonalCurrents, theta_e: ArrayLike) -> SynchronousCurrents:
    cos_t = np.cos(theta_e)
    sin_t = np.sin(theta_e)
    d = cos_t * ab.alpha + sin_t * ab.beta
    q = -sin_t * ab.alpha + cos_t * ab.beta
    return SynchronousCurrents(d, q, ab.zero)


def inverse_park(dq: SynchronousCurrents, theta_e: ArrayLike) -> OrthogonalCurrents:
    cos_t = np.cos(theta_e)
    sin_t = np.sin(theta_e)
    alpha = cos_t * dq.d - sin_t * dq.q
    beta = sin_t * dq.d + cos_t * dq.q
    return OrthogonalCurrents(alpha, beta, dq.zero)


def park_abc(abc: PhaseCurrents, theta_e: ArrayLike) -> SynchronousCurrents:
    """Composite abc -> dq0 transform; zero-sequence rides along in ``.zero``."""
    return park(clarke(abc), theta_e)


def inverse_park_abc(dq: SynchronousCurrents, theta_e: ArrayLike) -> PhaseCurrents:
    return inverse_clarke(inverse_park(dq, theta_e))
