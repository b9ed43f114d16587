"""Order-domain amplitude spectra of sampled signals."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MIN_REVOLUTIONS = 10
MIN_SAMPLES_PER_ORDER = 20


@dataclass(frozen=True)
class TimeSeries:
    dt: float
    name: str
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.samples.ndim != 1 or self.samples.size < 2:
            raise ValueError("a time series needs at least 2 samples")

    @property
    def duration(self) -> float:
        return self.samples.size * self.dt


@dataclass(frozen=True)
class Spectrum:
    orders: np.ndarray
    freq_hz: np.ndarray
    magnitude: np.ndarray

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["order", "freq_hz", "magnitude"])
            for row in zip(self.orders, self.freq_hz, self.magnitude):
                writer.writerow([f"{v:.17g}" for v in row])

    @classmethod
    def from_csv(cls, path: str | Path) -> "Spectrum":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1], data[:, 2])


def hann(n: int) -> np.ndarray:
    """Periodic Hann window; exact zero leakage for on-bin tones beyond +-1 bin."""
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def spectrum(ts: TimeSeries, omega_m: float, max_order: float | None = None) -> Spectrum:
    """Hann-windowed single-sided amplitude spectrum on a mechanical-order axis.

    A sinusoid of amplitude A at an on-bin frequency reads A; a constant c
    reads c at order 0.
    """
    if not omega_m > 0:
        raise ValueError(f"omega_m must be > 0 rad/s, got {omega_m}")
    f_mech = omega_m / (2.0 * np.pi)
    min_duration = MIN_REVOLUTIONS / f_mech
    if ts.duration < min_duration * (1 - 1e-9):
        raise ValueError(
            f"record of {ts.duration:.6g} s is too short: need at least "
            f"{min_duration:.6g} s ({MIN_REVOLUTIONS} mechanical revolutions)")
    if max_order is not None and 1.0 / ts.dt < MIN_SAMPLES_PER_ORDER * max_order * f_mech:
        raise ValueError(
            f"sample rate {1.0 / ts.dt:.6g} Hz below {MIN_SAMPLES_PER_ORDER}x order "
            f"{max_order} ({MIN_SAMPLES_PER_ORDER * max_order * f_mech:.6g} Hz)")

    n = ts.samples.size
    window = hann(n)
    gain = window.mean()
    mag = np.abs(np.fft.rfft(ts.samples * window)) / (n * gain)
    # single-sided: double everything except DC and (even-length) Nyquist
    mag[1:] *= 2.0
    if n % 2 == 0:
        mag[-1] /= 2.0
    freqs = np.fft.rfftfreq(n, ts.dt)
    return Spectrum(freqs / f_mech, freqs, mag)


def harmonic_at(spec: Spectrum, order: float, half_width: float = 0.25) -> float:
    """Peak magnitude within +-half_width of ``order``.

    The largest bin in the capture window is refined by a parabola through it
    and its two neighbours (log magnitude).
    """
    if not spec.orders[0] <= order <= spec.orders[-1]:
        raise ValueError(
            f"order {order} outside spectrum range [{spec.orders[0]}, {spec.orders[-1]:.6g}]")
    idx = np.flatnonzero(np.abs(spec.orders - order) <= half_width)
    if idx.size == 0:
        idx = np.array([int(np.argmin(np.abs(spec.orders - order)))])
    k = int(idx[np.argmax(spec.magnitude[idx])])
    if k == 0 or k == spec.magnitude.size - 1:
        return float(spec.magnitude[k])
    a, b, c = spec.magnitude[k - 1:k + 2]
    if min(a, b, c) <= 0.0:
        return float(b)
    # the Hann main lobe is close to a parabola in log magnitude
    la, lb, lc = np.log(a), np.log(b), np.log(c)
    denom = la - 2.0 * lb + lc
    if denom >= 0.0:
        return float(b)
    offset = 0.5 * (la - lc) / denom
    return float(np.exp(lb - 0.25 * (la - lc) * offset))


def spectrum_power(spec: Spectrum, n_samples: int) -> float:
    """Mean-square implied by a single-sided spectrum (DC^2 + sum A^2/2)."""
    mag = spec.magnitude
    power = mag[0] ** 2 + 0.5 * np.sum(mag[1:] ** 2)
    if n_samples % 2 == 0:
        # Nyquist bin was not doubled
        power += 0.5 * mag[-1] ** 2
    return float(power)


def windowed_mean_square(ts: TimeSeries) -> float:
    window = hann(ts.samples.size)
    return float(np.mean((ts.samples * window / window.mean()) ** 2))
