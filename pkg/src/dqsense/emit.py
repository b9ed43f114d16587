"""Write a :class:`RunResult` to disk as CSV, JSON and SVG."""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .simulate import RunResult
from .spectral import TimeSeries, spectrum

FORMATS = frozenset({"csv", "svg", "json"})
TIMESERIES_FILE = "timeseries.csv"


def _write_timeseries(result: RunResult, path: Path) -> None:
    cols = result.columns()
    data = np.column_stack([np.broadcast_to(np.asarray(v, dtype=float), result.t.shape)
                            for v in cols.values()])
    np.savetxt(path, data, delimiter=",", fmt="%.17g", header=",".join(cols), comments="")


def read_timeseries(path: str | Path) -> dict[str, np.ndarray]:
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def _plot(result: RunResult, out_dir: Path) -> list[Path]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    s = result.scenario
    written = []
    pairs = {"estimated_dq": ("id_est", "iq_est"), "true_dq": ("id", "iq")}
    with matplotlib.rc_context({"svg.hashsalt": "dqsense", "svg.fonttype": "none"}):
        for stem, channels in pairs.items():
            fig, axes = plt.subplots(2, 2, figsize=(10, 6), constrained_layout=True)
            for row, name in enumerate(channels):
                t = result.t[result.window_start:]
                axes[row, 0].plot(t, result.window(name), lw=0.8)
                axes[row, 0].set_ylabel(f"{name} [A]")
                axes[row, 0].grid(True)
                spec = result.spectra.get(name) or spectrum(
                    TimeSeries(s.dt, name, result.window(name)), s.omega_m)
                keep = spec.orders <= 4 * s.motor.p
                axes[row, 1].plot(spec.orders[keep][1:], spec.magnitude[keep][1:], lw=0.8)
                axes[row, 1].set_ylabel("amplitude [A]")
                axes[row, 1].grid(True)
            axes[1, 0].set_xlabel("time [s]")
            axes[1, 1].set_xlabel("mechanical order")
            fig.suptitle(f"{s.name}: {stem.replace('_', ' ')} at {s.speed_rpm:g} rpm")
            path = out_dir / f"{stem}.svg"
            fig.savefig(path, format="svg", metadata={"Date": None})
            plt.close(fig)
            written.append(path)
    return written


def emit(result: RunResult, out_dir: str | Path, formats=("csv", "json")) -> list[Path]:
    formats = set(formats)
    unknown = formats - FORMATS
    if unknown:
        raise ValueError(f"unknown formats {sorted(unknown)}; choose from {sorted(FORMATS)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    if "csv" in formats:
        path = out_dir / TIMESERIES_FILE
        _write_timeseries(result, path)
        written.append(path)
        for name, spec in sorted(result.spectra.items()):
            path = out_dir / f"spectrum_{name}.csv"
            spec.to_csv(path)
            written.append(path)

    if "json" in formats:
        path = out_dir / "predicted_orders.json"
        path.write_text(json.dumps([asdict(line) for line in result.predicted], indent=2) + "\n")
        written.append(path)
        path = out_dir / "summary.json"
        path.write_text(json.dumps(result.summary(), indent=2) + "\n")
        written.append(path)

    if "svg" in formats:
        written.extend(_plot(result, out_dir))
    return written
