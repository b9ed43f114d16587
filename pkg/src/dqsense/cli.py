"""Command-line entry point: ``dqsense run|sweep|validate|orders``."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

from .emit import FORMATS, emit
from .estimation import predicted_orders
from .scenario import ScenarioError, load_scenario
from .simulate import DivergenceError, run
from .validate import validate_analytic

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2
EXIT_IO = 3


def _formats(text: str) -> list[str]:
    items = [f.strip() for f in text.split(",") if f.strip()]
    bad = set(items) - FORMATS
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {sorted(bad)}")
    return items


def _run_one(path: Path, out_dir: Path, formats: list[str]) -> tuple[int, str]:
    try:
        scenario = load_scenario(path)
        result = run(scenario)
        written = emit(result, out_dir, formats)
    except ScenarioError as exc:
        return EXIT_CONFIG, f"{path}: invalid config: {exc}"
    except DivergenceError as exc:
        return EXIT_DIVERGED, f"{path}: diverged: {exc}"
    except OSError as exc:
        return EXIT_IO, f"{path}: {exc}"
    return EXIT_OK, f"{scenario.name}: wrote {len(written)} file(s) to {out_dir}"


def cmd_run(args) -> int:
    out = Path(args.out) if args.out else Path("out") / Path(args.scenario).stem
    code, msg = _run_one(Path(args.scenario), out, args.formats)
    print(msg, file=sys.stderr if code else sys.stdout)
    return code


def cmd_sweep(args) -> int:
    root = Path(args.scenarios_dir)
    if not root.is_dir():
        print(f"{root}: not a directory", file=sys.stderr)
        return EXIT_IO
    paths = sorted(root.glob("*.json"))
    if not paths:
        print(f"{root}: no *.json scenarios", file=sys.stderr)
        return EXIT_CONFIG
    out_root = Path(args.out)
    jobs = [(p, out_root / p.stem, args.formats) for p in paths]
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(_run_one, *zip(*jobs)))
    for code, msg in results:
        print(msg, file=sys.stderr if code else sys.stdout)
    return max(code for code, _ in results)


def cmd_validate(args) -> int:
    report = validate_analytic(seed=args.seed, trials=args.trials)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print("\n".join(report.lines()))
    return EXIT_OK


def cmd_orders(args) -> int:
    try:
        s = load_scenario(args.scenario)
        lines = predicted_orders(s.position_error, s.current_error, s.motor, s.command)
    except ScenarioError as exc:
        print(f"{args.scenario}: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(exc, file=sys.stderr)
        return EXIT_IO
    if args.json:
        print(json.dumps([asdict(line) for line in lines], indent=2))
        return EXIT_OK
    f_mech = s.speed_rpm / 60.0
    print(f"{'order':>6} {'freq_hz':>9} {'channel':>7} {'amplitude_A':>14}")
    for line in lines:
        print(f"{line.order:>6d} {line.order * f_mech:>9.4f} {line.channel:>7} "
              f"{line.amplitude:>14.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqsense",
        description="PMSM dq current estimation under position and current sensor errors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario")
    p.add_argument("scenario")
    p.add_argument("--out", help="output directory (default out/<scenario stem>)")
    p.add_argument("--formats", type=_formats, default=["csv", "json"],
                   help="comma list of csv,svg,json (default csv,json)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="simulate every *.json in a directory")
    p.add_argument("scenarios_dir")
    p.add_argument("--out", default="out")
    p.add_argument("--formats", type=_formats, default=["csv", "json"])
    p.add_argument("--jobs", type=int, default=None, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="randomized analytic-vs-oracle sweep")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("orders", help="print predicted spectral lines without simulating")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_orders)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        print("--trials must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
