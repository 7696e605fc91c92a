"""Command-line front end: ``remnant {curve,control,montecarlo,simulate}``.

Every subcommand takes an optional JSON ``--config``; without one the
defaults describe the reference setup (1000 levels on [-400, 400], uniform
weight of total mass 1, equal relay weights, A_max = 400).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .control import ControllerConfig, InfeasibleTargetError, run_controller
from .experiment import ExperimentConfig, emit_outputs, method_from_dict, run_monte_carlo
from .interface import InterfaceLine
from .operators import InputRangeError
from .remnant import RemnantCurve, sample_curve, write_curve_csv
from .signals import read_samples_csv

log = logging.getLogger("preisach_remnant")

EXIT_OK, EXIT_ERROR, EXIT_NOT_CONVERGED = 0, 1, 2

# keys shared with ExperimentConfig that describe the plant and schedule
_PLANT_KEYS = {
    "bounds", "weight", "grid_levels", "relay_weights", "a_max", "tolerance", "max_iterations", "period",
}


def _load_config(path: str | None) -> tuple[dict, Path]:
    if path is None:
        return {}, Path.cwd()
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except OSError as exc:
        raise OSError(f"cannot read config {p}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{p}: config must be a JSON object")
    return data, p.parent


def _plant(cfg: dict, base: Path) -> ExperimentConfig:
    return ExperimentConfig.from_dict({k: v for k, v in cfg.items() if k in _PLANT_KEYS}, base_dir=base)


def _initial_interface(cfg: dict, setup: ExperimentConfig) -> InterfaceLine:
    choice = cfg.get("interface", "post_reset")
    if choice == "post_reset":
        return InterfaceLine.post_reset(setup.bounds, setup.a_max)
    if isinstance(choice, dict) and "vertices" in choice:
        return InterfaceLine(choice["vertices"], setup.bounds)
    raise ValueError(f"interface must be 'post_reset' or {{'vertices': [...]}}, got {choice!r}")


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_curve(args, cfg: dict, base: Path) -> int:
    setup = _plant(cfg, base)
    line = _initial_interface(cfg, setup)
    backend = cfg.get("backend", "grid")
    if backend not in ("grid", "analytic"):
        raise ValueError("backend must be 'grid' or 'analytic'")
    grid = cfg.get("amplitudes", {"start": 0.0, "stop": setup.a_max, "num": 101})
    amps = np.linspace(grid["start"], grid["stop"], int(grid["num"])) if isinstance(grid, dict) else grid
    curve = RemnantCurve(line, setup.weight_field(), setup.grid_levels if backend == "grid" else None)
    table = sample_curve(curve, amps)
    path = _out_dir(args.out) / "curve.csv"
    write_curve_csv(table, path)
    log.info("wrote %d rows to %s", len(table), path)
    return EXIT_OK


def cmd_control(args, cfg: dict, base: Path) -> int:
    setup = _plant(cfg, base)
    method = method_from_dict(cfg.get("method", {"method": "secant"}))
    y_d = float(args.target if args.target is not None else cfg.get("y_d", 0.1))
    ccfg = ControllerConfig(method, y_d, setup.a_max, setup.tolerance, setup.max_iterations, setup.period)
    plant = setup.build_operator()
    trace = run_controller(plant, ccfg, weight=setup.weight_field())
    out = _out_dir(args.out)
    trace.write_csv(out / "trace.csv")
    summary = {
        "method": trace.method,
        "y_d": y_d,
        "status": trace.status,
        "iterations": trace.iterations,
        "final_amplitude": trace.final_amplitude,
        "final_error": trace.final_error,
        "reset_consistent": trace.reset_consistent,
    }
    (out / "trace_summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    log.info("%s: %s after %d iterations, A = %.6g", trace.method, trace.status, trace.iterations,
             trace.final_amplitude)
    return EXIT_OK if trace.converged else EXIT_NOT_CONVERGED


def cmd_montecarlo(args, cfg: dict, base: Path) -> int:
    if args.seed is not None:
        cfg = {**cfg, "seed": args.seed}
    if args.threads is not None:
        cfg = {**cfg, "threads": args.threads}
    exp = ExperimentConfig.from_dict(cfg, base_dir=base)
    result = run_monte_carlo(exp)
    emit_outputs(result, args.out, exp)
    failed = sum(not r.converged for r in result.per_sample)
    log.info("%d runs, %d did not converge; outputs in %s", len(result.per_sample), failed, args.out)
    return EXIT_OK if failed == 0 else EXIT_NOT_CONVERGED


def cmd_simulate(args, cfg: dict, base: Path) -> int:
    setup = _plant(cfg, base)
    samples = read_samples_csv(args.input)
    plant = setup.build_operator()
    if cfg.get("interface") is not None:
        plant.set_interface(_initial_interface(cfg, setup))
    outputs = plant.apply_input([v for _, v in samples])
    path = _out_dir(args.out) / "output.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "input", "output"])
        for (t, v), y in zip(samples, outputs):
            w.writerow([repr(t), repr(v), repr(float(y))])
    log.info("wrote %d rows to %s", len(samples), path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="remnant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--out", default=out_default, help=f"output directory (default: {out_default})")
        p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = sub.add_parser("curve", help="sweep the remnant curve to curve.csv")
    common(p, "out/curve")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("control", help="single iterative control run to trace.csv")
    common(p, "out/control")
    p.add_argument("--target", type=float, help="desired remnant y_d (overrides the config)")
    p.set_defaults(func=cmd_control)

    p = sub.add_parser("montecarlo", help="Monte Carlo comparison of update laws")
    common(p, "out/montecarlo")
    p.add_argument("--seed", type=int, help="base seed (overrides the config)")
    p.add_argument("--threads", type=int, help="worker threads (results do not depend on it)")
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("simulate", help="run an input CSV through the relay grid to output.csv")
    common(p, "out/simulate")
    p.add_argument("--input", required=True, help="CSV with time,value columns or a single value column")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg, base = _load_config(args.config)
        return args.func(args, cfg, base)
    except (OSError, ValueError, KeyError, TypeError, InfeasibleTargetError, InputRangeError) as exc:
        print(f"remnant {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
