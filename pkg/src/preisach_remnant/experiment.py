"""Monte Carlo comparison of remnant update laws over random targets."""
from __future__ import annotations

import csv
import json
import statistics
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .control import (
    ControllerConfig,
    IterationTrace,
    Method,
    Newton,
    Proportional,
    Secant,
    admissible_range,
    run_controller,
)
from .interface import PlaneBounds
from .operators import DiscretePreisach
from .weights import UniformWeight, WeightField, weight_from_spec

RNG_DESCRIPTION = {
    "bit_generator": "PCG64",
    "seeding": "numpy SeedSequence([seed, sample_index])",
    "normal": "ziggurat (numpy Generator.normal)",
}
MAX_RESAMPLES = 100


def method_from_dict(d: dict) -> Method:
    kind = d.get("method")
    if kind == "proportional":
        return Proportional(float(d["gain"]), float(d.get("initial_amplitude", 50.0)))
    if kind == "newton":
        return Newton(float(d.get("initial_amplitude", 100.0)))
    if kind == "secant":
        return Secant(float(d.get("a0", 50.0)), float(d.get("a1", 100.0)))
    raise ValueError(f"unknown method {kind!r}")


def method_to_dict(m: Method) -> dict:
    kind = {Proportional: "proportional", Newton: "newton", Secant: "secant"}[type(m)]
    return {"method": kind, **asdict(m)}


def default_methods() -> list[Method]:
    return [Secant(50.0, 100.0), Proportional(100.0), Proportional(200.0), Proportional(300.0)]


@dataclass
class ExperimentConfig:
    samples: int = 100
    target_mean: float = 0.1
    target_std: float = 0.0878
    seed: int = 20240101
    methods: list[Method] = field(default_factory=default_methods)
    grid_levels: int = 1000
    bounds: PlaneBounds = field(default_factory=lambda: PlaneBounds(-400.0, 400.0))
    weight: dict = field(default_factory=lambda: {"kind": "uniform", "mass": 1.0})
    relay_weights: str = "equal"
    a_max: float = 400.0
    tolerance: float = 0.005
    max_iterations: int = 50
    period: float = 2.0
    random_initial: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not (np.isfinite(self.target_mean) and np.isfinite(self.target_std)) or self.target_std < 0:
            raise ValueError("target distribution needs finite mean and nonnegative std")
        if not self.methods:
            raise ValueError("at least one method is required")
        if not 0 < self.a_max <= max(abs(self.bounds.u_min), abs(self.bounds.u_max)):
            raise ValueError("a_max must be positive and inside the plane bounds")
        if self.relay_weights not in ("equal", "cell"):
            raise ValueError("relay_weights must be 'equal' or 'cell'")
        if self.relay_weights == "equal" and self.weight.get("kind", "uniform") != "uniform":
            raise ValueError("equal relay weights only make sense for a uniform weight")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    @classmethod
    def from_dict(cls, d: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        d = dict(d)
        if "bounds" in d:
            d["bounds"] = PlaneBounds(*d["bounds"])
        if "methods" in d:
            d["methods"] = [method_from_dict(m) for m in d["methods"]]
        if "weight" in d and d["weight"].get("kind") == "grid" and base_dir is not None:
            d["weight"] = {**d["weight"], "csv": str((base_dir / d["weight"]["csv"]).resolve())}
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown experiment config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise OSError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data, base_dir=path.parent)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bounds"] = self.bounds.as_list()
        d["methods"] = [method_to_dict(m) for m in self.methods]
        return d

    def weight_field(self) -> WeightField:
        return weight_from_spec(self.weight, self.bounds)

    def build_operator(self) -> DiscretePreisach:
        w = self.weight_field()
        if self.relay_weights == "equal":
            assert isinstance(w, UniformWeight)
            return DiscretePreisach.uniform(self.grid_levels, self.bounds, w.total_mass)
        return DiscretePreisach.from_weight(w, self.grid_levels)


@dataclass
class SampleRecord:
    sample: int
    target: float
    method: str
    iterations: int
    converged: bool
    final_error: float
    resamples: int = 0


@dataclass
class ExperimentResult:
    method_names: list[str]
    per_sample: list[SampleRecord] = field(default_factory=list)
    traces: dict[tuple[int, str], IterationTrace] = field(default_factory=dict)

    @property
    def histogram(self) -> dict[str, Counter]:
        hist = {name: Counter() for name in self.method_names}
        for rec in self.per_sample:
            hist[rec.method][rec.iterations] += 1
        return hist

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.per_sample)

    def iterations(self, method: str) -> list[int]:
        return [r.iterations for r in sorted(self.per_sample, key=lambda r: r.sample) if r.method == method]


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def draw_target(rng: np.random.Generator, cfg: ExperimentConfig, lo: float, hi: float) -> tuple[float, int]:
    for attempt in range(MAX_RESAMPLES):
        y = float(rng.normal(cfg.target_mean, cfg.target_std))
        if lo <= y <= hi:
            return y, attempt
    raise ValueError(
        f"no feasible target in {MAX_RESAMPLES} draws from N({cfg.target_mean}, {cfg.target_std}) "
        f"within [{lo}, {hi}]"
    )


def random_history(rng: np.random.Generator, bounds: PlaneBounds, turns: int = 6) -> list[float]:
    """Alternating extrema of shrinking size, ending at 0: a random resting memory."""
    hi, lo = bounds.u_max, bounds.u_min
    values = []
    for k in range(turns):
        if k % 2 == 0:
            hi = float(rng.uniform(0.0, hi))
            values.append(hi)
        else:
            lo = float(rng.uniform(lo, 0.0))
            values.append(lo)
    values.append(0.0)
    return values


def _run_sample(index: int, cfg: ExperimentConfig, template: DiscretePreisach, weight: WeightField,
                lo: float, hi: float):
    rng = sample_rng(cfg.seed, index)
    target, resamples = draw_target(rng, cfg, lo, hi)
    history = random_history(rng, cfg.bounds) if cfg.random_initial else []
    records, traces = [], {}
    for method in cfg.methods:
        plant = template.copy()
        if history:
            plant.apply_input(history)
        ccfg = ControllerConfig(method, target, cfg.a_max, cfg.tolerance, cfg.max_iterations, cfg.period)
        trace = run_controller(plant, ccfg, weight=weight)
        records.append(
            SampleRecord(index, target, method.name, trace.iterations, trace.converged, trace.final_error, resamples)
        )
        traces[(index, method.name)] = trace
    return records, traces


def run_monte_carlo(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    names = [m.name for m in cfg.methods]
    if len(set(names)) != len(names):
        raise ValueError(f"method names must be unique, got {names}")
    template = cfg.build_operator()
    weight = cfg.weight_field()
    lo, hi = admissible_range(template, cfg.a_max, cfg.period)
    if not lo <= cfg.target_mean <= hi:
        raise ValueError(f"target mean {cfg.target_mean} outside the admissible remnant range [{lo}, {hi}]")
    workers = threads or cfg.threads
    result = ExperimentResult(names)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda i: _run_sample(i, cfg, template, weight, lo, hi), range(cfg.samples)))
    else:
        parts = [_run_sample(i, cfg, template, weight, lo, hi) for i in range(cfg.samples)]
    for records, traces in parts:
        result.per_sample.extend(records)
        result.traces.update(traces)
    return result


def summarize(result: ExperimentResult) -> dict:
    methods = {}
    for name in result.method_names:
        its = [r.iterations for r in result.per_sample if r.method == name]
        conv = [r.converged for r in result.per_sample if r.method == name]
        methods[name] = {
            "samples": len(its),
            "converged": sum(conv),
            "convergence_rate": (sum(conv) / len(conv)) if conv else 0.0,
            "mean_iterations": statistics.fmean(its) if its else None,
            "median_iterations": statistics.median(its) if its else None,
            "max_iterations": max(its) if its else None,
        }
    targets = {r.sample: r for r in result.per_sample}
    return {
        "rng": RNG_DESCRIPTION,
        "samples": len(targets),
        "resamples": sum(r.resamples for r in targets.values()),
        "methods": methods,
    }


def emit_outputs(result: ExperimentResult, out_dir: str | Path, config: ExperimentConfig | None = None) -> list[Path]:
    """Write histogram.csv, transients.csv and summary.json into ``out_dir``."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        hist_path = out / "histogram.csv"
        with hist_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["method", "iterations", "count"])
            for name, counts in result.histogram.items():
                for its in sorted(counts):
                    w.writerow([name, its, counts[its]])
        trans_path = out / "transients.csv"
        with trans_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sample", "method", "k", "A_k", "y_k", "e_k"])
            for rec in sorted(result.per_sample, key=lambda r: (r.sample, result.method_names.index(r.method))):
                for row in result.traces[(rec.sample, rec.method)].rows:
                    w.writerow([rec.sample, rec.method, row.k, repr(row.amplitude), repr(row.remnant), repr(row.error)])
        summary = summarize(result)
        if config is not None:
            # worker count is an execution detail; leaving it out keeps outputs identical across it
            summary["config"] = {k: v for k, v in config.to_dict().items() if k != "threads"}
        summary_path = out / "summary.json"
        summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write outputs to {out}: {exc}") from exc
    return [hist_path, trans_path, summary_path]
