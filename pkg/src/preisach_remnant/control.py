"""Iterative remnant control: proportional, Newton and secant amplitude updates.

Each iteration applies a reset pulse of amplitude ``-polarity * a_max`` and
then a control pulse of amplitude ``A_k``; the remnant ``y_k`` is read once the
control pulse has returned to zero.  Amplitudes live in ``polarity * [0, a_max]``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Union

from .operators import DiscretePreisach, ExactPreisach
from .remnant import RemnantCurve, remnant_derivative
from .signals import make_triangle_pulse
from .weights import WeightField

Plant = Union[DiscretePreisach, ExactPreisach]


class InfeasibleTargetError(ValueError):
    pass


class DegenerateSlopeError(ArithmeticError):
    pass


class StalledSecantError(ArithmeticError):
    def __init__(self, message: str, hint_step: float | None = None):
        super().__init__(message)
        self.hint_step = hint_step


@dataclass(frozen=True)
class Proportional:
    gain: float
    initial_amplitude: float = 50.0

    def __post_init__(self):
        if self.gain <= 0:
            raise ValueError("proportional gain must be positive")

    @property
    def name(self) -> str:
        return f"proportional(lambda={self.gain:g})"


@dataclass(frozen=True)
class Newton:
    initial_amplitude: float = 100.0

    @property
    def name(self) -> str:
        return "newton"


@dataclass(frozen=True)
class Secant:
    a0: float = 50.0
    a1: float = 100.0

    def __post_init__(self):
        if self.a0 == self.a1:
            raise ValueError("secant seeds must differ")

    @property
    def name(self) -> str:
        return "secant"


Method = Union[Proportional, Newton, Secant]


@dataclass(frozen=True)
class ControllerConfig:
    method: Method
    y_d: float
    a_max: float = 400.0
    tolerance: float = 0.005
    max_iterations: int = 50
    period: float = 2.0

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.a_max <= 0:
            raise ValueError("a_max must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        seeds = (self.method.a0, self.method.a1) if isinstance(self.method, Secant) else (self.method.initial_amplitude,)
        if any(abs(a) > self.a_max for a in seeds):
            raise ValueError(f"initial amplitudes {seeds} exceed a_max = {self.a_max}")


class Step(NamedTuple):
    amplitude: float
    clamped: bool


def clamp_amplitude(amplitude: float, lo: float, hi: float) -> Step:
    if amplitude < lo:
        return Step(lo, True)
    if amplitude > hi:
        return Step(hi, True)
    return Step(amplitude, False)


def _limit(amplitude: float, a_max: float | None) -> Step:
    if a_max is None:
        return Step(amplitude, False)
    return clamp_amplitude(amplitude, -a_max, a_max)


def step_proportional(a_k: float, e_k: float, gain: float, a_max: float | None = None) -> Step:
    if gain <= 0:
        raise ValueError("proportional gain must be positive")
    return _limit(a_k - gain * e_k, a_max)


def step_newton(a_k: float, e_k: float, slope: float, slope_floor: float = 0.0, a_max: float | None = None) -> Step:
    if e_k == 0:
        return _limit(a_k, a_max)
    if slope == 0 or abs(slope) < slope_floor:
        raise DegenerateSlopeError(f"remnant slope {slope!r} below floor {slope_floor!r} at A = {a_k}")
    return _limit(a_k - e_k / slope, a_max)


def step_secant(
    a_k: float, a_km1: float, y_k: float, y_km1: float, e_k: float, a_max: float | None = None
) -> Step:
    if e_k == 0:
        return _limit(a_k, a_max)
    if a_k == a_km1 or y_k == y_km1:
        raise StalledSecantError(
            f"secant denominator vanished (A: {a_km1} -> {a_k}, y: {y_km1} -> {y_k}); "
            "perturb the amplitude by one grid step"
        )
    return _limit(a_k - e_k * (a_k - a_km1) / (y_k - y_km1), a_max)


@dataclass
class IterationRow:
    k: int
    amplitude: float
    remnant: float
    error: float
    slope: float | None
    clamped: bool


@dataclass
class IterationTrace:
    method: str
    y_d: float
    tolerance: float
    polarity: int
    rows: list[IterationRow] = field(default_factory=list)
    status: str = "running"
    reset_consistent: bool = True

    @property
    def converged(self) -> bool:
        return bool(self.rows) and abs(self.rows[-1].error) <= self.tolerance

    @property
    def iterations(self) -> int:
        return len(self.rows)

    @property
    def final_amplitude(self) -> float:
        return self.rows[-1].amplitude

    @property
    def final_error(self) -> float:
        return self.rows[-1].error

    def write_csv(self, path_or_file) -> None:
        own = isinstance(path_or_file, (str, Path))
        fh = Path(path_or_file).open("w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh)
            w.writerow(["k", "A_k", "y_k", "e_k", "slope", "clamped"])
            for r in self.rows:
                slope = "" if r.slope is None else repr(r.slope)
                w.writerow([r.k, repr(r.amplitude), repr(r.remnant), repr(r.error), slope, int(r.clamped)])
        finally:
            if own:
                fh.close()


def _reset(plant: Plant, level: float, period: float) -> None:
    plant.apply_input(make_triangle_pulse(level, period).values)


def choose_polarity(plant: Plant, y_d: float, a_max: float, period: float = 2.0) -> int:
    """+1 (negative resets, positive amplitudes) when the target lies above the
    remnant left by a negative reset, otherwise -1."""
    mass = plant.total_mass
    if not -mass <= y_d <= mass:
        raise InfeasibleTargetError(f"target {y_d} outside the output range [-{mass}, {mass}]")
    trial = plant.copy()
    _reset(trial, -a_max, period)
    return 1 if y_d > trial.output() else -1


def admissible_range(plant: Plant, a_max: float, period: float = 2.0) -> tuple[float, float]:
    """Lowest and highest remnant reachable with one reset and one pulse of size <= a_max."""
    lo_op, hi_op = plant.copy(), plant.copy()
    _reset(lo_op, a_max, period)
    lo_op.apply_input(make_triangle_pulse(-a_max, period).values)
    _reset(hi_op, -a_max, period)
    hi_op.apply_input(make_triangle_pulse(a_max, period).values)
    return lo_op.output(), hi_op.output()


def run_controller(
    plant: Plant,
    cfg: ControllerConfig,
    weight: WeightField | None = None,
    polarity: int | None = None,
) -> IterationTrace:
    """Run the reset-interleaved iterative schedule on ``plant`` (mutated in place).

    ``weight`` supplies the analytic remnant slope for Newton; it defaults to
    the plant's own weight for an :class:`ExactPreisach`.
    """
    method = cfg.method
    if polarity is None:
        polarity = choose_polarity(plant, cfg.y_d, cfg.a_max, cfg.period)
    trace = IterationTrace(method.name, cfg.y_d, cfg.tolerance, polarity)
    lo, hi = (0.0, cfg.a_max) if polarity > 0 else (-cfg.a_max, 0.0)
    reset_level = -polarity * cfg.a_max

    _reset(plant, reset_level, cfg.period)
    reference = plant.snapshot()

    curve = None
    slope_floor = 0.0
    if isinstance(method, Newton):
        weight = weight if weight is not None else getattr(plant, "weight", None)
        if weight is None:
            raise ValueError("Newton updates need a weight field for the analytic slope")
        curve = RemnantCurve(plant.memory(), weight)
        slope_floor = 1e-12 * plant.total_mass / cfg.a_max

    if isinstance(method, Secant):
        queue = [polarity * abs(method.a0), polarity * abs(method.a1)]
        k = 0
    else:
        queue = [polarity * abs(method.initial_amplitude)]
        k = 0 if isinstance(method, Proportional) else 1

    amplitude, clamped = clamp_amplitude(queue.pop(0), lo, hi)
    clamp_run = 0
    while True:
        y = float(plant.apply_input(make_triangle_pulse(amplitude, cfg.period).values)[-1])
        e = y - cfg.y_d
        slope = None
        next_amp = None
        done = abs(e) <= cfg.tolerance or len(trace.rows) + 1 >= cfg.max_iterations
        if not done:
            if queue:
                next_amp = queue.pop(0)
            elif isinstance(method, Proportional):
                next_amp = step_proportional(amplitude, e, method.gain).amplitude
            elif isinstance(method, Newton):
                slope = remnant_derivative(curve, amplitude)
                try:
                    next_amp = step_newton(amplitude, e, slope, slope_floor).amplitude
                except DegenerateSlopeError:
                    trace.rows.append(IterationRow(k, amplitude, y, e, slope, clamped))
                    trace.status = "degenerate_slope"
                    return trace
            else:
                prev = trace.rows[-1]
                if amplitude != prev.amplitude and y != prev.remnant:
                    slope = (y - prev.remnant) / (amplitude - prev.amplitude)
                try:
                    next_amp = step_secant(amplitude, prev.amplitude, y, prev.remnant, e).amplitude
                except StalledSecantError:
                    step = plant.spacing or cfg.tolerance * cfg.a_max
                    next_amp = amplitude - math.copysign(step, e)
        trace.rows.append(IterationRow(k, amplitude, y, e, slope, clamped))
        if done:
            break
        _reset(plant, reset_level, cfg.period)
        if not plant.matches(reference):
            trace.reset_consistent = False
        amplitude, clamped = clamp_amplitude(next_amp, lo, hi)
        clamp_run = clamp_run + 1 if clamped else 0
        k += 1
        if clamp_run >= 3:
            trace.status = "infeasible"
            return trace
    trace.status = "converged" if trace.converged else "max_iterations"
    return trace
