"""Amplitude-parametrised pulses, reset-interleaved schedules and time warps.

Signals are carried as extrema-complete sample sequences ``[(t, value), ...]``.
A rate-independent operator only sees the order of values, so a sequence that
contains every local extremum is an exact stand-in for the continuous signal.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

Samples = list[tuple[float, float]]


@dataclass(frozen=True)
class PulseSignal:
    amplitude: float
    rise_end: float
    settle_end: float
    shape: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        v = np.where((t <= 0) | (t >= self.settle_end), 0.0, self.shape(np.clip(t, 0, self.settle_end)))
        return np.where(t == self.rise_end, self.amplitude, v)

    @property
    def values(self) -> list[float]:
        return [0.0, float(self.amplitude), 0.0]

    def samples(self, points: int = 3) -> Samples:
        """``points`` evenly spaced samples over [0, settle_end] plus the peak."""
        t = np.union1d(np.linspace(0.0, self.settle_end, max(points, 2)), [self.rise_end])
        return [(float(ti), float(vi)) for ti, vi in zip(t, self(t))]


def make_triangle_pulse(amplitude: float, period: float) -> PulseSignal:
    """Symmetric triangle: 0 at t=0, ``amplitude`` at period/2, 0 at ``period``."""
    if period <= 0:
        raise ValueError("pulse period must be positive")
    half = period / 2

    def shape(t):
        return amplitude * (1.0 - np.abs(t - half) / half)

    return PulseSignal(float(amplitude), half, float(period), shape)


def make_half_sine_pulse(amplitude: float, period: float) -> PulseSignal:
    if period <= 0:
        raise ValueError("pulse period must be positive")
    return PulseSignal(float(amplitude), period / 2, float(period), lambda t: amplitude * np.sin(np.pi * t / period))


def make_asymmetric_pulse(amplitude: float, rise: float, fall: float) -> PulseSignal:
    """Triangle that rises over ``rise`` and falls over ``fall``."""
    if rise <= 0 or fall <= 0:
        raise ValueError("rise and fall times must be positive")

    def shape(t):
        return np.where(t <= rise, amplitude * t / rise, amplitude * (1.0 - (t - rise) / fall))

    return PulseSignal(float(amplitude), float(rise), float(rise + fall), shape)


@dataclass
class ValidationReport:
    r1: bool
    r2: bool
    r3: bool
    r4: bool
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.r1 and self.r2 and self.r3 and self.r4


def validate_r1_r4(pulse: PulseSignal, samples: int = 10_000) -> ValidationReport:
    """Check the admissible-pulse conditions on a sample grid.

    R1 zero at t=0 and from settle_end on; R2 monotone on each half;
    R3 strictly opposite slope signs on the two halves; R4 first-half slope
    sign equals sign(amplitude).
    """
    if samples < 3:
        raise ValueError("need at least 3 samples")
    t1, t2 = pulse.rise_end, pulse.settle_end
    notes: list[str] = []
    scale = max(abs(pulse.amplitude), 1.0)
    tol = 1e-12 * scale

    def raw(t):
        return np.asarray(pulse.shape(np.asarray(t, dtype=float)), dtype=float)

    # past settle_end the signal is zero by construction, so R1 reduces to the endpoints
    r1 = abs(float(raw(0.0))) <= tol and abs(float(raw(t2))) <= tol
    if not r1:
        notes.append("R1: pulse does not start at 0 or does not return to 0")

    first = np.diff(raw(np.linspace(0.0, t1, samples)))
    second = np.diff(raw(np.linspace(t1, t2, samples)))

    def monotone(d):
        return bool(np.all(d >= -tol) or np.all(d <= tol))

    r2 = monotone(first) and monotone(second)
    if not r2:
        notes.append("R2: not monotone on (0, T1) and (T1, T2)")
    s1 = np.sign(first)
    s2 = np.sign(second)
    r3 = bool(np.all(s1 == s1[0]) and np.all(s2 == s2[0]) and s1[0] * s2[0] < 0)
    if not r3:
        notes.append("R3: slopes on the two intervals are not of strictly opposite sign")
    r4 = bool(np.all(s1 == np.sign(pulse.amplitude)))
    if not r4:
        notes.append("R4: first-interval slope sign differs from sign(A)")
    return ValidationReport(r1, r2, r3, r4, notes)


def _append(out: Samples, pts: Iterable[tuple[float, float]]) -> None:
    for t, v in pts:
        if out and out[-1][0] == t and out[-1][1] == v:
            continue
        out.append((float(t), float(v)))


def compose_schedule(
    amplitudes: Sequence[float],
    a_max: float,
    period: float,
    polarity: int = 1,
    pulse: Callable[[float, float], PulseSignal] = make_triangle_pulse,
) -> Samples:
    """Reset pulse, then (control pulse, reset pulse) for each amplitude.

    Reset pulses have amplitude ``-polarity * a_max``; every pulse lasts ``period``.
    """
    if period <= 0:
        raise ValueError("period must be positive")
    if polarity not in (1, -1):
        raise ValueError("polarity must be +1 or -1")
    for k, a in enumerate(amplitudes):
        if abs(a) > a_max:
            raise ValueError(f"amplitude {k} = {a} exceeds a_max = {a_max}")
    reset = -polarity * a_max
    sequence = [reset]
    for a in amplitudes:
        sequence += [a, reset]
    out: Samples = []
    for k, amp in enumerate(sequence):
        p = pulse(amp, period)
        _append(out, ((k * period + t, v) for t, v in zip((0.0, p.rise_end, p.settle_end), p.values)))
    return out


@dataclass
class IterativeInputSchedule:
    a_max: float
    period: float
    amplitudes: list[float] = field(default_factory=list)
    polarity: int = 1

    def samples(self) -> Samples:
        return compose_schedule(self.amplitudes, self.a_max, self.period, self.polarity)


def write_samples_csv(samples: Samples, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "value"])
        for t, v in samples:
            w.writerow([repr(t), repr(v)])


def read_samples_csv(path: str | Path) -> Samples:
    """Read ``time,value`` rows (or a single ``value`` column, indexed by row)."""
    with Path(path).open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise ValueError(f"{path}: empty input file")
    header = [c.strip().lower() for c in rows[0]]
    body = rows[1:] if not _is_number(rows[0][0]) else rows
    if header == ["value"] or len(body[0]) == 1:
        return [(float(i), float(r[0])) for i, r in enumerate(body)]
    return [(float(r[0]), float(r[1])) for r in body]


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _preimage(f, target, lo, hi):
    """Smallest tau in [lo, hi] with f(tau) >= target, for non-decreasing f."""
    if f(lo) >= target:
        return lo
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return hi
        if f(mid) >= target:
            hi = mid
        else:
            lo = mid


def time_transform(samples: Samples, f: Callable[[float], float], points: int = 0) -> Samples:
    """Samples of ``u o f`` where ``u`` linearly interpolates ``samples``.

    ``f`` must be continuous and non-decreasing from the sample time range onto
    itself.  Every original sample reappears at a preimage time, so the
    sequence of extrema is unchanged; ``points`` extra evenly spaced samples
    add intermediate ramp values.
    """
    t = np.array([s[0] for s in samples], dtype=float)
    v = np.array([s[1] for s in samples], dtype=float)
    if t.size == 0:
        return []
    if np.any(np.diff(t) < 0):
        raise ValueError("sample times must be non-decreasing")
    t0, t1 = float(t[0]), float(t[-1])
    probe = np.linspace(t0, t1, max(1000, 10 * t.size))
    fp = np.array([f(x) for x in probe])
    if np.any(np.diff(fp) < 0):
        raise ValueError("time transformation is not monotone")
    span = max(t1 - t0, 1.0)
    if abs(fp[0] - t0) > 1e-9 * span or abs(fp[-1] - t1) > 1e-9 * span:
        raise ValueError("time transformation must map the time range onto itself")
    new_t = [_preimage(f, tk, t0, t1) for tk in t]
    out = list(zip(new_t, v.tolist()))
    if points:
        extra = np.linspace(t0, t1, points)
        vals = np.interp([f(x) for x in extra], t, v)
        out += list(zip(extra.tolist(), vals.tolist()))
        # keep original samples ahead of extras at equal times so extrema order is preserved
        order = sorted(range(len(out)), key=lambda k: (out[k][0], k >= len(new_t)))
        out = [out[k] for k in order]
    return [(float(a), float(b)) for a, b in out]
