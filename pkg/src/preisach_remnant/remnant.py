"""Remnant curve: the output left once a single pulse of amplitude A has returned to zero.

Relays take the values +/-1, so a relay flipping from -1 to +1 moves the
output by twice its weight.  All switched-region formulas here carry that
factor of two.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .interface import InterfaceLine, wipe_update
from .operators import DiscretePreisach, output_from_interface
from .signals import PulseSignal, make_triangle_pulse
from .weights import WeightField

Rect = tuple[float, float, float, float]  # (a0, a1, b0, b1)


@dataclass(frozen=True)
class OmegaRegion:
    """Relays switched by one pulse.  ``sign`` is +1 when they flip -1 -> +1."""

    rectangles: tuple[Rect, ...]
    polygon: tuple[tuple[float, float], ...]
    sign: int

    @property
    def area(self) -> float:
        return float(sum((a1 - a0) * (b1 - b0) for a0, a1, b0, b1 in self.rectangles))

    def polygon_area(self) -> float:
        if len(self.polygon) < 3:
            return 0.0
        x, y = np.array(self.polygon).T
        return float(0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))

    def mass(self, weight: WeightField) -> float:
        return float(sum(weight.mass_rect(*r) for r in self.rectangles))

    def contains(self, alpha, beta) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        inside = np.zeros(np.broadcast(alpha, beta).shape, dtype=bool)
        for a0, a1, b0, b1 in self.rectangles:
            inside |= (alpha >= a0) & (alpha < a1) & (beta >= b0) & (beta < b1)
        return inside


def _require_rest(line: InterfaceLine) -> None:
    if not line.at_rest:
        raise ValueError(f"remnant quantities need an interface at rest (input 0), start is {line.start}")


def _check_amplitude(line: InterfaceLine, amplitude: float) -> None:
    b = line.bounds
    if not b.contains(amplitude):
        raise ValueError(f"amplitude {amplitude} outside [{b.u_min}, {b.u_max}]")


def omega_region(line: InterfaceLine, amplitude: float) -> OmegaRegion:
    """Region enclosed between ``line`` and ``wipe_update(line, amplitude)``."""
    _require_rest(line)
    _check_amplitude(line, amplitude)
    A = float(amplitude)
    if A > 0:
        rects = tuple((a0, min(a1, A), lev, 0.0) for a0, a1, lev in line.steps if a0 < A and lev < 0.0)
        left = next(lev for a0, a1, lev in line.steps if a0 < A <= a1)
        path = [(a, b) for a, b in line.vertices if a < A]
        path.append((A, left))
        polygon = [(0.0, 0.0), (A, 0.0)] + path[::-1][:-1]
        sign = 1
    elif A < 0:
        rects = tuple((a0, a1, A, lev) for a0, a1, lev in line.steps if lev > A)
        edge = line.first_alpha_at_or_below(A)
        path = [(a, b) for a, b in line.vertices if b > A and a <= edge]
        path.append((edge, A))
        polygon = path + [(0.0, A)]
        sign = -1
    else:
        return OmegaRegion((), (), 1)
    if not rects:
        return OmegaRegion((), (), sign)
    return OmegaRegion(rects, _simplify(polygon), sign)


def _simplify(poly: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    out: list[tuple[float, float]] = []
    for p in poly:
        if out and out[-1] == p:
            continue
        out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    # drop collinear middle points
    changed = True
    while changed and len(out) > 3:
        changed = False
        for i in range(len(out)):
            p, q, r = out[i - 1], out[i], out[(i + 1) % len(out)]
            if (p[0] == q[0] == r[0]) or (p[1] == q[1] == r[1]):
                out.pop(i)
                changed = True
                break
    return tuple(out)


@dataclass
class RemnantCurve:
    """Remnant as a function of pulse amplitude from a fixed resting interface.

    ``grid_levels=None`` evaluates by exact integration over the switched
    region; an integer runs each pulse through a fresh relay grid of that many
    levels (relay weights from the cell masses of ``weight``).  The derivative
    is always analytic.
    """

    base: InterfaceLine
    weight: WeightField
    grid_levels: int | None = None
    pulse: Callable[[float, float], PulseSignal] = make_triangle_pulse
    pulse_points: int = 3
    _rho0: float = field(init=False, repr=False)
    _template: DiscretePreisach | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        _require_rest(self.base)
        if self.base.bounds != self.weight.bounds:
            raise ValueError("interface and weight live on different planes")
        self._rho0 = output_from_interface(self.base, self.weight)
        if self.grid_levels is not None:
            op = DiscretePreisach.from_weight(self.weight, self.grid_levels)
            op.set_interface(self.base)
            self._template = op

    @property
    def rho0(self) -> float:
        return self._rho0

    @property
    def bounds(self):
        return self.base.bounds

    def lipschitz_bound(self) -> float:
        return 2.0 * self.bounds.width * self.weight.sup_density


def remnant_value(curve: RemnantCurve, amplitude: float) -> float:
    _check_amplitude(curve.base, amplitude)
    if curve._template is not None:
        op = curve._template.copy()
        values = [v for _, v in curve.pulse(amplitude, 2.0).samples(curve.pulse_points)]
        return float(op.apply_input(values)[-1])
    region = omega_region(curve.base, amplitude)
    return curve.rho0 + 2.0 * region.sign * region.mass(curve.weight)


def remnant_derivative(curve: RemnantCurve, amplitude: float) -> float:
    """Upper-right derivative of the remnant curve at ``amplitude``."""
    line, w = curve.base, curve.weight
    _check_amplitude(line, amplitude)
    A = float(amplitude)
    if A >= 0:
        if A >= line.bounds.u_max:
            return 0.0
        return 2.0 * w.alpha_line(A, line.level_at(A), 0.0)
    return 2.0 * w.beta_line(A, 0.0, line.first_alpha_at_or_below(A))


def sample_curve(curve: RemnantCurve, amplitudes: Sequence[float]) -> np.ndarray:
    """Rows of (A, rho(A), rho'(A)) for an ascending amplitude grid."""
    grid = np.asarray(amplitudes, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ValueError("amplitude grid must be sorted ascending")
    rows = [(a, remnant_value(curve, a), remnant_derivative(curve, a)) for a in grid]
    return np.array(rows, dtype=float).reshape(-1, 3)


def write_curve_csv(table: np.ndarray, path_or_file) -> None:
    own = isinstance(path_or_file, (str, Path))
    fh = Path(path_or_file).open("w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh)
        w.writerow(["A", "rho", "drho_dA"])
        for a, r, d in table:
            w.writerow([repr(float(a)), repr(float(r)), repr(float(d))])
    finally:
        if own:
            fh.close()


def remnant_by_wiping(curve: RemnantCurve, amplitude: float) -> float:
    """Remnant via the full interface update; independent of the region bookkeeping."""
    return output_from_interface(wipe_update(curve.base, amplitude), curve.weight)
