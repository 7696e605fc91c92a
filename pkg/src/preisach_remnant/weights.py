"""Weight densities over the Preisach triangle u_min <= beta <= alpha <= u_max.

All masses are integrals over (rectangle intersected with the triangle), which
is the only region shape the staircase interface ever produces.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate, special

from .interface import PlaneBounds


def _ramp_integral(x, b0, height):
    """Integral of clip(t - b0, 0, height) for t from -inf to x."""
    x = np.asarray(x, dtype=float)
    t = x - b0
    return np.where(
        t <= 0.0,
        0.0,
        np.where(t <= height, 0.5 * t * t, 0.5 * height * height + height * (t - height)),
    )


def triangle_rect_area(a0, a1, b0, b1):
    """Area of {(alpha, beta) in [a0, a1] x [b0, b1] : beta <= alpha} (vectorised)."""
    a0, a1, b0, b1 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a0, a1, b0, b1)))
    height = np.maximum(b1 - b0, 0.0)
    area = _ramp_integral(a1, b0, height) - _ramp_integral(a0, b0, height)
    return np.where((a1 > a0) & (b1 > b0), area, 0.0)


def _overlap(lo, hi, edges):
    """Overlap lengths of [lo, hi] with each cell [edges[i], edges[i+1]]."""
    return np.clip(np.minimum(hi, edges[1:]) - np.maximum(lo, edges[:-1]), 0.0, None)


class WeightField:
    """Base class; subclasses provide the closed forms."""

    bounds: PlaneBounds

    def _clip(self, a0, a1, b0, b1):
        b = self.bounds
        return max(a0, b.u_min), min(a1, b.u_max), max(b0, b.u_min), min(b1, b.u_max)

    def density(self, alpha, beta) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        b = self.bounds
        inside = (beta <= alpha) & (beta >= b.u_min) & (alpha <= b.u_max)
        return np.where(inside, self._raw_density(alpha, beta), 0.0)

    def mass_rect(self, a0: float, a1: float, b0: float, b1: float) -> float:
        """Mass of [a0, a1] x [b0, b1] intersected with the triangle."""
        a0, a1, b0, b1 = self._clip(a0, a1, b0, b1)
        if a1 <= a0 or b1 <= b0 or a1 <= b0:
            return 0.0
        return float(self._mass_rect(a0, a1, b0, b1))

    @property
    def total_mass(self) -> float:
        b = self.bounds
        return self.mass_rect(b.u_min, b.u_max, b.u_min, b.u_max)

    def alpha_line(self, alpha: float, b0: float, b1: float) -> float:
        """Integral of w(alpha, beta) over beta in [b0, b1], within the triangle."""
        b = self.bounds
        b0, b1 = max(b0, b.u_min), min(b1, alpha)
        if b1 <= b0 or not b.contains(alpha):
            return 0.0
        return float(self._alpha_line(alpha, b0, b1))

    def beta_line(self, beta: float, a0: float, a1: float) -> float:
        """Integral of w(alpha, beta) over alpha in [a0, a1], within the triangle."""
        b = self.bounds
        a0, a1 = max(a0, beta), min(a1, b.u_max)
        if a1 <= a0 or not b.contains(beta):
            return 0.0
        return float(self._beta_line(beta, a0, a1))

    def cell_masses(self, levels: int) -> np.ndarray:
        """Mass of each relay cell of an n-level grid, shape (n, n), indexed [alpha, beta].

        Off-diagonal cells are full squares; diagonal cells are the half
        triangles below the diagonal.  Entries above the diagonal are zero.
        """
        b = self.bounds
        edges = np.linspace(b.u_min, b.u_max, levels + 1)
        masses = np.tril(self._square_cell_masses(edges), k=-1)
        for i in range(levels):
            masses[i, i] = self.mass_rect(edges[i], edges[i + 1], edges[i], edges[i + 1])
        return masses

    @property
    def strictly_positive(self) -> bool:
        raise NotImplementedError

    @property
    def sup_density(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class UniformWeight(WeightField):
    bounds: PlaneBounds
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("weight density must be nonnegative")

    @classmethod
    def with_mass(cls, bounds: PlaneBounds, mass: float = 1.0) -> "UniformWeight":
        return cls(bounds, mass / bounds.area)

    def _raw_density(self, alpha, beta):
        return np.full(np.broadcast(alpha, beta).shape, self.value)

    def _mass_rect(self, a0, a1, b0, b1):
        return self.value * triangle_rect_area(a0, a1, b0, b1)

    def _alpha_line(self, alpha, b0, b1):
        return self.value * (b1 - b0)

    def _beta_line(self, beta, a0, a1):
        return self.value * (a1 - a0)

    def _square_cell_masses(self, edges):
        h = np.diff(edges)
        return self.value * np.outer(h, h)

    @property
    def strictly_positive(self) -> bool:
        return self.value > 0

    @property
    def sup_density(self) -> float:
        return self.value


@dataclass(frozen=True)
class GaussianWeight(WeightField):
    """Isotropic Gaussian bump; ``mass`` is its integral over the whole plane."""

    bounds: PlaneBounds
    center: tuple[float, float]
    sigma: float
    mass: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0 or self.mass < 0:
            raise ValueError("gaussian weight needs sigma > 0 and mass >= 0")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    def _pdf(self, x, c):
        return np.exp(-0.5 * ((np.asarray(x, dtype=float) - c) / self.sigma) ** 2) / (
            self.sigma * np.sqrt(2 * np.pi)
        )

    def _cdf(self, x, c):
        return special.ndtr((np.asarray(x, dtype=float) - c) / self.sigma)

    def _raw_density(self, alpha, beta):
        ca, cb = self.center
        return self.mass * self._pdf(alpha, ca) * self._pdf(beta, cb)

    def _mass_rect(self, a0, a1, b0, b1):
        ca, cb = self.center
        total = 0.0
        # columns entirely right of b1: the full beta range is inside the triangle
        lo = max(a0, b1)
        if a1 > lo:
            total += (self._cdf(a1, ca) - self._cdf(lo, ca)) * (self._cdf(b1, cb) - self._cdf(b0, cb))
        # columns crossing the diagonal
        c0, c1 = max(a0, b0), min(a1, b1)
        if c1 > c0:
            fb0 = self._cdf(b0, cb)
            val, _ = integrate.quad(
                lambda a: self._pdf(a, ca) * (self._cdf(a, cb) - fb0),
                c0,
                c1,
                epsabs=1e-15,
                epsrel=1e-12,
                limit=200,
            )
            total += val
        return self.mass * total

    def _alpha_line(self, alpha, b0, b1):
        ca, cb = self.center
        return self.mass * self._pdf(alpha, ca) * (self._cdf(b1, cb) - self._cdf(b0, cb))

    def _beta_line(self, beta, a0, a1):
        ca, cb = self.center
        return self.mass * self._pdf(beta, cb) * (self._cdf(a1, ca) - self._cdf(a0, ca))

    def _square_cell_masses(self, edges):
        ca, cb = self.center
        return self.mass * np.outer(np.diff(self._cdf(edges, ca)), np.diff(self._cdf(edges, cb)))

    @property
    def strictly_positive(self) -> bool:
        return self.mass > 0

    @property
    def sup_density(self) -> float:
        return float(self.mass / (2 * np.pi * self.sigma**2))


@dataclass(frozen=True, eq=False)
class GridWeight(WeightField):
    """Piecewise-constant density on cells anchored at (u_min, u_min).

    ``values[i, j]`` is the density on alpha-cell i, beta-cell j.  Cells
    above the diagonal are ignored.
    """

    bounds: PlaneBounds
    values: np.ndarray
    alpha_spacing: float
    beta_spacing: float | None = None
    _a_edges: np.ndarray = field(init=False, repr=False)
    _b_edges: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("grid weight values must be a 2D array")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("grid weight values must be finite and nonnegative")
        db = self.alpha_spacing if self.beta_spacing is None else self.beta_spacing
        b = self.bounds
        for count, spacing, name in ((values.shape[0], self.alpha_spacing, "alpha"), (values.shape[1], db, "beta")):
            if spacing <= 0 or not np.isclose(count * spacing, b.width, rtol=1e-9, atol=0):
                raise ValueError(f"{name} cells ({count} x {spacing}) do not cover {b.as_list()}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "beta_spacing", float(db))
        object.__setattr__(self, "_a_edges", np.linspace(b.u_min, b.u_max, values.shape[0] + 1))
        object.__setattr__(self, "_b_edges", np.linspace(b.u_min, b.u_max, values.shape[1] + 1))

    @classmethod
    def from_csv(cls, path: str | Path, bounds: PlaneBounds) -> "GridWeight":
        """Read ``alpha_spacing,beta_spacing`` header, one spacing row, then
        row-major density rows (one row per alpha cell)."""
        path = Path(path)
        try:
            with path.open(newline="") as fh:
                rows = [r for r in csv.reader(fh) if r]
        except OSError as exc:
            raise OSError(f"cannot read weight grid {path}: {exc}") from exc
        header = [c.strip() for c in rows[0]] if rows else []
        if header != ["alpha_spacing", "beta_spacing"] or len(rows) < 3:
            raise ValueError(f"{path}: expected header 'alpha_spacing,beta_spacing', spacings, then rows")
        da, db = (float(x) for x in rows[1])
        values = np.array([[float(x) for x in r] for r in rows[2:]])
        return cls(bounds, values, da, db)

    def to_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha_spacing", "beta_spacing"])
            w.writerow([repr(self.alpha_spacing), repr(self.beta_spacing)])
            for row in self.values:
                w.writerow([repr(float(v)) for v in row])

    def _index(self, x, edges):
        return np.clip(np.searchsorted(edges, x, side="right") - 1, 0, len(edges) - 2)

    def _raw_density(self, alpha, beta):
        return self.values[self._index(alpha, self._a_edges), self._index(beta, self._b_edges)]

    def _mass_rect(self, a0, a1, b0, b1):
        ea, eb = self._a_edges, self._b_edges
        ia = slice(self._index(a0, ea), self._index(a1, ea) + 1)
        ib = slice(self._index(b0, eb), self._index(b1, eb) + 1)
        lo_a = np.maximum(ea[:-1][ia], a0)[:, None]
        hi_a = np.minimum(ea[1:][ia], a1)[:, None]
        lo_b = np.maximum(eb[:-1][ib], b0)[None, :]
        hi_b = np.minimum(eb[1:][ib], b1)[None, :]
        return np.sum(self.values[ia, ib] * triangle_rect_area(lo_a, hi_a, lo_b, hi_b))

    def _alpha_line(self, alpha, b0, b1):
        i = self._index(alpha, self._a_edges)
        return np.dot(self.values[i], _overlap(b0, b1, self._b_edges))

    def _beta_line(self, beta, a0, a1):
        j = self._index(beta, self._b_edges)
        return np.dot(self.values[:, j], _overlap(a0, a1, self._a_edges))

    def _square_cell_masses(self, edges):
        oa = np.array([_overlap(lo, hi, self._a_edges) for lo, hi in zip(edges[:-1], edges[1:])])
        ob = np.array([_overlap(lo, hi, self._b_edges) for lo, hi in zip(edges[:-1], edges[1:])])
        return oa @ self.values @ ob.T

    @property
    def strictly_positive(self) -> bool:
        ia, ib = np.tril_indices(self.values.shape[0], m=self.values.shape[1])
        return bool(np.all(self.values[ia, ib] > 0))

    @property
    def sup_density(self) -> float:
        return float(self.values.max())


def weight_from_spec(spec: dict, bounds: PlaneBounds, base_dir: Path | None = None) -> WeightField:
    """Build a weight field from a JSON-style dict (``kind`` = uniform | gaussian | grid)."""
    kind = spec.get("kind", "uniform")
    if kind == "uniform":
        if "density" in spec:
            return UniformWeight(bounds, float(spec["density"]))
        return UniformWeight.with_mass(bounds, float(spec.get("mass", 1.0)))
    if kind == "gaussian":
        return GaussianWeight(bounds, tuple(spec["center"]), float(spec["sigma"]), float(spec.get("mass", 1.0)))
    if kind == "grid":
        path = Path(spec["csv"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return GridWeight.from_csv(path, bounds)
    raise ValueError(f"unknown weight kind {kind!r}")


def weight_to_spec(w: WeightField) -> dict:
    if isinstance(w, UniformWeight):
        return {"kind": "uniform", "density": w.value}
    if isinstance(w, GaussianWeight):
        return {"kind": "gaussian", "center": list(w.center), "sigma": w.sigma, "mass": w.mass}
    raise ValueError("grid weights are referenced by CSV path, not inlined")
