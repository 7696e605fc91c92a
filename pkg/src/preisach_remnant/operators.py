"""Exact (interface-based) and discretised (relay-grid) Preisach operators."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .interface import InterfaceLine, PlaneBounds
from .weights import WeightField


class InputRangeError(ValueError):
    def __init__(self, index: int, value: float, bounds: PlaneBounds):
        super().__init__(f"input sample {index} = {value} outside [{bounds.u_min}, {bounds.u_max}]")
        self.index = index
        self.value = value


class RepresentabilityError(ValueError):
    """Relay states that no staircase interface can describe."""


def positive_mass(line: InterfaceLine, weight: WeightField) -> float:
    """Weight mass of the +1 region below ``line``."""
    b = line.bounds
    s = line.start
    mass = weight.mass_rect(b.u_min, s, b.u_min, s)
    for a0, a1, lev in line.steps:
        mass += weight.mass_rect(a0, a1, b.u_min, lev)
    return mass


def output_from_interface(line: InterfaceLine, weight: WeightField) -> float:
    """Operator output for a given memory interface: mass(+1) - mass(-1)."""
    if line.bounds != weight.bounds:
        raise ValueError("interface and weight live on different planes")
    return 2.0 * positive_mass(line, weight) - weight.total_mass


def _check_samples(samples: Sequence[float], bounds: PlaneBounds) -> np.ndarray:
    u = np.asarray(samples, dtype=float).ravel()
    if u.size == 0:
        raise ValueError("input needs at least one sample")
    bad = np.flatnonzero(~((u >= bounds.u_min) & (u <= bounds.u_max)))
    if bad.size:
        i = int(bad[0])
        raise InputRangeError(i, float(u[i]), bounds)
    return u


class ExactPreisach:
    """Continuum operator: memory is an :class:`InterfaceLine`, output by integration."""

    def __init__(self, weight: WeightField, interface: InterfaceLine | None = None):
        self.weight = weight
        self.bounds = weight.bounds
        self.interface = interface or InterfaceLine.negative_saturation(self.bounds)
        self._total = weight.total_mass

    spacing = 0.0

    @property
    def total_mass(self) -> float:
        return self._total

    @property
    def current_input(self) -> float:
        return self.interface.start

    def output(self) -> float:
        return 2.0 * positive_mass(self.interface, self.weight) - self._total

    def apply_input(self, samples: Iterable[float]) -> np.ndarray:
        u = _check_samples(list(samples), self.bounds)
        out = np.empty(u.size)
        for k, v in enumerate(u):
            self.interface = self.interface.apply_value(v)
            out[k] = self.output()
        return out

    def memory(self) -> InterfaceLine:
        return self.interface

    def snapshot(self):
        return self.interface

    def matches(self, snapshot) -> bool:
        return self.interface == snapshot

    def copy(self) -> "ExactPreisach":
        return ExactPreisach(self.weight, self.interface)


class DiscretePreisach:
    """Brute-force grid of relays at cell centres of an n-level partition.

    Relay (i, j) has thresholds alpha = centers[i], beta = centers[j], j <= i;
    there are n(n+1)/2 of them.  States and weights are stored as square
    arrays indexed [alpha, beta]; entries above the diagonal carry zero weight.
    """

    def __init__(
        self,
        levels: int,
        bounds: PlaneBounds,
        weights: np.ndarray,
        states: np.ndarray | None = None,
        current_input: float | None = None,
    ):
        if levels < 1:
            raise ValueError("need at least one level")
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (levels, levels):
            raise ValueError(f"weights must have shape ({levels}, {levels})")
        if np.any(weights < 0):
            raise ValueError("relay weights must be nonnegative")
        self.levels = levels
        self.bounds = bounds
        self.spacing = bounds.width / levels
        self.centers = bounds.u_min + (np.arange(levels) + 0.5) * self.spacing
        self.edges = np.linspace(bounds.u_min, bounds.u_max, levels + 1)
        self.weights = np.tril(weights)
        self._lower = np.tril(np.ones((levels, levels), dtype=bool))
        if states is None:
            states = -np.ones((levels, levels))
        self.states = np.array(states, dtype=float)
        self.current_input = bounds.u_min if current_input is None else current_input
        self._total = float(self.weights.sum())
        self._buf = np.empty_like(self.weights)

    @classmethod
    def uniform(cls, levels: int, bounds: PlaneBounds, mass: float = 1.0) -> "DiscretePreisach":
        """Every relay carries the same weight ``mass / N``."""
        n_relays = levels * (levels + 1) // 2
        return cls(levels, bounds, np.full((levels, levels), mass / n_relays))

    @classmethod
    def from_weight(cls, weight: WeightField, levels: int) -> "DiscretePreisach":
        """Relay weight = mass of its cell (half-cell on the diagonal)."""
        return cls(levels, weight.bounds, weight.cell_masses(levels))

    @property
    def relay_count(self) -> int:
        return self.levels * (self.levels + 1) // 2

    @property
    def total_mass(self) -> float:
        return self._total

    @property
    def max_column_mass(self) -> float:
        return float(self.weights.sum(axis=1).max())

    def output(self) -> float:
        # pairwise summation keeps the result independent of BLAS threading
        np.multiply(self.weights, self.states, out=self._buf)
        return float(self._buf.sum())

    def _apply(self, u: float) -> None:
        a = int(np.searchsorted(self.centers, u, side="left"))  # relays with alpha < u
        b = int(np.searchsorted(self.centers, u, side="right"))  # relays with beta > u start here
        if a:
            self.states[:a, :] = 1.0
        if b < self.levels:
            self.states[:, b:] = -1.0
        self.current_input = u

    def apply_input(self, samples: Iterable[float]) -> np.ndarray:
        """Feed the samples in order; returns the output after each one."""
        u = _check_samples(list(samples), self.bounds)
        out = np.empty(u.size)
        for k, v in enumerate(u):
            self._apply(float(v))
            out[k] = self.output()
        return out

    def set_interface(self, line: InterfaceLine) -> None:
        """Set every relay to the state the interface prescribes at its thresholds."""
        if line.bounds != self.bounds:
            raise ValueError("interface bounds differ from operator bounds")
        a, b = np.meshgrid(self.centers, self.centers, indexing="ij")
        self.states = line.relay_states(a, b).astype(float)
        self.current_input = line.start

    def fill(self, value: int) -> None:
        self.states.fill(float(value))

    def memory(self) -> InterfaceLine:
        return interface_from_states(self)

    def snapshot(self) -> np.ndarray:
        return self.states.copy()

    def matches(self, snapshot: np.ndarray) -> bool:
        return bool(np.array_equal(self.states[self._lower], snapshot[self._lower]))

    def copy(self) -> "DiscretePreisach":
        new = DiscretePreisach.__new__(DiscretePreisach)
        new.__dict__.update(self.__dict__)
        new.states = self.states.copy()
        new._buf = np.empty_like(self.weights)
        return new


def interface_from_states(op: DiscretePreisach) -> InterfaceLine:
    """Staircase (on cell edges) separating the +1 and -1 relays of ``op``."""
    n = op.levels
    plus = (op.states > 0) & op._lower
    counts = plus.sum(axis=1)  # +1 relays per alpha column
    expected = np.arange(n)[None, :] < counts[:, None]
    if not np.array_equal(plus, expected & op._lower):
        raise RepresentabilityError("a column's +1 relays are not a contiguous run from beta = u_min")
    full = counts == np.arange(1, n + 1)
    p = int(np.argmin(full)) if not full.all() else n
    if full[p:].any():
        raise RepresentabilityError("full columns must form a prefix in alpha")
    tail = counts[p:]
    if tail.size and (np.any(np.diff(tail) > 0) or tail[0] > p):
        raise RepresentabilityError("column levels must be non-increasing in alpha")
    e = op.edges
    steps = [(e[i], e[i + 1], e[counts[i]]) for i in range(p, n)]
    return InterfaceLine.from_steps(e[p], steps, op.bounds)
