"""Preisach plane bounds, relay semantics and the staircase memory interface.

The interface is stored as a staircase path in the (alpha, beta) plane that
starts on the diagonal at the current input ``s`` and moves only right
(increasing alpha) or down (decreasing beta) until it reaches the right edge
``alpha = u_max``.  Relays below/left of the path are at +1, relays above it
are at -1.  Equivalently the +1 set is

    {alpha < s}  union  {alpha >= s, beta < level(alpha)}

where ``level`` is a non-increasing step function bounded above by ``s``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class PlaneBounds:
    u_min: float
    u_max: float

    def __post_init__(self):
        object.__setattr__(self, "u_min", float(self.u_min))
        object.__setattr__(self, "u_max", float(self.u_max))
        if not (np.isfinite(self.u_min) and np.isfinite(self.u_max)):
            raise ValueError("plane bounds must be finite")
        if not self.u_min < self.u_max:
            raise ValueError(f"need u_min < u_max, got [{self.u_min}, {self.u_max}]")

    @property
    def width(self) -> float:
        return self.u_max - self.u_min

    @property
    def area(self) -> float:
        """Area of the triangle u_min <= beta <= alpha <= u_max."""
        return 0.5 * self.width**2

    def contains(self, u: float) -> bool:
        return self.u_min <= u <= self.u_max

    def as_list(self) -> list[float]:
        return [self.u_min, self.u_max]


def relay_update(state: int, u: float, alpha: float, beta: float) -> int:
    """Next state of a single relay with thresholds (alpha, beta)."""
    if alpha < beta:
        raise ValueError(f"malformed relay: alpha={alpha} < beta={beta}")
    if u > alpha:
        return 1
    if u < beta:
        return -1
    return state


Step = tuple[float, float, float]  # (alpha_from, alpha_to, beta_level)


def _merge_steps(steps: Iterable[Step]) -> list[Step]:
    out: list[Step] = []
    for a0, a1, lev in steps:
        a0, a1, lev = float(a0), float(a1), float(lev)
        if a1 <= a0:
            continue
        if out and out[-1][2] == lev and out[-1][1] == a0:
            out[-1] = (out[-1][0], a1, lev)
        else:
            out.append((a0, a1, lev))
    return out


class InterfaceLine:
    """Staircase memory state of a Preisach operator.

    Build one from a vertex list (``InterfaceLine(vertices, bounds)``) or from
    a start point and steps (``InterfaceLine.from_steps``).  A vertex list
    that stops short of ``alpha = u_max`` is closed by a horizontal run at the
    last beta level.
    """

    __slots__ = ("bounds", "start", "steps", "vertices")

    def __init__(self, vertices: Sequence[Sequence[float]], bounds: PlaneBounds):
        pts = [(float(a), float(b)) for a, b in vertices]
        if not pts:
            raise ValueError("interface needs at least one vertex")
        s, s_beta = pts[0]
        if s != s_beta:
            raise ValueError(f"interface must start on the diagonal, got {pts[0]}")
        if not bounds.contains(s):
            raise ValueError(f"start {s} outside bounds {bounds.as_list()}")
        steps: list[Step] = []
        a, b = s, s
        for a_next, b_next in pts[1:]:
            if a_next == a and b_next == b:
                continue
            if b_next == b and a_next > a:
                steps.append((a, a_next, b))
            elif a_next == a and b_next < b:
                pass
            else:
                raise ValueError(
                    f"interface must move right or down only: ({a}, {b}) -> ({a_next}, {b_next})"
                )
            a, b = a_next, b_next
        if a > bounds.u_max or b < bounds.u_min:
            raise ValueError(f"vertex ({a}, {b}) outside bounds {bounds.as_list()}")
        if a < bounds.u_max:
            steps.append((a, bounds.u_max, b))
        self._init(bounds, s, _merge_steps(steps))

    def _init(self, bounds: PlaneBounds, start: float, steps: list[Step]) -> None:
        self.bounds = bounds
        self.start = start
        self.steps = tuple(steps)
        path = [(start, start)]
        for a0, a1, lev in steps:
            if path[-1][1] != lev:
                path.append((a0, lev))
            path.append((a1, lev))
        self.vertices = tuple(path)

    @classmethod
    def from_steps(cls, start: float, steps: Iterable[Step], bounds: PlaneBounds) -> "InterfaceLine":
        steps = _merge_steps(steps)
        prev_end, prev_lev = start, start
        for a0, a1, lev in steps:
            if a0 != prev_end or lev > prev_lev or lev < bounds.u_min:
                raise ValueError(f"steps do not form a staircase at ({a0}, {a1}, {lev})")
            prev_end, prev_lev = a1, lev
        if prev_end != bounds.u_max or not bounds.contains(start):
            raise ValueError("steps must run from a start inside the bounds to u_max")
        obj = cls.__new__(cls)
        obj._init(bounds, float(start), steps)
        return obj

    # -- named states -------------------------------------------------------
    @classmethod
    def negative_saturation(cls, bounds: PlaneBounds) -> "InterfaceLine":
        """Every relay at -1."""
        return cls.from_steps(bounds.u_min, [(bounds.u_min, bounds.u_max, bounds.u_min)], bounds)

    @classmethod
    def positive_saturation(cls, bounds: PlaneBounds) -> "InterfaceLine":
        """Every relay at +1."""
        return cls.from_steps(bounds.u_max, [], bounds)

    @classmethod
    def post_reset(cls, bounds: PlaneBounds, a_max: float | None = None, polarity: int = 1) -> "InterfaceLine":
        """Interface left by a reset pulse of amplitude ``-polarity * a_max`` from
        saturation of the opposite sign."""
        a_max = bounds.u_max if a_max is None else a_max
        seed = cls.positive_saturation(bounds) if polarity > 0 else cls.negative_saturation(bounds)
        return seed.apply_input([0.0, -polarity * a_max, 0.0])

    # -- dynamics -----------------------------------------------------------
    def apply_value(self, u: float) -> "InterfaceLine":
        """Interface after the input moves monotonically to ``u``."""
        u = float(u)
        if not self.bounds.contains(u):
            raise ValueError(f"input {u} outside bounds {self.bounds.as_list()}")
        steps: list[Step] = []
        if u < self.start:
            steps.append((u, self.start, u))
        for a0, a1, lev in self.steps:
            if a1 <= u:
                continue
            steps.append((max(a0, u), a1, min(lev, u)))
        return InterfaceLine.from_steps(u, steps, self.bounds)

    def apply_input(self, values: Iterable[float]) -> "InterfaceLine":
        line = self
        for u in values:
            line = line.apply_value(u)
        return line

    # -- queries ------------------------------------------------------------
    @property
    def at_rest(self) -> bool:
        return self.start == 0.0

    def level_at(self, alpha: float) -> float:
        """Beta level of the staircase in column ``alpha``.

        Columns left of the start are entirely +1 and report ``alpha`` itself.
        At a step boundary the step to the right wins.
        """
        if alpha < self.start or not self.steps:
            return alpha
        for _, a1, lev in self.steps:
            if alpha < a1:
                return lev
        return self.steps[-1][2]

    def first_alpha_at_or_below(self, beta: float) -> float:
        """Smallest alpha >= start whose column level is <= ``beta``."""
        for a0, _, lev in self.steps:
            if lev <= beta:
                return a0
        return self.bounds.u_max

    def relay_states(self, alpha, beta) -> np.ndarray:
        """+1/-1 state of relays at the given thresholds (vectorised)."""
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        plus = alpha < self.start
        if self.steps:
            starts = np.array([st[0] for st in self.steps])
            levels = np.array([st[2] for st in self.steps])
            idx = np.clip(np.searchsorted(starts, alpha, side="right") - 1, 0, len(starts) - 1)
            plus = plus | (beta < levels[idx])
        return np.where(plus, 1, -1)

    # -- identity / io ------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, InterfaceLine):
            return NotImplemented
        return self.bounds == other.bounds and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.bounds, self.vertices))

    def __repr__(self):
        return f"InterfaceLine(vertices={list(self.vertices)}, bounds={self.bounds})"

    def to_dict(self) -> dict:
        return {"bounds": self.bounds.as_list(), "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_dict(cls, data: dict) -> "InterfaceLine":
        return cls(data["vertices"], PlaneBounds(*data["bounds"]))

    def to_json(self, path: str | Path | None = None) -> str:
        text = json.dumps(self.to_dict())
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_json(cls, text_or_path: str | Path) -> "InterfaceLine":
        text = str(text_or_path)
        if not text.lstrip().startswith("{"):
            text = Path(text_or_path).read_text()
        return cls.from_dict(json.loads(text))


def wipe_update(line: InterfaceLine, amplitude: float) -> InterfaceLine:
    """Interface after one pulse 0 -> amplitude -> 0 (wiping-out rule)."""
    b = line.bounds
    if not (b.contains(amplitude) and b.contains(0.0)):
        raise ValueError(f"pulse amplitude {amplitude} outside bounds {b.as_list()}")
    return line.apply_input([0.0, amplitude, 0.0])
