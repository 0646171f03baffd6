"""Axis-aligned increasing curves in the multitime box, and per-segment controls."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonIncreasingEndpoints, OutOfDomain

_EPS = 1e-12


@dataclass(frozen=True)
class Segment:
    """One axis-aligned leg of a staircase; length is the advance along `axis`."""

    axis: int
    start: np.ndarray
    end: np.ndarray
    length: float


@dataclass(frozen=True)
class StaircaseCurve:
    """Increasing staircase path between two multitime points.

    Segments are concatenated in axis_order; zero-length legs are dropped, so
    a degenerate curve (start == end) has no segments at all.
    """

    start: np.ndarray
    end: np.ndarray
    axis_order: tuple[int, ...]
    segments: tuple[Segment, ...]

    def __len__(self):
        return len(self.segments)

    @property
    def displacement(self) -> np.ndarray:
        return self.end - self.start


def make_staircase(start, end, axis_order=None, horizon=None) -> StaircaseCurve:
    """Build the staircase from start to end visiting axes in axis_order.

    When `horizon` is given, both endpoints must lie inside [0, horizon];
    otherwise only nonnegativity is enforced.
    """
    start = np.asarray(start, dtype=float).copy()
    end = np.asarray(end, dtype=float).copy()
    if start.shape != end.shape or start.ndim != 1:
        raise ValueError("start and end must be 1-D multitime points of equal length")
    m = start.shape[0]

    if axis_order is None:
        axis_order = tuple(range(m))
    axis_order = tuple(int(a) for a in axis_order)
    if sorted(axis_order) != list(range(m)):
        raise ValueError(f"axis_order {axis_order} is not a permutation of 0..{m - 1}")

    if np.any(end - start < -_EPS):
        raise NonIncreasingEndpoints(
            f"end {end} is below start {start} in some axis"
        )
    if np.any(start < -_EPS) or np.any(end < -_EPS):
        raise OutOfDomain("staircase endpoints must be nonnegative")
    if horizon is not None:
        horizon = np.asarray(horizon, dtype=float)
        slack = _EPS * max(1.0, float(np.max(horizon)))
        if np.any(start > horizon + slack) or np.any(end > horizon + slack):
            raise OutOfDomain(
                f"staircase endpoints leave the box [0, {horizon}]"
            )

    segments = []
    cursor = start.copy()
    for axis in axis_order:
        length = float(end[axis] - cursor[axis])
        if length <= 0.0:
            continue
        nxt = cursor.copy()
        nxt[axis] = end[axis]
        segments.append(Segment(axis, cursor.copy(), nxt.copy(), length))
        cursor = nxt
    return StaircaseCurve(start, end, axis_order, tuple(segments))


@dataclass(frozen=True)
class ControlSignal:
    """One (u-index, v-index) pair per curve segment, held constant on it."""

    pairs: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.pairs)

    @classmethod
    def constant(cls, u_index, v_index, num_segments) -> "ControlSignal":
        return cls(tuple((int(u_index), int(v_index)) for _ in range(num_segments)))
