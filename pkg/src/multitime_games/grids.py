"""Rectangular grids over state space and the multitime box, with multilinear
interpolation of value layers."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np


@dataclass(frozen=True)
class StateGrid:
    """Tensor-product grid over a rectangular state box."""

    axes: tuple[np.ndarray, ...]

    def __post_init__(self):
        axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        object.__setattr__(self, "axes", axes)
        for a in axes:
            if a.ndim != 1 or a.size < 2:
                raise ValueError("each state axis needs at least 2 nodes")
            if np.any(np.diff(a) <= 0.0):
                raise ValueError("state axis nodes must be strictly increasing")

    @classmethod
    def uniform(cls, lows, highs, counts) -> "StateGrid":
        lows = np.atleast_1d(np.asarray(lows, dtype=float))
        highs = np.atleast_1d(np.asarray(highs, dtype=float))
        counts = np.atleast_1d(np.asarray(counts, dtype=int))
        if not (lows.shape == highs.shape == counts.shape):
            raise ValueError("lows, highs, counts must have matching lengths")
        return cls(tuple(np.linspace(lo, hi, c) for lo, hi, c in zip(lows, highs, counts)))

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.axes)

    @property
    def num_nodes(self) -> int:
        return int(np.prod(self.shape))

    @property
    def spacings(self) -> np.ndarray:
        return np.array([float(np.max(np.diff(a))) for a in self.axes])

    def nodes(self) -> np.ndarray:
        """All grid nodes flattened in C order, shape (num_nodes, ndim)."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=-1)

    def node(self, index) -> np.ndarray:
        index = (index,) if np.isscalar(index) else tuple(index)
        return np.array([self.axes[k][i] for k, i in enumerate(index)])


@dataclass(frozen=True)
class MultitimeGrid:
    """Uniform grid over the multitime box [0, horizon]; the final node along
    every axis is exactly the horizon component."""

    horizon: np.ndarray
    counts: tuple[int, ...]

    def __post_init__(self):
        horizon = np.asarray(self.horizon, dtype=float)
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "counts", counts)
        if horizon.ndim != 1 or len(counts) != horizon.size:
            raise ValueError("horizon and counts must have matching lengths")
        if np.any(horizon <= 0.0):
            raise ValueError("horizon components must be positive")
        if any(c < 2 for c in counts):
            raise ValueError("each multitime axis needs at least 2 nodes")

    @property
    def m(self) -> int:
        return self.horizon.size

    @property
    def shape(self) -> tuple[int, ...]:
        return self.counts

    @property
    def spacings(self) -> np.ndarray:
        return self.horizon / (np.asarray(self.counts) - 1)

    @property
    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(np.linspace(0.0, h, c) for h, c in zip(self.horizon, self.counts))

    @property
    def terminal_index(self) -> tuple[int, ...]:
        return tuple(c - 1 for c in self.counts)

    def point(self, index) -> np.ndarray:
        index = tuple(index)
        return np.array([ax[i] for ax, i in zip(self.axes, index)])

    def backward_order(self):
        """Node indices in decreasing coordinate-sum order, ties lexicographic;
        any such linearization respects the product order used by induction."""
        spac = self.spacings
        idxs = list(product(*(range(c) for c in self.counts)))
        idxs.sort(key=lambda ix: (-float(np.dot(ix, spac)), ix))
        return idxs


def multilinear(grid: StateGrid, values: np.ndarray, points: np.ndarray,
                out_of_box: str = "clamp"):
    """Multilinear interpolation of a value layer at query points.

    points has shape (..., ndim).  Queries outside the box are either clamped
    to the boundary value ("clamp") or extended linearly from the edge cell
    ("extrapolate"); either way each such query point counts as one
    out-of-box event.  Returns (values (...,), out_of_box_count).
    """
    if out_of_box not in ("clamp", "extrapolate"):
        raise ValueError(f"unknown out_of_box mode {out_of_box!r}")
    points = np.asarray(points, dtype=float)
    if points.shape[-1] != grid.ndim:
        raise ValueError(f"points trailing size {points.shape[-1]} != grid ndim {grid.ndim}")
    values = np.asarray(values, dtype=float)
    if values.shape != grid.shape:
        raise ValueError(f"layer shape {values.shape} != grid shape {grid.shape}")

    batch = points.shape[:-1]
    cell = []
    frac = []
    outside = np.zeros(batch, dtype=bool)
    for k, ax in enumerate(grid.axes):
        q = points[..., k]
        outside |= (q < ax[0]) | (q > ax[-1])
        i = np.clip(np.searchsorted(ax, q, side="right") - 1, 0, ax.size - 2)
        w = (q - ax[i]) / (ax[i + 1] - ax[i])
        if out_of_box == "clamp":
            w = np.clip(w, 0.0, 1.0)
        cell.append(i)
        frac.append(w)

    out = np.zeros(batch)
    for corner in product((0, 1), repeat=grid.ndim):
        weight = np.ones(batch)
        idx = []
        for k, c in enumerate(corner):
            weight = weight * (frac[k] if c else 1.0 - frac[k])
            idx.append(cell[k] + c)
        out += weight * values[tuple(idx)]
    return out, int(np.count_nonzero(outside))


def interp(grid: StateGrid, values: np.ndarray, x) -> float:
    """Interpolate one point with boundary clamping (multilinear elsewhere)."""
    x = np.asarray(x, dtype=float).reshape(grid.ndim)
    vals, _ = multilinear(grid, values, x[None, :], out_of_box="clamp")
    return float(vals[0])
