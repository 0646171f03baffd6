"""Exact minimax Hamiltonians over the finite control sets, and the lemma's
pointwise control constructions.

All scans are exhaustive over the U x V table; ties break to the lowest list
index (first in u, then in v) so results are identical across runs and
platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games import GameSpec


@dataclass(frozen=True)
class HamiltonianEval:
    axis: int
    value: float
    u_index: int
    v_index: int


@dataclass(frozen=True)
class LambdaEval:
    axis: int
    value: float


@dataclass(frozen=True)
class ResponseMap:
    """For each v-index, the responding u-index."""

    table: tuple[int, ...]

    def __getitem__(self, v_index: int) -> int:
        return self.table[v_index]

    def __len__(self):
        return len(self.table)


def _payoff_table(game: GameSpec, t, x, costate, axis) -> np.ndarray:
    """table[iu, iv] = costate . X_axis + L_axis at (t, x)."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float).reshape(game.n)
    costate = np.asarray(costate, dtype=float).reshape(game.n)
    table = np.empty((game.num_u, game.num_v))
    for iu, u in enumerate(game.controls_u):
        for iv, v in enumerate(game.controls_v):
            drift = game.dynamics_at(axis, t, x, u, v)
            table[iu, iv] = costate @ drift + game.running_cost_at(axis, t, x, u, v)
    return table


def hamiltonian_upper(game: GameSpec, t, x, costate, axis) -> HamiltonianEval:
    """min over v of max over u of {costate . X_axis + L_axis}."""
    table = _payoff_table(game, t, x, costate, axis)
    best_u = table.argmax(axis=0)                  # first max per column
    col_max = table[best_u, np.arange(game.num_v)]
    iv = int(col_max.argmin())                     # first min across columns
    iu = int(best_u[iv])
    return HamiltonianEval(axis, float(table[iu, iv]), iu, iv)


def hamiltonian_lower(game: GameSpec, t, x, costate, axis) -> HamiltonianEval:
    """max over u of min over v of {costate . X_axis + L_axis}."""
    table = _payoff_table(game, t, x, costate, axis)
    best_v = table.argmin(axis=1)                  # first min per row
    row_min = table[np.arange(game.num_u), best_v]
    iu = int(row_min.argmax())                     # first max across rows
    iv = int(best_v[iu])
    return HamiltonianEval(axis, float(table[iu, iv]), iu, iv)


def isaacs_gap(game: GameSpec, t, x, costate) -> np.ndarray:
    """Per-axis gap upper minus lower; nonnegative up to rounding."""
    return np.array([
        hamiltonian_upper(game, t, x, costate, a).value
        - hamiltonian_lower(game, t, x, costate, a).value
        for a in range(game.m)
    ])


def lambda_form(game: GameSpec, t, x, test_fn, u_index, v_index, axis) -> LambdaEval:
    """Running cost plus swept derivative of the test function along the flow:
    L_axis + grad_x(test_fn) . X_axis + dt_axis(test_fn), at one control pair.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float).reshape(game.n)
    u = game.controls_u[u_index]
    v = game.controls_v[v_index]
    drift = game.dynamics_at(axis, t, x, u, v)
    value = (
        float(game.running_cost_at(axis, t, x, u, v))
        + float(test_fn.grad_x(t, x) @ drift)
        + float(test_fn.grad_t(t, x)[axis])
    )
    return LambdaEval(axis, value)


def _lambda_table(game: GameSpec, t, x, test_fn) -> np.ndarray:
    """lam[axis, iu, iv] over the full control table."""
    lam = np.empty((game.m, game.num_u, game.num_v))
    for a in range(game.m):
        for iu in range(game.num_u):
            for iv in range(game.num_v):
                lam[a, iu, iv] = lambda_form(game, t, x, test_fn, iu, iv, a).value
    return lam


def certifying_control_v(game: GameSpec, t, x, test_fn, margins):
    """Lowest v-index whose worst-case u keeps every axis component of the
    1-form at or below -margins[axis]; None when no control certifies.
    """
    margins = np.asarray(margins, dtype=float).reshape(game.m)
    if np.any(margins <= 0.0):
        raise ValueError("margins must be strictly positive")
    lam = _lambda_table(game, t, x, test_fn)
    worst_u = lam.max(axis=1)  # (m, num_v)
    for iv in range(game.num_v):
        if np.all(worst_u[:, iv] <= -margins):
            return iv
    return None


def response_map(game: GameSpec, t, x, test_fn, margins):
    """For each v, the lowest u maximizing the worst-axis 1-form value.

    Returns None unless every response keeps every axis component at or above
    margins[axis] (non-strict).
    """
    margins = np.asarray(margins, dtype=float).reshape(game.m)
    if np.any(margins <= 0.0):
        raise ValueError("margins must be strictly positive")
    lam = _lambda_table(game, t, x, test_fn)
    table = []
    for iv in range(game.num_v):
        scores = lam[:, :, iv].min(axis=0)  # worst axis per u
        iu = int(scores.argmax())           # first max
        if np.any(lam[:, iu, iv] < margins):
            return None
        table.append(iu)
    return ResponseMap(tuple(table))
