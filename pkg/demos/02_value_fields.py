"""Backward minimax induction: upper and lower value fields on grids.

Two closed-form benchmarks make the scheme's exactness visible: a game with
frozen state and constant running costs, and a bilinear-control game whose
per-step minimax drifts the characteristic by exactly one step.
Run with: python demos/02_value_fields.py
"""

import numpy as np

from multitime_games import (
    MultitimeGrid,
    StateGrid,
    get_game,
    isaacs_gap,
    solve_value,
    sweep_order_invariance,
)
from multitime_games.reports import write_field_csv

mgrid = MultitimeGrid(np.array([1.0, 1.0]), (11, 11))
sgrid = StateGrid.uniform([-2.0], [2.0], [21])
pts = sgrid.nodes()[:, 0]

print("=== frozen state, running costs (1, 2), terminal cost x ===")
game = get_game("constant")
field = solve_value(game, mgrid, sgrid, "upper")
err = max(
    float(np.max(np.abs(field.values[idx]
                        - (pts + (1 - mgrid.point(idx)[0])
                           + 2 * (1 - mgrid.point(idx)[1])))))
    for idx in np.ndindex(mgrid.shape)
)
print(f"  max error vs closed form x + (1-t1) + 2(1-t2): {err:.2e}")
print(f"  compatibility residual (directional update spread): "
      f"{field.compatibility_residual:.2e}")

print("\n=== bilinear clash: both drifts u*v, controls in {-1, +1} ===")
game = get_game("bilinear")
upper = solve_value(game, mgrid, sgrid, "upper")
lower = solve_value(game, mgrid, sgrid, "lower")
gap = upper.values - lower.values
print(f"  upper(0, 0, x=0) = {upper.value_at((0, 0), (10,)):+.6f} "
      f"(closed form +2)")
print(f"  lower(0, 0, x=0) = {lower.value_at((0, 0), (10,)):+.6f} "
      f"(closed form -2)")
print(f"  value-gap field peaks at {gap.max():.6f} at the initial corner; "
      f"the game has no saddle point in pure per-step play")
print(f"  pointwise Hamiltonian gap at costate 1: "
      f"{isaacs_gap(game, np.zeros(2), np.zeros(1), [1.0])}")

rows = write_field_csv(upper, "values_upper_demo.csv")
print(f"  exported {rows} rows to values_upper_demo.csv")

print("\n=== sweep-order diagnostic ===")
inv = sweep_order_invariance(game, mgrid, sgrid, "upper")
print(f"  single-direction sweeps disagree by {inv:.2e} on the bilinear game "
      f"(its two directional updates coincide)")
