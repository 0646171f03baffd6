"""Verification layer: exhaustive tree oracle, short-horizon optimality
residuals, inequality checks at grid extrema, and the certified control
constructions over a small multitime window.
Run with: python demos/03_verification.py
"""

import numpy as np

from multitime_games import (
    MultitimeGrid,
    StateGrid,
    TestFunction,
    dpp_residual,
    get_game,
    lemma_integral_check,
    oracle_value,
    solve_value,
    terminal_condition_check,
    viscosity_check,
)
from multitime_games.benchmarks import bilinear_game

mgrid = MultitimeGrid(np.array([1.0, 1.0]), (11, 11))
sgrid = StateGrid.uniform([-2.0], [2.0], [21])

print("=== exhaustive tree oracle vs the grid solver ===")
game = get_game("bilinear")
field = solve_value(game, mgrid, sgrid, "upper")
for t_idx, x_idx in (((8, 8), (10,)), ((6, 10), (5,))):
    steps = [10 - i for i in t_idx]
    res = oracle_value(game, mgrid.point(t_idx), sgrid.node(x_idx), steps)
    print(f"  start t={mgrid.point(t_idx)}, x={sgrid.node(x_idx)[0]:+.1f}: "
          f"oracle {res.value:+.6f} (tree {res.tree_size}), "
          f"field {field.value_at(t_idx, x_idx):+.6f}")

print("\n=== short-horizon optimality residuals ===")
rng = np.random.default_rng(0)
residuals = [
    dpp_residual(game, field,
                 tuple(int(rng.integers(0, 10)) for _ in range(2)),
                 (int(rng.integers(0, 21)),), mgrid.spacings)
    for _ in range(10)
]
print(f"  max |residual| over 10 random nodes, one-step window: "
      f"{max(abs(r) for r in residuals):.2e}")

print("\n=== inequality checks at extrema of field - test function ===")
# a paraboloid bump forces an interior extremum at t=(0.5,0.5), x=0
base = TestFunction(2, 1, const=2.0, linear=[-1.0, -1.0, 1.0])
bump = TestFunction(2, 1, const=0.5, linear=[-1.0, -1.0, 0.0],
                    quadratic=np.eye(3))
findings = viscosity_check(game, field, base + bump)
for f in findings:
    lhs = ", ".join(f"axis {a}: {v:+.4f}" for a, v, _ in f.per_axis)
    print(f"  {f.kind} of field - test_fn at t={f.t}, x={f.x[0]:+.1f}: "
          f"{lhs} -> {'ok' if f.passed else 'VIOLATION'}")

print("\n=== certified control constructions over a window ===")
omega = TestFunction(2, 1, linear=[0.0, 0.0, 2.0])
neg = bilinear_game(running_cost=-5.0)
res = lemma_integral_check(neg, [0.0, 0.0], [0.0], omega, [1.0, 1.0],
                           [0.1, 0.1], "caseI")
print(f"  case I certifying v index {res.certificate}: per-axis integrals "
      f"{[round(l, 4) for _, l, _, _ in res.per_axis]} "
      f"vs bounds {[round(r, 4) for _, _, r, _ in res.per_axis]}")
pos = bilinear_game(running_cost=5.0)
res = lemma_integral_check(pos, [0.0, 0.0], [0.0], omega, [1.0, 1.0],
                           [0.1, 0.1], "caseII")
print(f"  case II responses {tuple(res.certificate.table)}: per-axis integrals "
      f"{[round(l, 4) for _, l, _, _ in res.per_axis]} "
      f"vs bounds {[round(r, 4) for _, _, r, _ in res.per_axis]}")

print("\n=== terminal condition ===")
print(f"  max gap between the terminal layer and the terminal cost: "
      f"{terminal_condition_check(field, game)}")
