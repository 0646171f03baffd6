"""Game definitions: multitime dimension, horizon, dynamics, costs, control sets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .families import Family


@dataclass
class GameSpec:
    """Full description of a two-player zero-sum multitime game.

    The evolution is the m-flow dx/ds^a = X_a(s, x, u_a, v_a); the payoff is
    the curvilinear running cost integral plus a terminal cost at the horizon
    corner.  Both control sets are finite lists of vectors, scanned
    exhaustively by every minimax in the package.

    Instances are treated as immutable after construction; all evaluation
    methods are pure, so games can be shared freely across threads.
    """

    m: int
    n: int
    horizon: np.ndarray
    dynamics: Family       # outputs n
    running_cost: Family   # outputs 1
    terminal_cost: Family  # outputs 1, state block only
    controls_u: np.ndarray  # (num_u, p)
    controls_v: np.ndarray  # (num_v, q)
    name: str = ""

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("need m >= 1 multitime axes and n >= 1 state components")
        self.horizon = np.asarray(self.horizon, dtype=float)
        if self.horizon.shape != (self.m,):
            raise ValueError(f"horizon must have shape ({self.m},)")
        if not np.all(np.isfinite(self.horizon)) or np.any(self.horizon <= 0.0):
            raise ValueError("horizon components must be finite and positive")

        self.controls_u = np.atleast_2d(np.asarray(self.controls_u, dtype=float))
        self.controls_v = np.atleast_2d(np.asarray(self.controls_v, dtype=float))
        for label, ctrl in (("controls_u", self.controls_u), ("controls_v", self.controls_v)):
            if ctrl.shape[0] == 0:
                raise ValueError(f"{label} must be nonempty")
            if not np.all(np.isfinite(ctrl)):
                raise ValueError(f"{label} contains non-finite entries")
            if len(np.unique(ctrl, axis=0)) != ctrl.shape[0]:
                raise ValueError(f"{label} contains duplicate control vectors")

        p, q = self.controls_u.shape[1], self.controls_v.shape[1]
        expect = (self.m, self.n, p, q)
        for label, fam, outs, dirs in (
            ("dynamics", self.dynamics, self.n, self.m),
            ("running_cost", self.running_cost, 1, self.m),
        ):
            if fam.blocks != expect:
                raise ValueError(f"{label} blocks {fam.blocks} != {expect}")
            if fam.outputs != outs or fam.directions != dirs:
                raise ValueError(f"{label} has wrong outputs/directions")
        if self.terminal_cost.blocks != (0, self.n, 0, 0):
            raise ValueError("terminal_cost must depend on the state block only")
        if self.terminal_cost.outputs != 1 or self.terminal_cost.directions != 1:
            raise ValueError("terminal_cost must be a single scalar map")

        self._spot_check_finite()

    def _spot_check_finite(self):
        """Evaluate every family at a few domain points; reject non-finite maps."""
        probes_t = (np.zeros(self.m), self.horizon, 0.5 * self.horizon)
        probes_x = (np.zeros(self.n), np.ones(self.n), -np.ones(self.n))
        for t in probes_t:
            for x in probes_x:
                for u in self.controls_u:
                    for v in self.controls_v:
                        for a in range(self.m):
                            vals = np.concatenate([
                                self.dynamics.evaluate(a, t=t, x=x, u=u, v=v),
                                self.running_cost.evaluate(a, t=t, x=x, u=u, v=v),
                            ])
                            if not np.all(np.isfinite(vals)):
                                raise ValueError(
                                    f"family evaluates non-finite at t={t}, x={x}"
                                )
                if not np.all(np.isfinite(self.terminal_cost.evaluate(0, x=x))):
                    raise ValueError(f"terminal cost non-finite at x={x}")

    # -- sizes ------------------------------------------------------------

    @property
    def num_u(self) -> int:
        return self.controls_u.shape[0]

    @property
    def num_v(self) -> int:
        return self.controls_v.shape[0]

    # -- evaluation -------------------------------------------------------

    def dynamics_at(self, axis, t, x, u, v) -> np.ndarray:
        """X_axis(t, x, u, v); x may be batched (..., n) -> (..., n)."""
        return self.dynamics.evaluate(axis, t=t, x=x, u=u, v=v)

    def running_cost_at(self, axis, t, x, u, v):
        """L_axis(t, x, u, v); x may be batched (..., n) -> (...)."""
        return self.running_cost.evaluate(axis, t=t, x=x, u=u, v=v)[..., 0]

    def terminal_at(self, x):
        """g(x); x may be batched (..., n) -> (...)."""
        return self.terminal_cost.evaluate(0, x=x)[..., 0]

    def check_point(self, t, tol=1e-9):
        """Raise ValueError unless t lies in the multitime box [0, horizon]."""
        t = np.asarray(t, dtype=float)
        if t.shape != (self.m,):
            raise ValueError(f"multitime point must have shape ({self.m},)")
        slack = tol * max(1.0, float(np.max(self.horizon)))
        if np.any(t < -slack) or np.any(t > self.horizon + slack):
            raise ValueError(f"multitime point {t} outside [0, {self.horizon}]")
        return t
