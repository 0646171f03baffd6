"""Independent oracles and inequality checkers for solved value fields:
exhaustive game-tree values, discrete viscosity-type inequalities at grid
extrema, and the integral inequalities behind the control constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import BranchPreconditionFailed, TreeTooLarge
from .flows import integrate_flow, _simpson_weights
from .games import GameSpec
from .grids import MultitimeGrid, StateGrid
from .hamiltonians import (
    certifying_control_v,
    hamiltonian_lower,
    hamiltonian_upper,
    response_map,
)
from .solver import ValueField, solve_value
from .staircase import ControlSignal, make_staircase

MAX_TREE_STEPS = 8
MAX_TREE_CONTROLS = 4


@dataclass
class TestFunction:
    """Quadratic test function on (t, x) with exact derivatives.

    value(t, x) = const + linear . z + z . quadratic . z  with z = (t, x);
    the quadratic block is symmetrized on construction so gradients are
    simply linear + 2 * quadratic @ z.
    """

    __test__ = False  # not a pytest case despite the Test* name

    m: int
    n: int
    const: float = 0.0
    linear: np.ndarray = None
    quadratic: np.ndarray = None

    def __post_init__(self):
        d = self.m + self.n
        self.const = float(self.const)
        self.linear = (np.zeros(d) if self.linear is None
                       else np.asarray(self.linear, dtype=float).reshape(d))
        q = (np.zeros((d, d)) if self.quadratic is None
             else np.asarray(self.quadratic, dtype=float).reshape(d, d))
        self.quadratic = 0.5 * (q + q.T)

    @classmethod
    def random(cls, m, n, rng) -> "TestFunction":
        d = m + n
        return cls(m, n, rng.uniform(-1.0, 1.0),
                   rng.uniform(-1.0, 1.0, size=d),
                   rng.uniform(-1.0, 1.0, size=(d, d)))

    def __add__(self, other: "TestFunction") -> "TestFunction":
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("test function dimensions differ")
        return TestFunction(self.m, self.n, self.const + other.const,
                            self.linear + other.linear,
                            self.quadratic + other.quadratic)

    def _blocks(self):
        m = self.m
        return (self.linear[:m], self.linear[m:],
                self.quadratic[:m, :m], self.quadratic[:m, m:],
                self.quadratic[m:, m:])

    def value(self, t, x):
        """x may be batched (..., n); returns (...)."""
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        lt, lx, qtt, qtx, qxx = self._blocks()
        return (self.const + lt @ t + x @ lx
                + t @ qtt @ t + 2.0 * (x @ qtx.T @ t)
                + np.einsum("...i,ij,...j->...", x, qxx, x))

    def grad_t(self, t, x) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        lt, _, qtt, qtx, _ = self._blocks()
        return lt + 2.0 * (qtt @ t + x @ qtx.T)

    def grad_x(self, t, x) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        _, lx, _, qtx, qxx = self._blocks()
        return lx + 2.0 * (t @ qtx + x @ qxx)


@dataclass(frozen=True)
class OracleResult:
    value: float
    tree_size: int
    side: str


def oracle_value(game: GameSpec, start, x0, steps_per_axis, axis_order=None,
                 side: str = "upper") -> OracleResult:
    """Exact backward recursion over a finite staircase step lattice.

    Each step applies the one-step minimax on the continuous state (no
    interpolation): upper nests min over v of max over u, lower the reverse.
    Desk-scale guard: at most 8 total steps and 4 controls per side.
    """
    start = game.check_point(start)
    steps_per_axis = np.asarray(steps_per_axis, dtype=int).reshape(game.m)
    spans = game.horizon - start
    for a in range(game.m):
        if spans[a] > 1e-12 and steps_per_axis[a] < 1:
            raise ValueError(f"axis {a} spans {spans[a]} but has no steps")
    total = int(steps_per_axis[spans > 1e-12].sum())
    if total > MAX_TREE_STEPS:
        raise TreeTooLarge(f"{total} steps exceed the guard of {MAX_TREE_STEPS}")
    if game.num_u > MAX_TREE_CONTROLS or game.num_v > MAX_TREE_CONTROLS:
        raise TreeTooLarge(
            f"control sets of sizes {game.num_u}, {game.num_v} exceed the "
            f"guard of {MAX_TREE_CONTROLS}"
        )
    if axis_order is None:
        axis_order = tuple(range(game.m))

    steps = []  # (axis, t at step start, step length)
    cursor = start.astype(float).copy()
    for axis in axis_order:
        if spans[axis] <= 1e-12:
            continue
        delta = float(spans[axis]) / int(steps_per_axis[axis])
        for _ in range(int(steps_per_axis[axis])):
            steps.append((axis, cursor.copy(), delta))
            cursor = cursor.copy()
            cursor[axis] += delta

    x0 = np.asarray(x0, dtype=float).reshape(game.n)
    nu, nv = game.num_u, game.num_v

    # expand the tree level by level (states and per-step costs), then fold
    # the minimax back from the terminal leaves
    levels = [x0[None, :]]
    costs = []
    for axis, t, delta in steps:
        parents = levels[-1]
        children = np.empty((parents.shape[0], nu, nv, game.n))
        stage = np.empty((parents.shape[0], nu, nv))
        for iu, u in enumerate(game.controls_u):
            for iv, v in enumerate(game.controls_v):
                drift = game.dynamics_at(axis, t, parents, u, v)
                children[:, iu, iv] = parents + delta * drift
                stage[:, iu, iv] = delta * game.running_cost_at(axis, t, parents, u, v)
        costs.append(stage)
        levels.append(children.reshape(-1, game.n))

    vals = game.terminal_at(levels[-1])
    for stage in reversed(costs):
        table = stage + vals.reshape(stage.shape)
        if side == "upper":
            vals = table.max(axis=1).min(axis=1)
        else:
            vals = table.min(axis=2).max(axis=1)

    return OracleResult(float(vals[0]), (nu * nv) ** len(steps), side)


@dataclass(frozen=True)
class OracleComparison:
    max_gap: float
    records: tuple  # (side, t_index, x_index, oracle value, field value)


def oracle_vs_solver(game: GameSpec, mgrid: MultitimeGrid, sgrid: StateGrid,
                     samples, sides=("upper", "lower"), axis_order=None,
                     out_of_box=None) -> OracleComparison:
    """Max |oracle - solved field| over sample grid nodes, both sides.

    samples are (t_index, x_index) pairs; the oracle step lattice is aligned
    with the multitime grid (one step per remaining grid interval), so start
    nodes must be within the tree-size guard of the terminal corner.
    """
    from .solver import DEFAULT_OUT_OF_BOX
    mode = DEFAULT_OUT_OF_BOX if out_of_box is None else out_of_box
    records = []
    max_gap = 0.0
    for side in sides:
        field = solve_value(game, mgrid, sgrid, side, out_of_box=mode)
        for t_index, x_index in samples:
            t_index = tuple(t_index)
            steps = [c - 1 - i for c, i in zip(mgrid.counts, t_index)]
            res = oracle_value(game, mgrid.point(t_index), sgrid.node(x_index),
                               steps, axis_order=axis_order, side=side)
            gap = abs(res.value - field.value_at(t_index, x_index))
            records.append((side, t_index, x_index, res.value,
                            field.value_at(t_index, x_index)))
            max_gap = max(max_gap, gap)
    return OracleComparison(max_gap, tuple(records))


@dataclass
class ExtremumFinding:
    """A grid-neighborhood extremum of field - test function, with the
    per-axis inequality readings checked there."""

    t_index: tuple
    x_index: tuple
    t: np.ndarray
    x: np.ndarray
    kind: str                    # "max" | "min"
    per_axis: list               # (axis, lhs, ok)
    passed: bool


def viscosity_check(game: GameSpec, field: ValueField, test_fn: TestFunction,
                    side: str | None = None, slack_c1: float = 2.0,
                    slack_c2: float = 2.0,
                    tie_tol: float = 1e-12) -> list[ExtremumFinding]:
    """Scan interior grid nodes for neighborhood extrema of field - test_fn
    and check the directional inequalities there.

    At a local max each axis must satisfy dt(test_fn) + H(t, x, grad_x) >=
    -tau, at a local min <= +tau, with tau = slack_c1 * max multitime spacing
    + slack_c2 * max state spacing (the field is only an O(spacing)
    approximation, so exact inequality cannot be demanded).  Comparison with
    neighbors is non-strict up to tie_tol, so plateaus (including rounding
    noise on an exact-tie field) yield findings at every plateau node.
    """
    side = field.side if side is None else side
    ham = hamiltonian_upper if side == "upper" else hamiltonian_lower
    mgrid, sgrid = field.mgrid, field.sgrid
    tau = slack_c1 * float(np.max(mgrid.spacings)) + slack_c2 * float(np.max(sgrid.spacings))

    omega = np.empty(mgrid.shape + sgrid.shape)
    pts = sgrid.nodes()
    for t_index in product(*(range(c) for c in mgrid.counts)):
        omega[t_index] = test_fn.value(mgrid.point(t_index), pts).reshape(sgrid.shape)
    diff = field.values - omega

    ndim = diff.ndim
    if any(s < 3 for s in diff.shape):
        return []
    core = tuple(slice(1, -1) for _ in range(ndim))
    is_max = np.ones(diff[core].shape, dtype=bool)
    is_min = np.ones(diff[core].shape, dtype=bool)
    center = diff[core]
    for axis in range(ndim):
        for shift in (-1, 1):
            sl = list(core)
            sl[axis] = slice(1 + shift, diff.shape[axis] - 1 + shift)
            nbr = diff[tuple(sl)]
            is_max &= center >= nbr - tie_tol
            is_min &= center <= nbr + tie_tol

    findings = []
    m = mgrid.m
    for kind, mask in (("max", is_max), ("min", is_min)):
        for flat in np.flatnonzero(mask):
            idx = np.unravel_index(flat, mask.shape)
            full = tuple(i + 1 for i in idx)
            t_index, x_index = full[:m], full[m:]
            t = mgrid.point(t_index)
            x = sgrid.node(x_index)
            costate = test_fn.grad_x(t, x)
            wt = test_fn.grad_t(t, x)
            per_axis = []
            ok_all = True
            for axis in range(m):
                lhs = float(wt[axis]) + ham(game, t, x, costate, axis).value
                ok = lhs >= -tau if kind == "max" else lhs <= tau
                ok_all &= ok
                per_axis.append((axis, lhs, ok))
            findings.append(ExtremumFinding(t_index, x_index, t, x, kind,
                                            per_axis, ok_all))
    return findings


@dataclass
class LemmaCheckResult:
    branch: str
    certificate: object          # v-index (case I) or ResponseMap (case II)
    per_axis: list               # (axis, lhs, rhs, ok)
    summed: tuple                # (lhs, rhs, ok)
    passed: bool                 # gated on the summed reading


def _lambda_path_integrals(game: GameSpec, curve, trajectory, signal,
                           test_fn: TestFunction) -> np.ndarray:
    """Per-axis Simpson integrals of the 1-form along the rollout."""
    out = np.zeros(game.m)
    for seg, (iu, iv), (i0, i1) in zip(curve.segments, signal.pairs,
                                       trajectory.segment_slices):
        u = game.controls_u[iu]
        v = game.controls_v[iv]
        nsub = i1 - i0
        weights = _simpson_weights(nsub, seg.length / nsub)
        vals = np.empty(nsub + 1)
        for j, k in enumerate(range(i0, i1 + 1)):
            t, x = trajectory.times[k], trajectory.states[k]
            drift = game.dynamics_at(seg.axis, t, x, u, v)
            vals[j] = (
                float(game.running_cost_at(seg.axis, t, x, u, v))
                + float(test_fn.grad_x(t, x) @ drift)
                + float(test_fn.grad_t(t, x)[seg.axis])
            )
        out[seg.axis] += float(weights @ vals)
    return out


def lemma_integral_check(game: GameSpec, t0, x0, test_fn: TestFunction, margins,
                         span, branch: str, axis_order=None,
                         substeps_per_unit: int = 64) -> LemmaCheckResult:
    """Roll out the certified control construction over a small multitime
    window and compare the 1-form integrals against +-span * margins / 2.

    caseI: the certifying v plays against every u in the list; every axis
    integral must stay below -span[a] * margins[a] / 2 for the worst u.
    caseII: the response map answers every v; integrals must stay above
    +span[a] * margins[a] / 2 for the worst v.  Both the per-axis and the
    summed readings are reported; `passed` gates on the summed one.
    """
    t0 = game.check_point(t0)
    margins = np.asarray(margins, dtype=float).reshape(game.m)
    span = np.asarray(span, dtype=float).reshape(game.m)
    if np.any(span < 0.0):
        raise ValueError("span components must be nonnegative")
    curve = make_staircase(t0, t0 + span, axis_order, horizon=game.horizon)
    rhs = 0.5 * span * margins

    if branch == "caseI":
        v_star = certifying_control_v(game, t0, x0, test_fn, margins)
        if v_star is None:
            raise BranchPreconditionFailed(
                "no control certifies the case-I inequality at this point"
            )
        rollouts = [ControlSignal.constant(iu, v_star, len(curve))
                    for iu in range(game.num_u)]
        certificate = v_star
    elif branch == "caseII":
        psi = response_map(game, t0, x0, test_fn, margins)
        if psi is None:
            raise BranchPreconditionFailed(
                "no response map certifies the case-II inequality at this point"
            )
        rollouts = [ControlSignal.constant(psi[iv], iv, len(curve))
                    for iv in range(game.num_v)]
        certificate = psi
    else:
        raise ValueError(f"branch must be 'caseI' or 'caseII', got {branch!r}")

    integrals = np.stack([
        _lambda_path_integrals(
            game, curve, integrate_flow(game, curve, signal, x0, substeps_per_unit),
            signal, test_fn)
        for signal in rollouts
    ]) if rollouts else np.zeros((1, game.m))

    tol = 1e-12
    if branch == "caseI":
        lhs = integrals.max(axis=0)
        per_axis = [(a, float(lhs[a]), float(-rhs[a]), lhs[a] <= -rhs[a] + tol)
                    for a in range(game.m)]
        summed = (float(lhs.sum()), float(-rhs.sum()),
                  lhs.sum() <= -rhs.sum() + tol)
    else:
        lhs = integrals.min(axis=0)
        per_axis = [(a, float(lhs[a]), float(rhs[a]), lhs[a] >= rhs[a] - tol)
                    for a in range(game.m)]
        summed = (float(lhs.sum()), float(rhs.sum()),
                  lhs.sum() >= rhs.sum() - tol)

    return LemmaCheckResult(branch, certificate, per_axis, summed, bool(summed[2]))


def terminal_condition_check(field: ValueField, game: GameSpec) -> float:
    """Max absolute gap between the terminal layer and the terminal cost."""
    pts = field.sgrid.nodes()
    expected = game.terminal_at(pts).reshape(field.sgrid.shape)
    return float(np.max(np.abs(field.values[field.mgrid.terminal_index] - expected)))
