import math

import numpy as np
import pytest

from multitime_games.benchmarks import (
    constant_game,
    integrable_game,
    triangular_game,
)
from multitime_games.errors import (
    CurveNotTerminal,
    MismatchedInputs,
    NonFiniteState,
)
from multitime_games.families import Family
from multitime_games.flows import (
    bolza_payoff,
    curvilinear_cost,
    integrate_flow,
    path_independence_check,
)
from multitime_games.games import GameSpec
from multitime_games.staircase import ControlSignal, make_staircase

BLOCKS = (2, 1, 1, 1)


def scalar_game(dynamics, running_cost, terminal, name="test"):
    return GameSpec(
        m=2, n=1, horizon=[1.0, 1.0],
        dynamics=dynamics, running_cost=running_cost, terminal_cost=terminal,
        controls_u=[[0.0]], controls_v=[[0.0]], name=name,
    )


def g_identity():
    return Family.affine_state([[[1.0]]], blocks=(0, 1, 0, 0))


def test_zero_dynamics_constant_trajectory():
    game = constant_game()
    for order in ((0, 1), (1, 0)):
        curve = make_staircase([0.0, 0.0], [1.0, 0.5], order, horizon=game.horizon)
        traj = integrate_flow(game, curve, ControlSignal.constant(0, 0, len(curve)), [3.0])
        np.testing.assert_array_equal(traj.states, 3.0)
        assert traj.endpoint_state[0] == 3.0


def test_integrable_flow_closed_form():
    # dx/ds = x along both axes: endpoint is x0 * e^(s1 + s2)
    game = integrable_game()
    for order in ((0, 1), (1, 0)):
        curve = make_staircase([0.0, 0.0], [1.0, 1.0], order)
        traj = integrate_flow(game, curve, ControlSignal.constant(0, 0, len(curve)), [1.0])
        assert traj.endpoint_state[0] == pytest.approx(math.e ** 2, abs=1e-8)


def test_triangular_flow_is_order_dependent():
    game = triangular_game()
    ends = {}
    for order in ((0, 1), (1, 0)):
        curve = make_staircase([0.0, 0.0], [1.0, 1.0], order)
        traj = integrate_flow(game, curve, ControlSignal.constant(0, 0, len(curve)), [1.0])
        ends[order] = traj.endpoint_state[0]
    assert ends[(0, 1)] == pytest.approx(2.0 * math.e, abs=1e-8)
    assert ends[(1, 0)] == pytest.approx(math.e + 1.0, abs=1e-8)


def test_times_nondecreasing_along_samples():
    game = triangular_game()
    curve = make_staircase([0.0, 0.2], [0.8, 1.0], (1, 0))
    traj = integrate_flow(game, curve, ControlSignal.constant(0, 0, len(curve)), [1.0])
    assert np.all(np.diff(traj.times, axis=0) >= -1e-15)
    assert np.all(np.diff(traj.arcs) > 0)


def test_refinement_is_fourth_order():
    game = integrable_game()
    curve = make_staircase([0.0, 0.0], [1.0, 1.0])
    sig = ControlSignal.constant(0, 0, len(curve))
    exact = math.e ** 2
    errs = [abs(integrate_flow(game, curve, sig, [1.0], n).endpoint_state[0] - exact)
            for n in (64, 128)]
    assert 8.0 <= errs[0] / errs[1] <= 32.0


def test_blowup_guard():
    # dx/ds = x^2 from x0 = 2 blows up at arc 1/2
    game = scalar_game(
        Family.polynomial([[[(1.0, (0, 0, 2, 0, 0))]], [[(0.0, (0, 0, 0, 0, 0))]]],
                          blocks=BLOCKS, outputs=1),
        Family.constant([[0.0], [0.0]], BLOCKS),
        g_identity(),
    )
    curve = make_staircase([0.0, 0.0], [1.0, 0.0])
    with pytest.raises(NonFiniteState):
        integrate_flow(game, curve, ControlSignal.constant(0, 0, len(curve)), [2.0])


def test_signal_length_mismatch():
    game = constant_game()
    curve = make_staircase([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(MismatchedInputs):
        integrate_flow(game, curve, ControlSignal.constant(0, 0, 1), [0.0])


def test_constant_cost_form():
    game = constant_game()  # L = (1, 2)
    for order in ((0, 1), (1, 0)):
        curve = make_staircase([0.0, 0.0], [1.0, 1.0], order)
        sig = ControlSignal.constant(0, 0, len(curve))
        traj = integrate_flow(game, curve, sig, [0.0])
        assert curvilinear_cost(game, curve, traj, sig) == pytest.approx(3.0, abs=1e-12)


def test_zero_cost_form():
    game = triangular_game()  # L = 0
    curve = make_staircase([0.0, 0.0], [1.0, 1.0])
    sig = ControlSignal.constant(0, 0, len(curve))
    traj = integrate_flow(game, curve, sig, [1.0])
    assert curvilinear_cost(game, curve, traj, sig) == 0.0


def test_state_dependent_cost():
    # L1 = x, L2 = 0 with X1 = 1, X2 = 0, x0 = 0: the axis-1 leg integrates
    # the ramp x(sigma) = sigma to 1/2
    game = scalar_game(
        Family.constant([[1.0], [0.0]], BLOCKS),
        Family.polynomial([[[(1.0, (0, 0, 1, 0, 0))]], [[]]], blocks=BLOCKS, outputs=1),
        g_identity(),
    )
    curve = make_staircase([0.0, 0.0], [1.0, 1.0], (0, 1))
    sig = ControlSignal.constant(0, 0, len(curve))
    traj = integrate_flow(game, curve, sig, [0.0])
    assert curvilinear_cost(game, curve, traj, sig) == pytest.approx(0.5, abs=1e-10)


def test_cost_additive_over_concatenation():
    game = integrable_game()
    mid = [1.0, 0.0]
    full = make_staircase([0.0, 0.0], [1.0, 1.0], (0, 1))
    sig_full = ControlSignal.constant(0, 0, len(full))
    traj_full = integrate_flow(game, full, sig_full, [1.0])

    first = make_staircase([0.0, 0.0], mid, (0, 1))
    sig1 = ControlSignal.constant(0, 0, len(first))
    traj1 = integrate_flow(game, first, sig1, [1.0])
    second = make_staircase(mid, [1.0, 1.0], (0, 1))
    sig2 = ControlSignal.constant(0, 0, len(second))
    traj2 = integrate_flow(game, second, sig2, traj1.endpoint_state)

    total = (curvilinear_cost(game, first, traj1, sig1)
             + curvilinear_cost(game, second, traj2, sig2))
    assert total == pytest.approx(curvilinear_cost(game, full, traj_full, sig_full),
                                  abs=1e-12)


def test_trajectory_segment_mismatch():
    game = constant_game()
    curve = make_staircase([0.0, 0.0], [1.0, 1.0])
    sig = ControlSignal.constant(0, 0, len(curve))
    traj = integrate_flow(game, curve, sig, [0.0])
    short = make_staircase([0.0, 0.0], [1.0, 0.0])
    with pytest.raises(MismatchedInputs):
        curvilinear_cost(game, short, traj, ControlSignal.constant(0, 0, len(short)))


def test_bolza_trivial():
    game = scalar_game(
        Family.constant([[0.0], [0.0]], BLOCKS),
        Family.constant([[0.0], [0.0]], BLOCKS),
        g_identity(),
    )
    curve = make_staircase([0.0, 0.0], [1.0, 1.0])
    assert bolza_payoff(game, curve, ControlSignal.constant(0, 0, len(curve)), [5.0]) \
        == pytest.approx(5.0)


def test_bolza_constant_cost():
    game = constant_game()
    curve = make_staircase([0.0, 0.0], [1.0, 1.0])
    assert bolza_payoff(game, curve, ControlSignal.constant(0, 0, len(curve)), [0.0]) \
        == pytest.approx(3.0, abs=1e-12)


def test_bolza_quadratic_terminal():
    # X1 = X2 = x, L = 0, g(x) = x^2: payoff is (e^2)^2
    game = scalar_game(
        Family.affine_state([[[1.0]], [[1.0]]], blocks=BLOCKS),
        Family.constant([[0.0], [0.0]], BLOCKS),
        Family.polynomial([[[(1.0, (2,))]]], blocks=(0, 1, 0, 0), outputs=1),
    )
    curve = make_staircase([0.0, 0.0], [1.0, 1.0])
    assert bolza_payoff(game, curve, ControlSignal.constant(0, 0, len(curve)), [1.0]) \
        == pytest.approx(math.e ** 4, abs=1e-6)


def test_bolza_requires_terminal_curve():
    game = constant_game()
    curve = make_staircase([0.0, 0.0], [1.0, 0.5])
    with pytest.raises(CurveNotTerminal):
        bolza_payoff(game, curve, ControlSignal.constant(0, 0, len(curve)), [0.0])


def test_path_independence_integrable():
    res = path_independence_check(integrable_game(), [0.0, 0.0], [1.0, 1.0], (0, 0), [1.0])
    assert res.endpoint_gap <= 1e-8
    assert res.cost_gap <= 1e-8


def test_path_independence_triangular_gap():
    res = path_independence_check(triangular_game(), [0.0, 0.0], [1.0, 1.0], (0, 0), [1.0])
    assert res.endpoint_gap == pytest.approx(math.e - 1.0, abs=1e-6)


def test_path_independence_zero_dynamics():
    res = path_independence_check(constant_game(), [0.0, 0.0], [1.0, 1.0], (0, 0), [2.0])
    assert res.endpoint_gap == 0.0
    assert res.cost_gap == 0.0


def test_path_independence_needs_orders_above_2d():
    game3 = GameSpec(
        m=3, n=1, horizon=[1.0, 1.0, 1.0],
        dynamics=Family.constant([[0.0]] * 3, (3, 1, 1, 1)),
        running_cost=Family.constant([[0.0]] * 3, (3, 1, 1, 1)),
        terminal_cost=g_identity(),
        controls_u=[[0.0]], controls_v=[[0.0]],
    )
    with pytest.raises(ValueError, match="orders"):
        path_independence_check(game3, [0.0] * 3, [1.0] * 3, (0, 0), [0.0])
    res = path_independence_check(game3, [0.0] * 3, [1.0] * 3, (0, 0), [0.0],
                                  orders=((0, 1, 2), (2, 1, 0)))
    assert res.endpoint_gap == 0.0
