import numpy as np

from multitime_games.benchmarks import integrable_game
from multitime_games.flows import integrate_flow
from multitime_games.grids import MultitimeGrid, StateGrid
from multitime_games.reports import (
    json_ready,
    write_field_csv,
    write_trajectory_csv,
)
from multitime_games.solver import solve_value
from multitime_games.staircase import ControlSignal, make_staircase


def test_trajectory_csv_roundtrip(tmp_path):
    game = integrable_game()
    curve = make_staircase([0.0, 0.0], [1.0, 1.0])
    signal = ControlSignal.constant(0, 0, len(curve))
    traj = integrate_flow(game, curve, signal, [1.0])
    path = tmp_path / "traj.csv"
    rows = write_trajectory_csv(traj, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "arc,s1,s2,x1"
    assert len(lines) - 1 == rows == len(traj.arcs)
    last = [float(c) for c in lines[-1].split(",")]
    assert last[0] == traj.arcs[-1]
    assert last[3] == traj.endpoint_state[0]  # repr round-trips exactly


def test_field_csv_values_roundtrip(tmp_path):
    game = integrable_game()
    mgrid = MultitimeGrid(game.horizon, (3, 3))
    sgrid = StateGrid.uniform([-1.0], [1.0], [3])
    field = solve_value(game, mgrid, sgrid, "upper")
    path = tmp_path / "field.csv"
    write_field_csv(field, path)
    lines = path.read_text().splitlines()[1:]
    # first row is the (0, 0) node at the lowest state node
    t1, t2, x1, value = (float(c) for c in lines[0].split(","))
    assert (t1, t2, x1) == (0.0, 0.0, -1.0)
    assert value == field.value_at((0, 0), (0,))


def test_json_ready_strips_numpy_types():
    import json
    payload = {"a": np.float64(1.5), "b": np.int64(3),
               "c": np.array([1.0, 2.0]), "d": np.bool_(True), "e": (1, 2)}
    text = json.dumps(json_ready(payload), sort_keys=True)
    assert json.loads(text) == {"a": 1.5, "b": 3, "c": [1.0, 2.0],
                                "d": True, "e": [1, 2]}
