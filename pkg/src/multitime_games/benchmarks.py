"""Registry of small benchmark games used by the checks and the test suite."""

from __future__ import annotations

import numpy as np

from .families import Family
from .games import GameSpec

PLUS_MINUS_ONE = np.array([[-1.0], [1.0]])
SINGLETON = np.array([[0.0]])


def _terminal_identity():
    # g(x) = x
    return Family.affine_state([[[1.0]]], blocks=(0, 1, 0, 0))


def constant_game() -> GameSpec:
    """Two multitime axes, frozen scalar state, running costs (1, 2), g(x) = x.

    Value fields have the closed form x + (T1 - t1) + 2 (T2 - t2).
    """
    blocks = (2, 1, 1, 1)
    return GameSpec(
        m=2, n=1, horizon=[1.0, 1.0],
        dynamics=Family.constant([[0.0], [0.0]], blocks),
        running_cost=Family.constant([[1.0], [2.0]], blocks),
        terminal_cost=_terminal_identity(),
        controls_u=SINGLETON, controls_v=SINGLETON,
        name="constant",
    )


def bilinear_game(running_cost: float = 0.0) -> GameSpec:
    """Both drifts equal u*v with scalar controls in {-1, +1}, g(x) = x.

    Upper field: x + (T1 - t1) + (T2 - t2); lower field mirrors the signs.
    A constant running cost can be added for the lemma benchmarks.
    """
    blocks = (2, 1, 1, 1)
    quad = [[[[1.0]]], [[[1.0]]]]
    return GameSpec(
        m=2, n=1, horizon=[1.0, 1.0],
        dynamics=Family.bilinear_controls(quad, blocks=blocks),
        running_cost=Family.constant([[running_cost], [running_cost]], blocks),
        terminal_cost=_terminal_identity(),
        controls_u=PLUS_MINUS_ONE, controls_v=PLUS_MINUS_ONE,
        name="bilinear" if running_cost == 0.0 else f"bilinear(L={running_cost})",
    )


def affine_game() -> GameSpec:
    """Drifts x + u*v and x - u*v, zero running cost, g(x) = x^2 / 5.

    The curved terminal cost makes interpolation error visible, so
    solver-versus-oracle gaps are nonzero and shrink under grid refinement.
    """
    blocks = (2, 1, 1, 1)
    return GameSpec(
        m=2, n=1, horizon=[1.0, 1.0],
        dynamics=Family.bilinear_controls(
            quad=[[[[1.0]]], [[[-1.0]]]],
            state_linear=[[[1.0]], [[1.0]]],
            blocks=blocks,
        ),
        running_cost=Family.constant([[0.0], [0.0]], blocks),
        terminal_cost=Family.polynomial([[[(0.2, (2,))]]], blocks=(0, 1, 0, 0),
                                        outputs=1),
        controls_u=PLUS_MINUS_ONE, controls_v=PLUS_MINUS_ONE,
        name="affine",
    )


def integrable_game() -> GameSpec:
    """Both drifts equal x (cross-derivatives match), constant costs (1, 2).

    The flow is path independent: either staircase order from (0,0) to (1,1)
    carries x0 to x0 * e^2.
    """
    blocks = (2, 1, 1, 1)
    return GameSpec(
        m=2, n=1, horizon=[1.0, 1.0],
        dynamics=Family.affine_state([[[1.0]], [[1.0]]], blocks=blocks),
        running_cost=Family.constant([[1.0], [2.0]], blocks),
        terminal_cost=_terminal_identity(),
        controls_u=SINGLETON, controls_v=SINGLETON,
        name="integrable",
    )


def triangular_game() -> GameSpec:
    """Drift 1 along axis 1 and x along axis 2: a path-dependent flow.

    From x0 = 1 over (0,0) -> (1,1), axis order (0,1) ends at 2e while
    (1,0) ends at e + 1; the endpoint gap is e - 1.
    """
    blocks = (2, 1, 1, 1)
    return GameSpec(
        m=2, n=1, horizon=[1.0, 1.0],
        dynamics=Family.affine_state([[[0.0]], [[1.0]]],
                                     offset=[[1.0], [0.0]], blocks=blocks),
        running_cost=Family.constant([[0.0], [0.0]], blocks),
        terminal_cost=_terminal_identity(),
        controls_u=SINGLETON, controls_v=SINGLETON,
        name="triangular",
    )


REGISTRY = {
    "constant": constant_game,
    "bilinear": bilinear_game,
    "affine": affine_game,
    "integrable": integrable_game,
    "triangular": triangular_game,
}


def get_game(name: str) -> GameSpec:
    try:
        builder = REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown registry game {name!r}; available: {sorted(REGISTRY)}"
        ) from None
    return builder()
