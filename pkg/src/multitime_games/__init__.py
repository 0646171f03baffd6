"""Solver and verifier for two-player zero-sum games with multitime evolution.

The state evolves along every axis of a multitime box under per-direction
dynamics controlled by two opposing players; the payoff is a curvilinear
running-cost integral along an increasing staircase plus a terminal cost.
The package computes the upper and lower value fields on grids by backward
minimax induction and checks, at desk scale, the structures those fields are
expected to satisfy: the short-horizon optimality identity, the directional
Hamilton-Jacobi-type inequalities at grid extrema of field minus test
function, and the pointwise control constructions behind them.
"""

from .benchmarks import REGISTRY, get_game
from .errors import (
    BranchPreconditionFailed,
    CurveNotTerminal,
    MismatchedInputs,
    MissingNeighbor,
    MultitimeGameError,
    NonFiniteState,
    NonIncreasingEndpoints,
    OutOfDomain,
    OutOfGrid,
    SchemaError,
    TreeTooLarge,
)
from .families import Family
from .flows import (
    PathIndependenceResult,
    Trajectory,
    bolza_payoff,
    curvilinear_cost,
    integrate_flow,
    path_independence_check,
)
from .games import GameSpec
from .grids import MultitimeGrid, StateGrid, interp, multilinear
from .hamiltonians import (
    HamiltonianEval,
    LambdaEval,
    ResponseMap,
    certifying_control_v,
    hamiltonian_lower,
    hamiltonian_upper,
    isaacs_gap,
    lambda_form,
    response_map,
)
from .solver import (
    ValueField,
    directional_update,
    dpp_residual,
    solve_value,
    sweep_order_invariance,
)
from .staircase import ControlSignal, StaircaseCurve, make_staircase
from .verify import (
    ExtremumFinding,
    LemmaCheckResult,
    OracleComparison,
    OracleResult,
    TestFunction,
    lemma_integral_check,
    oracle_value,
    oracle_vs_solver,
    terminal_condition_check,
    viscosity_check,
)

__version__ = "0.1.0"

__all__ = [
    "BranchPreconditionFailed",
    "ControlSignal",
    "CurveNotTerminal",
    "ExtremumFinding",
    "Family",
    "GameSpec",
    "HamiltonianEval",
    "LambdaEval",
    "LemmaCheckResult",
    "MismatchedInputs",
    "MissingNeighbor",
    "MultitimeGameError",
    "MultitimeGrid",
    "NonFiniteState",
    "NonIncreasingEndpoints",
    "OracleComparison",
    "OracleResult",
    "OutOfDomain",
    "OutOfGrid",
    "PathIndependenceResult",
    "REGISTRY",
    "ResponseMap",
    "SchemaError",
    "StaircaseCurve",
    "StateGrid",
    "TestFunction",
    "Trajectory",
    "TreeTooLarge",
    "ValueField",
    "bolza_payoff",
    "certifying_control_v",
    "curvilinear_cost",
    "directional_update",
    "dpp_residual",
    "get_game",
    "hamiltonian_lower",
    "hamiltonian_upper",
    "integrate_flow",
    "interp",
    "isaacs_gap",
    "lambda_form",
    "lemma_integral_check",
    "make_staircase",
    "multilinear",
    "oracle_value",
    "oracle_vs_solver",
    "path_independence_check",
    "response_map",
    "solve_value",
    "sweep_order_invariance",
    "terminal_condition_check",
    "viscosity_check",
]
