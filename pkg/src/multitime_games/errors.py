"""Exception types raised by the solver and its checkers."""


class MultitimeGameError(Exception):
    """Base class for all package-specific failures."""


class NonIncreasingEndpoints(MultitimeGameError):
    """Requested curve endpoint is below its start in some multitime axis."""


class OutOfDomain(MultitimeGameError):
    """A multitime point lies outside the box [0, horizon]."""


class NonFiniteState(MultitimeGameError):
    """State integration left the finite range (blow-up guard)."""


class MismatchedInputs(MultitimeGameError):
    """Curve, control signal and trajectory do not describe the same rollout."""


class CurveNotTerminal(MultitimeGameError):
    """Payoff evaluation requires a curve ending at the horizon corner."""


class MissingNeighbor(MultitimeGameError):
    """Directional update requested on the terminal face of that axis."""


class OutOfGrid(MultitimeGameError):
    """Requested node or increment leaves the multitime grid hull."""


class TreeTooLarge(MultitimeGameError):
    """Exhaustive game-tree recursion would exceed the desk-scale guard."""


class BranchPreconditionFailed(MultitimeGameError):
    """The requested lemma branch has no certifying control at this point."""


class SchemaError(MultitimeGameError):
    """Run configuration failed validation; carries one message per problem."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
