"""Exception types shared across the package."""


class CPlanarityError(Exception):
    """Base class for all package errors."""


class InvalidInstanceError(CPlanarityError):
    """A clustered graph violates a structural invariant."""


class UnknownNodeError(CPlanarityError, KeyError):
    """A node id was not found in the inclusion tree."""


class PreconditionError(CPlanarityError):
    """An operation was called on input that violates its precondition."""


class NoFlattenableNodeError(CPlanarityError):
    """The tree is already flat; no node with a flat proper subtree exists."""


class ParseError(CPlanarityError):
    """A document could not be parsed or failed schema validation."""


class DrawingError(CPlanarityError):
    """A drawing is structurally broken (dangling references etc.)."""


class InternalInvariantError(CPlanarityError):
    """A situation the construction proofs rule out was observed anyway."""


class BudgetExceededError(CPlanarityError):
    """The oracle ran out of budget; the verdict is Unknown, never a guess.

    ``reason`` distinguishes an up-front cap violation from a wall-clock
    timeout hit mid-search.
    """

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class InfeasibleParametersError(CPlanarityError):
    """Random-instance parameters cannot be realized."""
