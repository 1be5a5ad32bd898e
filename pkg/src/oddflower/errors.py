"""Exception types shared across the package."""


class InputError(ValueError):
    """An argument is outside the domain of an operation."""


class ParseError(InputError):
    """Malformed graph text.  ``offset`` is the 0-based byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class PreconditionError(InputError):
    """A stated hypothesis of a constructive step does not hold.

    ``clause`` names the failed condition so callers can report it.
    """

    def __init__(self, clause: str, detail: str = ""):
        msg = clause if not detail else f"{clause}: {detail}"
        super().__init__(msg)
        self.clause = clause
        self.detail = detail


class StitchingError(AssertionError):
    """A construction that should succeed under its preconditions did not."""


class BudgetExhausted(RuntimeError):
    """A node-budgeted search ran out of budget before reaching a verdict."""

    def __init__(self, nodes: int, partial=None):
        super().__init__(f"search budget of {nodes} nodes exhausted")
        self.nodes = nodes
        self.partial = partial


class CapRefusal(RuntimeError):
    """An exhaustive computation was refused because its size exceeds the cap."""
