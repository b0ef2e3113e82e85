"""Exception types shared across the package."""


class HyperdoxError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HyperdoxError):
    """Formula text does not conform to the grammar or the workspace."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


class WorkspaceError(HyperdoxError):
    """Malformed agent/variable declarations."""


class ValidationError(HyperdoxError):
    """A model violates its structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class FragmentError(HyperdoxError):
    """A formula falls outside the fragment required by the operation."""


class PreconditionError(HyperdoxError):
    """An operation was called on inputs that violate its stated preconditions."""


class InputError(HyperdoxError):
    """Malformed file content or command-line input."""
