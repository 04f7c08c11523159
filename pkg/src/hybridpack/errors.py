class InvalidArgumentError(ValueError):
    """An argument is outside the domain of the operation."""


class ContractViolation(ValueError):
    """An input breaks an operation's precondition (non-unitary, non-hermitian, ...)."""
