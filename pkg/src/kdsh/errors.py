"""Exception types shared across the package.

CLI exit-code mapping: ConfigError -> 2, CapacityError -> 3, DivergenceError -> 4.
"""


class ParameterError(ValueError):
    """A parameter violates a documented precondition."""


class DomainError(ParameterError):
    """A formula was evaluated outside its mathematical domain."""


class DimensionError(ValueError):
    """Mismatched vector/tensor dimensions."""


class InvalidIndexError(ValueError):
    """Malformed index tuple or out-of-range tuple rank."""


class CapacityError(RuntimeError):
    """An enumeration or allocation exceeds the configured cap."""


class DivergenceError(RuntimeError):
    """An iterative solver produced non-finite values."""

    def __init__(self, message, iteration=None, trajectory=None):
        super().__init__(message)
        self.iteration = iteration
        self.trajectory = list(trajectory) if trajectory is not None else []


class DegenerateStateError(RuntimeError):
    """A state from which an update is not defined (e.g. fully saturated estimates)."""


class ConfigError(ValueError):
    """Malformed configuration file or flag combination."""
