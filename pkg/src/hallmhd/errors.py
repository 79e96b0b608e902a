"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Array extents or grids do not match."""


class InsufficientDataError(ValueError):
    """Too few trajectory samples for the requested estimate."""


class StepRejected(RuntimeError):
    """A time step could not be accepted.

    ``admissible_dt`` carries the largest step the stability bound allows.
    """

    def __init__(self, message, admissible_dt=None):
        super().__init__(message)
        self.admissible_dt = admissible_dt


class BlowUpError(RuntimeError):
    """Non-finite values appeared; ``last_good`` is the last finite state."""

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class InvariantError(AssertionError):
    """A structural invariant (mean mode, divergence) was violated."""


class MagneticNullError(ValueError):
    """|B|^2 dropped below the admissible floor somewhere on the grid."""


class FormulationError(ValueError):
    """The current cannot be recovered in the (B, j) formulation."""


class ConfigurationError(ValueError):
    """Invalid numerical-experiment configuration."""


class ConfigError(ValueError):
    """Run configuration failed validation; ``errors`` lists every problem."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class SnapshotError(IOError):
    pass


class ChecksumError(SnapshotError):
    pass


class TruncatedSnapshotError(SnapshotError):
    pass


class VersionMismatchError(SnapshotError):
    pass


class ModeMismatchError(SnapshotError):
    pass
