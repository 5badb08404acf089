"""Exception hierarchy shared across the engine."""


class SpktError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SpktError):
    """Operand shapes are incompatible with the requested operation."""


class ContractError(SpktError):
    """A documented precondition was violated by the caller."""


class ConfigError(SpktError):
    """A model or run configuration violates one of its invariants."""


class CheckpointFormatError(SpktError):
    """A checkpoint file is malformed, truncated, or of the wrong version."""


class DatasetError(SpktError):
    """A dataset directory, manifest, or trial binary failed validation."""


class TrainingError(SpktError):
    """Training aborted at runtime (non-finite loss or gradients)."""
