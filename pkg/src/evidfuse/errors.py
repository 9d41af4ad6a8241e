"""Exception types raised by the evidfuse package.

All exceptions take a single message argument so callers may re-raise them
with extra context (e.g. the scan index of a failing tracker step) without
losing the concrete type.
"""


class EvidenceError(ValueError):
    """Base class for all domain errors raised by this package."""


class FrameError(EvidenceError):
    """Invalid frame of discernment (bad labels, too few/too many)."""


class MassFunctionError(EvidenceError):
    """Invalid basic belief assignment (empty-set mass, negative mass, bad sum)."""


class FrameMismatchError(EvidenceError):
    """Two mass functions defined over different frames were combined."""


class ConfigError(EvidenceError):
    """Invalid input file (mass function, confusion matrix, or simulation config)."""


class TotalConflictError(EvidenceError):
    """Dempster's rule was applied to totally conflicting sources (K = 1)."""


class VanishingConsensusError(EvidenceError):
    """The TCN rule produced zero total mass before normalization."""
