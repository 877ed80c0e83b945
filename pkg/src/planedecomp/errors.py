"""Exception types shared across the package."""


class InputDomainError(ValueError):
    """Input violates a documented precondition (bounds, duplicates, ...)."""


class GeneralPositionError(ValueError):
    """Three collinear points (or overlapping collinear segments) detected."""


class GenerationError(RuntimeError):
    """A generator exhausted its retry budget."""


class FormatError(ValueError):
    """A point or decomposition file does not match the documented format."""


class SizeLimitError(ValueError):
    """Input exceeds a documented size cap for an exponential or O(n^4) scan."""


class CertificationError(RuntimeError):
    """An emitted subgraph failed its own planarity certification."""


class DecompositionInfeasible(RuntimeError):
    """Theoretical-mode constants put the pipeline out of reach for this n."""
