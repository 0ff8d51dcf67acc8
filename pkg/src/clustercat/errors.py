from __future__ import annotations


class ClusterCatError(Exception):
    """Base class for domain errors (CLI exit code 65)."""


class QuiverError(ClusterCatError, ValueError):
    """Invalid quiver description: cycle, bad index, malformed input, disconnected."""


class UnsupportedError(ClusterCatError):
    """Input outside the supported scope (wild type, infinite search spaces)."""


class TruncationError(ClusterCatError):
    """A bounded (tame) search ran out of roots before finding what it needed."""


class InconsistencyError(Exception):
    """Two computations that must agree did not; always a bug (CLI exit code 3)."""
