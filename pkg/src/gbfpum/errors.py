"""Exception types raised by this package.

Every error carries a plain message as its only argument so callers can
re-raise with extra context without losing the class.
"""


class Error(Exception):
    """Base class for all errors raised by gbfpum."""


# --- graph construction and file ingestion ---

class LoopEdgeError(Error):
    """An edge connects a node to itself."""


class IndexOutOfRangeError(Error):
    """A node index is outside [0, n)."""


class EmptySourceSetError(Error):
    """BFS was asked to start from no sources."""


class EmptyNodeSetError(Error):
    """A subgraph was requested on an empty node set."""


class ParseError(Error):
    """A text input file is malformed; the message names the line."""


class CoordCountMismatchError(Error):
    """A coordinates file does not have exactly one row per node."""


# --- spectral ---

class NotSymmetricError(Error):
    """The matrix handed to the eigensolver is not symmetric."""


class NoConvergenceError(Error):
    """The eigensolver did not converge."""


class DimensionMismatchError(Error):
    """Signal length does not match the basis dimension."""


class CountOutOfRangeError(Error):
    """Requested eigenvector count is outside [1, n]."""


# --- clustering ---

class EmptyEdgeSetError(Error):
    """The operation needs at least one edge."""


class MissingCoordinatesError(Error):
    """The graph carries no node coordinates."""


class TooManyClustersError(Error):
    """More clusters requested than there are points."""


class EmptyRangeError(Error):
    """The community-count sweep range is empty."""


class MissingNodeError(Error):
    """A partition file does not label every node."""


class DuplicateNodeError(Error):
    """A partition file labels some node more than once."""


# --- kernels and interpolation ---

class NonPositiveShiftError(Error):
    """epsilon + lambda_k <= 0 for some eigenvalue; spline undefined."""


class NonPositiveFhatError(Error):
    """A kernel transform entry is not strictly positive."""


class SolveFailureError(Error):
    """The kernel system stayed numerically singular after jitter retries."""


# --- harness ---

class SampleTooLargeError(Error):
    """More sample nodes requested than the graph has."""


class ZeroSignalError(Error):
    """A relative error against the zero signal is undefined."""
