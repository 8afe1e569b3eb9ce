"""Exception hierarchy shared by the metric library, service and CLI."""


class TrajMetricError(Exception):
    """Base class for all library errors."""


class DomainError(TrajMetricError):
    """Invalid input: bad parameter, mismatched dimensions or windows."""


class CapacityError(TrajMetricError):
    """Exact solver state space exceeds the configured cap.

    The LP solver handles instances of any size; callers should retry
    with it.
    """


class SolverError(TrajMetricError):
    """Numerical failure inside a solver backend."""
