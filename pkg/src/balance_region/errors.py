"""Exceptions raised across the package."""


class BalanceRegionError(Exception):
    """Base class of the package's errors."""


class ValidationError(BalanceRegionError, ValueError):
    """Invalid input data (contacts, robot constants, bounds, configuration)."""


class EmptyRegion(BalanceRegionError, RuntimeError):
    """The equilibrium LP is infeasible: no CoM position can be balanced."""


class DegenerateRegion(BalanceRegionError, RuntimeError):
    """The balance region is flat (1-D or 2-D) and has no interior.

    ``points`` holds the distinct boundary points found so far.
    """

    def __init__(self, message, points=None):
        super().__init__(message)
        self.points = points


class UnboundedProgram(BalanceRegionError, RuntimeError):
    """A directional LP was unbounded; the CoM bounds are missing rows."""


class SolverError(BalanceRegionError, RuntimeError):
    """The LP backend stopped with a status other than optimal/infeasible/unbounded."""
