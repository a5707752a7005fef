"""Exception types raised by the planner."""


class TrochoidError(Exception):
    """Base class for planner errors."""


class DegeneratePoints(TrochoidError, ValueError):
    """Two points that must be distinct coincide."""


class WindTooStrong(TrochoidError, ValueError):
    """Wind speed is not strictly below the airspeed."""

    def __init__(self, vw: float, va: float):
        super().__init__(f"wind exceeds airspeed (Vw={vw:.6g} m/s, Va={va:.6g} m/s)")
        self.vw = vw
        self.va = va


class Infeasible(TrochoidError):
    """A path word cannot connect the requested configurations."""


class NoSolution(TrochoidError):
    """No candidate word produced a feasible path."""
