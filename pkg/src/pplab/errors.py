"""Exception types shared across the package."""


class NoRootError(ValueError):
    """The coefficient product never crosses one, so there is no positive root."""


class NoOrbitError(ValueError):
    """A periodic attractor was requested for a system outside the attracting regime."""


class NonConvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class TrajectoryOverflowError(OverflowError):
    """A simulated value blew past the overflow guard, signalling misconfiguration."""
