"""Exception hierarchy.

Every error raised on purpose by the package derives from ``DieOutError`` so
callers (and the CLI) can catch the family in one place.
"""


class DieOutError(Exception):
    pass


# model / config
class DimensionMismatch(DieOutError):
    pass


class NonFinite(DieOutError):
    pass


class ConfigError(DieOutError):
    pass


# nullspace
class ZeroVector(DieOutError):
    pass


class TooLarge(DieOutError):
    pass


class Balanced(DieOutError):
    pass


class NotEnoughKernel(DieOutError):
    pass


class NotClosed(DieOutError):
    pass


# certificates
class NonPositiveCoordinate(DieOutError):
    pass


class WrongOrientation(DieOutError):
    pass


class NoPositiveEntry(DieOutError):
    pass


class X0OutOfRange(DieOutError):
    pass


class AllBalanced(DieOutError):
    pass


class BetaMismatch(DieOutError):
    pass


# trophic
class NotSquare(DieOutError):
    pass


class BadSigns(DieOutError):
    pass


class NotTrophic(DieOutError):
    pass


# integrator
class NonPositiveStart(DieOutError):
    pass


class BadLevels(DieOutError):
    pass


class Empty(DieOutError):
    pass


class Blowup(DieOutError):
    """A coordinate left the bounded range during simulation.

    ``time`` is the first step end at which the threshold was exceeded and
    ``trajectory`` holds everything sampled up to and including that step.
    """

    def __init__(self, message, time=None, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory
