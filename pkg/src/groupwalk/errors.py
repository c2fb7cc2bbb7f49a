"""Exception types raised by the engine."""


class GroupWalkError(Exception):
    """Base class for all engine errors."""


class FormatError(GroupWalkError, ValueError):
    """Malformed or out-of-order input records."""


class NumericError(GroupWalkError, ArithmeticError):
    """A numerical routine failed (non-PD covariance, no convergence, ...)."""


class AlignmentError(GroupWalkError, ValueError):
    """Detections and ground truth do not describe the same frames/objects."""
