"""Exception hierarchy shared by every module of the toolkit."""


class GsrError(Exception):
    """Base class for all toolkit errors."""


class MissingEdgeError(GsrError):
    pass


class NonpositiveAError(GsrError):
    pass


class LengthMismatchError(GsrError):
    pass


class SupportError(GsrError):
    """Perturbation support touches the boundary layer of the host box."""


class PositiveVError(GsrError):
    pass


class BadMeshError(GsrError):
    pass


class NotPeriodicError(GsrError):
    pass


class EdgeSolveFailure(GsrError):
    pass


class SignFailure(GsrError):
    pass


class NoConvergence(GsrError):
    pass


class BoxMismatchError(GsrError):
    pass


class OrientationMismatchError(GsrError):
    pass


class SupportTouchesBoundaryError(GsrError):
    pass


class BadGroundStateError(GsrError):
    pass


class NotTridiagonalError(GsrError):
    pass


class TooManyError(GsrError):
    pass


class SizeLimitError(GsrError):
    pass


class TruncationSuspectError(GsrError):
    pass


class NegativeGammaError(GsrError):
    pass


class UnknownConstantError(GsrError):
    pass


class GammaOutOfRangeError(GsrError):
    pass


class ParseError(GsrError):
    pass


class ValidationError(GsrError):
    pass


class ComputeError(GsrError):
    pass
