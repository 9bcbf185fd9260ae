"""Exception hierarchy.

Every failure carries its class name as the first token of ``str(exc)`` so
that command-line messages can be matched by name.
"""


class SpectralError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str = ""):
        name = type(self).__name__
        super().__init__(f"{name}: {message}" if message else name)


class InputError(SpectralError):
    """Malformed or inconsistent user input."""


class SolverError(SpectralError):
    """A numerical routine could not produce a trustworthy result."""


class InadmissibleData(SpectralError):
    """Data outside the class covered by the two-spectra theory."""


# boundary functions
class NonpositiveResidue(InputError): ...
class UnorderedPoles(InputError): ...
class NegativeLinearCoefficient(InputError): ...
class NotNormalForm(InputError): ...
class PoleEvaluation(SolverError): ...
class InfinityNotEvaluable(InputError): ...

# direct solver
class StepSizeUnderflow(SolverError): ...
class NonfiniteState(SolverError): ...
class BracketingFailure(SolverError): ...
class EigenvalueAtPoleOfF(SolverError): ...
class DegenerateNormalization(SolverError): ...
class EvaluationAtEigenvalue(SolverError): ...

# products and fits
class InconsistentAsymptotics(InadmissibleData): ...
class NoHalfIntegerFit(InadmissibleData): ...
class AmbiguousGapOrder(InadmissibleData): ...
class VanishingNu(InadmissibleData): ...
class CommonPoint(InadmissibleData): ...
class NotInterlacing(InadmissibleData): ...

# inverse pipeline
class ExceptionCase(InadmissibleData): ...
class DirectionMismatch(InadmissibleData): ...
class CardinalityExceeded(InadmissibleData): ...
class NonpositiveGamma(InadmissibleData): ...
class InsufficientZerosFound(SolverError): ...
class IndefiniteHankel(InadmissibleData): ...
class TailTooLarge(SolverError): ...
class PoleTauMismatch(SolverError): ...
