"""Exception hierarchy shared by every module of the package."""


class HalinTSPError(Exception):
    """Base class for all package errors."""


class ValidationError(HalinTSPError):
    """Input does not describe a valid Halin graph."""


class NotATree(ValidationError):
    pass


class Degree2Internal(ValidationError):
    pass


class CycleMismatch(ValidationError):
    pass


class NonPlanar(ValidationError):
    pass


class IsWheel(HalinTSPError):
    pass


class NotAFan(HalinTSPError):
    pass


class InfeasibleSlot(HalinTSPError):
    pass


class TourMissingPseudoNode(HalinTSPError):
    pass


class NotHamiltonian(HalinTSPError):
    pass


class NotAPath(HalinTSPError):
    pass


class UnsupportedK(HalinTSPError):
    pass


class InvalidK(UnsupportedK):
    pass


class TooSmall(HalinTSPError):
    pass


class TooLarge(HalinTSPError):
    pass


class InfeasibleTables(HalinTSPError):
    pass


class InvalidParams(HalinTSPError):
    pass


class MalformedFormula(HalinTSPError):
    pass


class MalformedCnf(MalformedFormula):
    pass


class NonZeroCostTour(HalinTSPError):
    pass


class ConflictingLiterals(HalinTSPError):
    pass


class TooManyVariables(HalinTSPError):
    pass
