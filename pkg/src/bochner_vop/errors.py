"""Exception hierarchy.

Correctness alarms (identities that must hold by construction) derive from
``IdentityViolation``; bad user input derives from ``SpecError``.
"""


class VOPError(Exception):
    """Base class for every error raised by this package."""


class SpecError(VOPError, ValueError):
    """Invalid family specification or parameters."""


class IdentityViolation(VOPError, ArithmeticError):
    """An identity guaranteed by the construction failed to hold exactly."""


class InexactDivision(VOPError, ArithmeticError):
    pass


class TableTooSmall(VOPError, ValueError):
    pass


class RealizationMismatch(VOPError, TypeError):
    pass


class NilpotencyCapExceeded(VOPError, ArithmeticError):
    pass


class NotDegreeLowering(VOPError, ArithmeticError):
    pass


class RodriguesMismatch(IdentityViolation):
    pass


class FitMismatch(IdentityViolation):
    pass


class InsufficientSamples(VOPError, ValueError):
    pass


class BandwidthExceeded(IdentityViolation):
    pass


class CorrespondenceMismatch(IdentityViolation):
    pass


class SpecNotQEqualsG(SpecError):
    pass


class UnknownPreset(SpecError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class MissingParam(SpecError):
    pass


class InvalidParam(SpecError):
    pass
