"""Exception hierarchy shared by all modules."""


class FFMError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class UsageError(FFMError):
    pass


class NonPrimeP(FFMError, ValueError):
    pass


class DivisionByZero(FFMError, ZeroDivisionError):
    pass


class FieldMismatch(FFMError, ValueError):
    pass


class ZeroPolynomial(FFMError, ValueError):
    pass


class NotMonic(FFMError, ValueError):
    pass


class NotIrreducible(FFMError, ValueError):
    pass


class ParseError(FFMError, ValueError):
    pass


class MissingK(FFMError, ValueError):
    pass


class BoundTooLarge(FFMError, ValueError):
    pass


class DegreeTooLarge(FFMError, ValueError):
    pass


class NotDeflatable(FFMError, ArithmeticError):
    pass


class UnsupportedK(FFMError, ValueError):
    pass


class NonPrimeModulus(FFMError, ValueError):
    pass


class ResidueNotCoprime(FFMError, ValueError):
    pass


class ConstraintViolation(FFMError, ValueError):
    pass


class ParamOutOfRange(FFMError, ValueError):
    pass


class IdentityViolation(FFMError, AssertionError):
    """A hard check failed; ``ref`` names the identity involved."""

    def __init__(self, ref: str, detail: str = ""):
        self.ref = ref
        super().__init__(f"{ref}: {detail}" if detail else ref)
