"""Exception types shared across the package."""


class QwittError(Exception):
    pass


class MalformedElement(QwittError):
    pass


class NotDivisible(QwittError):
    pass


class DivisionByZero(QwittError):
    pass


class IllDefined(QwittError):
    """A ring map descriptor does not kill the modulus."""


class MismatchedShape(QwittError):
    pass


class LengthTooShort(QwittError):
    pass


class InsufficientDepth(QwittError):
    pass


class InsufficientPrecision(QwittError):
    pass


class UnsupportedRing(QwittError):
    pass


class UndecidableVariant(QwittError):
    pass


class NonCommuting(QwittError):
    pass


class RingMismatch(QwittError):
    pass


class ZeroDivisor(QwittError):
    pass


class ZeroF(QwittError):
    pass


class MixedUndecidable(QwittError):
    """Koszul operator neither divides nor is divisible by the eta element."""


class TorsionTerms(QwittError):
    pass


class WindowOverflow(QwittError):
    pass


class WindowMiss(QwittError):
    pass


class DepthExceeded(QwittError):
    pass


class NonIntegralExponent(QwittError):
    pass


class UnknownSuite(QwittError):
    pass


class ParameterOutOfRange(QwittError):
    pass


class SchemaMismatch(QwittError):
    pass
