class MacroCoherenceError(ValueError):
    """Base class for invalid-input errors raised by this package."""


class NotHermitian(MacroCoherenceError):
    pass


class NotPSD(MacroCoherenceError):
    pass


class DimensionMismatch(MacroCoherenceError):
    pass


class TooLarge(MacroCoherenceError):
    pass


class AsymmetricInput(MacroCoherenceError):
    pass


class BasisNotOrthonormal(MacroCoherenceError):
    pass


class UnknownMode(MacroCoherenceError):
    pass


class NotTracePreserving(MacroCoherenceError):
    pass


class NotCompletelyPositive(MacroCoherenceError):
    pass


class NegativeG(MacroCoherenceError):
    pass


class NonPositiveSigma(MacroCoherenceError):
    pass


class InvalidWeight(MacroCoherenceError):
    pass


class ModesNotSymmetric(MacroCoherenceError):
    pass


class UnsupportedCombination(MacroCoherenceError):
    pass


class StepTooLarge(ArithmeticError):
    """Integrator step produced trace drift or left the stability region."""
