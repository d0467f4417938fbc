"""Eigen-inference Exceptions."""


class InvalidSpectrumError(ValueError):
    """Error to raise when atoms or weights do not describe a valid atomic spectrum."""


class InsufficientOrderError(ValueError):
    """Error to raise when fewer moments are available than the requested order needs."""


class RectangularityOutOfRangeError(ValueError):
    """Error to raise when the rectangularity ratio is outside the supported range."""


class DegenerateDenominatorError(ArithmeticError):
    """Error to raise when a relation denominator vanishes within tolerance."""

    def __init__(self, message='', value=None):
        self.message = message
        self.value = value
        super().__init__(self.message)


class VersionMismatchWarning(UserWarning):
    """Warning to show when a saved report was produced with other package versions."""
