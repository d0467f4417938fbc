"""Analytic inference Exceptions and Warnings."""


class IllConditionedError(ArithmeticError):
    """Error to raise when the Hankel system of the Pade approximant is singular."""


class IllConditionedWarning(RuntimeWarning):
    """Warning to show when the Hankel condition number exceeds its threshold."""


class RootFindingError(ArithmeticError):
    """Error to raise when the denominator roots cannot be computed."""
