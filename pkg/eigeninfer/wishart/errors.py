"""Wishart sampling Exceptions."""


class MultiplicityRoundingError(ValueError):
    """Error to raise when atom weights cannot be rounded to integer multiplicities."""


class SingularSampleError(ValueError):
    """Error to raise when dual moments are requested from a numerically singular sample."""


class DegenerateSampleError(RuntimeError):
    """Error to raise when a sample with ``r < 1`` has non-positive eigenvalues."""
