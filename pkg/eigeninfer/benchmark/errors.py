"""Benchmark Exceptions."""


class InvalidConfigError(ValueError):
    """Error to raise when an experiment configuration is malformed or inconsistent."""


class InsufficientAcceptedError(ValueError):
    """Error to raise when fewer than two accepted estimates are available for a statistic."""
