"""Statistical inference Exceptions and Warnings."""


class NoFeasibleMinimumError(RuntimeError):
    """Error to raise when every minimizer start ends where ``det Q <= 0``."""

    def __init__(self, message='', starts=0, nonpositive_hits=0):
        self.message = message
        self.starts = starts
        self.nonpositive_hits = nonpositive_hits
        super().__init__(self.message)


class WarmStartWarning(UserWarning):
    """Warning to show when a warm start cannot be used and is ignored."""
