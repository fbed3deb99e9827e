"""Exception types shared across scalecalc."""


class ScaleCalcError(Exception):
    pass


class DomainError(ScaleCalcError, ValueError):
    """Argument outside the domain of an operation (e.g. index 0)."""


class DimensionError(ScaleCalcError, ValueError):
    pass


class TruncationError(ScaleCalcError):
    """Not enough materialized values to produce the requested prefix."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved length {achieved})")
        self.achieved = achieved


class FitError(ScaleCalcError, ValueError):
    pass


class UnsupportedClassError(ScaleCalcError, TypeError):
    pass


class ResolutionError(ScaleCalcError, ValueError):
    """Sampling too coarse for the requested number of Fourier modes."""


class OutsideLambdaError(ScaleCalcError, KeyError):
    """Invariant table queried at (i, j) with i >= j."""
