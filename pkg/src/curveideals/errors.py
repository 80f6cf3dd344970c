"""Exception hierarchy.

Input problems (bad text, bad field, bad generators) derive from
:class:`InputError`; failures of a computation that was correctly posed
derive from :class:`ComputationError`.  The CLI maps the first family to
exit code 2 and the second to exit code 1.
"""

from __future__ import annotations


class CurveIdealsError(Exception):
    pass


class InputError(CurveIdealsError, ValueError):
    pass


class SeriesSyntaxError(InputError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class FieldMismatchError(InputError):
    pass


class CapError(InputError):
    """An exponent falls outside a series' certified range."""


class NormalizationError(InputError):
    """The value semigroup has gcd > 1, so the normalization is not k[[t]]."""


class ComputationError(CurveIdealsError):
    pass


class CapInsufficientError(ComputationError):
    pass


class NonStabilizationError(ComputationError):
    pass


class BudgetExceededError(ComputationError):
    pass


class EngineFault(ComputationError):
    """Two routes that must agree did not.  Always a bug in this package."""
