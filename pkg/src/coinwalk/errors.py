"""Exception types raised by coinwalk."""


class CoinwalkError(Exception):
    """Base class for all library errors."""


class InvalidStateError(CoinwalkError, ValueError):
    """An operator that should be a valid (Hermitian, positive) state is not."""


class NormalizationError(CoinwalkError, ValueError):
    """Amplitudes or probabilities do not sum to one."""


class RegimeError(CoinwalkError, ValueError):
    """A closed form was requested outside the parameter regime where it holds."""


class UnsupportedError(CoinwalkError, ValueError):
    """The request exceeds a documented cost or validity bound."""


class InvariantError(CoinwalkError, ArithmeticError):
    """A conserved quantity (trace, Hermiticity, norm) drifted past tolerance."""
