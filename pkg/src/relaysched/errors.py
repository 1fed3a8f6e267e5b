"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the usable support of a function."""


class NumericalOverflowError(ArithmeticError):
    """A tail quantity underflowed/overflowed before the computation finished."""

    def __init__(self, message, last_usable=None):
        super().__init__(message)
        self.last_usable = last_usable


class BracketError(RuntimeError):
    """No finite root bracket could be located."""


class Type1ViolationError(ValueError):
    """A parent law failed the Gumbel (Type I) domain-of-attraction check."""


class UnsupportedLawError(ValueError):
    """The requested fading law has no supported construction here."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""

    def __init__(self, message, field=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.field = field
        self.line = line
