# factorization/exceptions.py
"""
Exception hierarchy shared by the numerical kernels, controllers and commands.

Kernels raise these; controllers log and re-raise them; management commands
map them to exit codes (2 = numeric failure, 3 = config error).
"""


class ShinboError(Exception):
    """Base class for all errors raised by the factorization package."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context

    def __str__(self):
        message = super().__str__()
        if not self.context:
            return message
        details = ', '.join(f"{key}={value}" for key, value in sorted(self.context.items()))
        return f"{message} ({details})"


class DimensionError(ShinboError, ValueError):
    """Operands have non-conformal shapes or an index is out of range."""


class DomainError(ShinboError, ValueError):
    """An entry lies outside the domain of the operation (negative, zero under a log, ...)."""

    def __init__(self, message, index=None, **context):
        if index is not None:
            context['index'] = tuple(int(i) for i in index)
        super().__init__(message, **context)
        self.index = context.get('index')


class NumericError(ShinboError, ArithmeticError):
    """NaN/Inf produced during an iteration, SVD failure, overflow."""


class DegenerateComponentError(NumericError):
    """A column of W vanished, so the component cannot be normalized."""

    def __init__(self, k, message=None):
        super().__init__(message or f"Column {k} of W is identically zero", k=k)
        self.k = k


class ConfigError(ShinboError):
    """The experiment configuration is invalid."""

    def __init__(self, message, errors=None, **context):
        super().__init__(message, **context)
        self.errors = errors or {}
