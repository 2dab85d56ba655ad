"""Exception hierarchy shared by all ressolve modules."""


class RessolveError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RessolveError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class NegationPresent(RessolveError):
    """A negation node reached an operation that requires negation-free input."""


class OddNegation(RessolveError):
    """A variable occurs under an odd number of negations."""


class ConditionalPresent(RessolveError):
    """A conditional node reached an operation restricted to flat expressions."""


class TermBlowup(RessolveError):
    """Rewriting exceeded the configured term-size cap."""


class NotClosed(RessolveError):
    """An equation system references variables it does not bind."""


class NotConditional(RessolveError):
    """Guard normalisation was applied to a non-conditional expression."""


class IndexOrder(RessolveError):
    """Substitution indices violate the required order (target before source)."""


class MissingVariable(RessolveError):
    """A solution map lacks a value for a bound variable."""


class BadConstants(RessolveError):
    """Boolean embedding constants must satisfy true-value > false-value."""


class DuplicateBinder(RessolveError):
    """A formula binds the same variable twice."""


class UnboundVariable(RessolveError):
    """A formula variable is not bound by any enclosing fixpoint."""


class UnknownState(RessolveError):
    """A transition or distribution refers to a state outside the model."""
