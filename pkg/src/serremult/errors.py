"""Error hierarchy shared across the workbench.

Three families matter to the command line: mathematical precondition
failures (exit 1), source parse errors (exit 2), and resource budget or
stabilization failures (exit 3). Everything else is a plain bug and is
allowed to propagate as an ordinary traceback.
"""

from __future__ import annotations


class PreconditionError(ValueError):
    """A mathematical precondition of an operation does not hold."""


class SignatureMismatchError(PreconditionError):
    """Operands live over different ring signatures."""


class ZeroPolynomialError(PreconditionError):
    """The zero polynomial was passed where a degree is required."""


class ZeroIdealError(PreconditionError):
    """The zero ideal was passed to an operation that rejects it."""


class UnitIdealError(PreconditionError):
    """The unit ideal was passed to an operation that rejects it."""


class NonHomogeneousError(PreconditionError):
    """A graded-only operation received a non-homogeneous ideal."""


class SupportNotOriginError(PreconditionError):
    """The relevant quotient is not supported at the origin alone."""


class ImproperIntersectionError(PreconditionError):
    """The two ideals do not intersect properly at the origin."""


class ZerodivisorError(PreconditionError):
    """The chosen element is a zerodivisor on the module."""


class NotFlatError(PreconditionError):
    """An operation requiring flatness over the uniformizer got a non-flat input."""


class ParseError(ValueError):
    """Source text rejected; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BudgetError(RuntimeError):
    """Base for resource budget and stabilization failures."""


class BudgetExceededError(BudgetError):
    """A degree or pair-count cap was hit during a basis computation."""


class StabilizationError(BudgetError):
    """Finite differences did not stabilize within the sampling budget."""

    def __init__(self, message: str, samples: tuple[int, ...]):
        super().__init__(f"{message}; samples {list(samples)}")
        self.samples = samples


class CertificateError(RuntimeError):
    """An internal consistency certificate failed; output must not be trusted."""
