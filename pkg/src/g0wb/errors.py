"""Exception types shared across the workbench.

Every failure a caller is expected to branch on gets its own class; anything
raised with a bare ValueError is a programming error, not a workbench outcome.
"""

from __future__ import annotations


class G0wbError(Exception):
    """Base class for all workbench errors."""


class NotCoprime(G0wbError):
    """Galois automorphism index shares a factor with the conductor."""


class NonIntegralInput(G0wbError):
    """A series with fractional exponents was given where integral ones are required."""


class InsufficientTruncation(G0wbError):
    """The series is not determined far enough for the requested operation.

    ``required`` carries the exponent bound that would make the operation
    possible, when it can be computed.
    """

    def __init__(self, message: str, required=None):
        super().__init__(message)
        self.required = required


class NotInvariant(G0wbError):
    """A coset-symmetric combination failed to collapse to integral exponents
    or to coefficients in the declared field; the input does not satisfy the
    modular equation being constructed.  ``exponent``/``coefficient`` locate
    the surviving term when known."""

    def __init__(self, message: str, exponent=None, coefficient=None):
        super().__init__(message)
        self.exponent = exponent
        self.coefficient = coefficient


class ExpressFailure(G0wbError):
    """Pole-killing left a nonzero residual: the series is not a polynomial
    in the generator.  ``residual`` is the irreducible remainder series."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class InsufficientSeed(G0wbError):
    """Bootstrap seed is too short to determine the next coefficient."""


class BootstrapStalled(G0wbError):
    """The linear coefficient of the unknown vanished; order-by-order solving
    cannot continue."""


class Inconsistent(G0wbError):
    """An order-by-order solve met an equation with no solution."""


class NotUnimodular(G0wbError):
    """Matrix determinant is not 1."""


class MaslovUndefined(G0wbError):
    """The Maslov correction residue fell outside {0, +-1}; the extended
    group-law model has been violated."""


class RequiresPositiveC(G0wbError):
    """The closed multiplier formula is only stated for lower-left entry c > 0."""


class NonConvergent(G0wbError):
    """Numeric evaluation requested outside the region of convergence."""


class CorruptCorpus(G0wbError):
    """A bundled data file disagrees with the hard-coded reference literals."""


class ParseError(G0wbError):
    """Malformed text input; ``line`` is the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ShapeError(G0wbError):
    """Series violates the required normalization (q^-1 leading term, zero
    constant term)."""
