"""Exception hierarchy shared across the package.

`AmbiguityError` marks answers double precision cannot certify (multiplicity
resolution, borderline membership, a Pell identity that fails to close).
`TraceError` marks failures of the numerical arc continuation.  Both carry
enough context to be reported verbatim by the command line front end.
"""
from __future__ import annotations


class AmbiguityError(RuntimeError):
    """A numerical dichotomy could not be decided at working precision."""


class RootFindingError(AmbiguityError):
    """The simultaneous root iteration did not converge.

    Carries the best iterate and its residual so callers can report how
    close the solver got.
    """

    def __init__(self, message: str, best=None, residual: float | None = None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class TraceError(RuntimeError):
    """Arc continuation failed or disagreed with the algebraic counts."""

    def __init__(self, message: str, last_good_t: float | None = None):
        super().__init__(message)
        self.last_good_t = last_good_t
