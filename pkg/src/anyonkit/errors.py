"""Exception hierarchy shared by all anyonkit modules."""

from __future__ import annotations


class AnyonError(Exception):
    """Base class for every error raised by anyonkit."""


class DomainError(AnyonError, ValueError):
    """An argument lies outside the domain of an operation (unknown label, bad arity, ...)."""


class UnsupportedFeatureError(AnyonError):
    """The input is valid but uses a feature this library deliberately does not handle.

    The main case is a fusion ring with some ``N(a, b, c) > 1``.
    """


class IncompleteTableError(AnyonError):
    """An F- or R-symbol table lacks entries for admissible index tuples."""

    def __init__(self, missing: list[tuple], kind: str = 'F'):
        self.missing = list(missing)
        self.kind = kind
        shown = ', '.join(str(t) for t in self.missing[:8])
        more = '' if len(self.missing) <= 8 else f' (+{len(self.missing) - 8} more)'
        super().__init__(f'incomplete {kind} table: missing {len(self.missing)} admissible tuple(s): {shown}{more}')


class SolverFailure(AnyonError):
    """No restart converged below tolerance."""

    def __init__(self, message: str, best_residual: float):
        self.best_residual = best_residual
        super().__init__(f'{message} (best residual {best_residual:.3e})')


class SymbolFormatError(AnyonError):
    """Malformed symbol-table JSON (syntax, schema, unknown labels, inadmissible tuples)."""


class SuperselectionError(AnyonError):
    """Attempt to superpose states that live in different superselection sectors."""

    def __init__(self, message: str, sector1=None, sector2=None):
        self.sector1 = sector1
        self.sector2 = sector2
        super().__init__(message)


class LeafMismatchError(SuperselectionError):
    """Same total charge, but the two states are built from different anyon contents."""
