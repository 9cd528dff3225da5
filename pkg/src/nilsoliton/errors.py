"""Exception types raised by nilsoliton."""


class NilsolitonError(Exception):
    """Base class for all errors raised by this package."""


class NonPositiveDim(NilsolitonError, ValueError):
    pass


class IndexOutOfRange(NilsolitonError, ValueError):
    pass


class DuplicateEntry(NilsolitonError, ValueError):
    pass


class DimensionMismatch(NilsolitonError, ValueError):
    pass


class ZeroScale(NilsolitonError, ValueError):
    pass


class NotNilpotent(NilsolitonError):
    pass


class NotALieAlgebra(NilsolitonError):
    """The Jacobi identity fails beyond tolerance."""

    def __init__(self, defect, tol):
        super().__init__(f"Jacobi identity violated: defect {defect:.3e} > tol {tol:.1e}")
        self.defect = defect
        self.tol = tol


class NotUnimodular(NilsolitonError):
    pass


class OracleDisagreement(NilsolitonError):
    """The two soliton criteria returned different verdicts (an internal bug)."""


class UnknownFamily(NilsolitonError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown family"


class ParseError(NilsolitonError, ValueError):
    """Malformed algebra file. ``where`` names the line or field at fault."""

    def __init__(self, message, where=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.message = message
        self.where = where


class NoConvergenceWarning(UserWarning):
    """No multistart reached the convergence threshold; best point is still reported."""
