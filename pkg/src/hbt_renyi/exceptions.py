"""Exception hierarchy shared by the package."""


class HbtRenyiError(Exception):
    """Base class for all errors raised by :mod:`hbt_renyi`."""


class NonSymmetric(HbtRenyiError, ValueError):
    """A covariance matrix failed the symmetry check."""


class ComplexEigenvalue(HbtRenyiError, ValueError):
    """Symplectic eigenvalues came out complex, i.e. the input is unphysical."""


class Unphysical(HbtRenyiError, ValueError):
    """A covariance matrix violates the uncertainty principle."""


class OutOfFamily(HbtRenyiError, ValueError):
    """A closed-form formula was called outside the state family it covers."""


class SingularUpdate(HbtRenyiError, ArithmeticError):
    """The measurement update matrix could not be inverted."""


class DomainError(HbtRenyiError, ValueError):
    """Argument outside the mathematical domain of a function."""


class InsufficientTrials(HbtRenyiError, ValueError):
    """Too few Monte Carlo trials for a batch-means error estimate."""
