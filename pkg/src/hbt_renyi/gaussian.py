"""Two-mode Gaussian states at the covariance-matrix level.

Quadratures are ordered ``(x1, p1, x2, p2)`` and normalised so that the
vacuum covariance matrix is the identity. A thermal mode with mean photon
number ``n`` then has covariance ``(1 + 2n) * I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import ComplexEigenvalue, NonSymmetric, Unphysical

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-9

# symplectic form for (x1, p1, x2, p2)
OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class StandardForm:
    r"""Standard-form parameters of a two-mode covariance matrix.

    .. math::
        \sigma = \begin{pmatrix} a & 0 & c & 0 \\ 0 & a & 0 & d \\
                 c & 0 & b & 0 \\ 0 & d & 0 & b \end{pmatrix}
    """

    a: float
    b: float
    c: float
    d: float

    def determinant(self) -> float:
        ab = self.a * self.b
        return (ab - self.c**2) * (ab - self.d**2)

    def to_matrix(self) -> "CovarianceMatrix2":
        a, b, c, d = self.a, self.b, self.c, self.d
        m = np.array(
            [
                [a, 0.0, c, 0.0],
                [0.0, a, 0.0, d],
                [c, 0.0, b, 0.0],
                [0.0, d, 0.0, b],
            ]
        )
        return CovarianceMatrix2(m)

    @property
    def is_symmetric_family(self) -> bool:
        """True for ``a == b`` and ``|c| == |d|``."""
        return self.a == self.b and abs(self.c) == abs(self.d)


@dataclass(frozen=True, eq=False)
class CovarianceMatrix2:
    """Immutable 4x4 real covariance matrix of a zero-mean two-mode state."""

    m: np.ndarray

    def __post_init__(self):
        arr = np.array(self.m, dtype=float)
        if arr.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("covariance matrix has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "m", arr)

    def __eq__(self, other):
        if not isinstance(other, CovarianceMatrix2):
            return NotImplemented
        return bool(np.array_equal(self.m, other.m))

    def __hash__(self):
        return hash(self.m.tobytes())

    @property
    def block_a(self) -> np.ndarray:
        return self.m[:2, :2]

    @property
    def block_b(self) -> np.ndarray:
        return self.m[2:, 2:]

    @property
    def block_c(self) -> np.ndarray:
        """Off-diagonal block coupling A (rows) to B (columns)."""
        return self.m[:2, 2:]

    @classmethod
    def from_blocks(cls, sigma_a, sigma_b, sigma_c) -> "CovarianceMatrix2":
        sigma_c = np.asarray(sigma_c, dtype=float)
        return cls(np.block([[sigma_a, sigma_c], [sigma_c.T, sigma_b]]))

    def swapped(self) -> "CovarianceMatrix2":
        """The same state with the roles of A and B exchanged."""
        perm = [2, 3, 0, 1]
        return CovarianceMatrix2(self.m[np.ix_(perm, perm)])


StateLike = Union[CovarianceMatrix2, StandardForm]


def as_matrix(state: StateLike) -> CovarianceMatrix2:
    if isinstance(state, StandardForm):
        return state.to_matrix()
    if isinstance(state, CovarianceMatrix2):
        return state
    return CovarianceMatrix2(state)


def check_symmetric(cm: CovarianceMatrix2) -> None:
    if np.max(np.abs(cm.m - cm.m.T)) > SYMMETRY_TOL:
        raise NonSymmetric("covariance matrix is not symmetric within 1e-12")


def determinant(state: StateLike) -> float:
    """Determinant of the full covariance matrix.

    Uses the closed form ``(ab - c^2)(ab - d^2)`` for standard forms and an
    LU factorisation otherwise.
    """
    if isinstance(state, StandardForm):
        return state.determinant()
    return float(np.linalg.det(as_matrix(state).m))


def _williamson(m: np.ndarray) -> tuple[float, float] | None:
    """Symplectic spectrum from the Hermitian matrix sqrt(m) i*Omega sqrt(m).

    Stable even when the spectrum is degenerate; ``None`` if ``m`` is not
    positive definite.
    """
    w, v = np.linalg.eigh(m)
    if w[0] <= 0:
        return None
    root = (v * np.sqrt(w)) @ v.T
    ev = np.linalg.eigvalsh(root @ (1j * OMEGA) @ root)
    # eigenvalues come in +-nu pairs
    return float(ev[2]), float(ev[3])


def symplectic_eigenvalues(state: StateLike) -> tuple[float, float]:
    """Return the symplectic eigenvalues ``(nu_minus, nu_plus)``.

    Uses the two-mode invariants: with ``Delta = det A + det B + 2 det C``,
    ``nu^2 = (Delta -+ sqrt(Delta^2 - 4 det sigma)) / 2``. For a general
    positive-definite matrix the values are then taken from a Hermitian
    eigensolver, which does not lose half the digits near a degenerate
    spectrum.

    Raises
    ------
    NonSymmetric
        If the matrix is not symmetric.
    ComplexEigenvalue
        If the invariants do not admit real symplectic eigenvalues.
    """
    cm = as_matrix(state)
    check_symmetric(cm)
    if isinstance(state, StandardForm):
        delta = state.a**2 + state.b**2 + 2.0 * state.c * state.d
    else:
        delta = float(
            np.linalg.det(cm.block_a)
            + np.linalg.det(cm.block_b)
            + 2.0 * np.linalg.det(cm.block_c)
        )
    det = determinant(state)
    if det < 0:
        raise ComplexEigenvalue(f"negative determinant {det!r}")
    if isinstance(state, StandardForm):
        # Delta^2 - 4 det factored to avoid cancellation for weak correlations
        a, b, c, d = state.a, state.b, state.c, state.d
        disc = (a * a - b * b) ** 2 + 4.0 * (a * c + b * d) * (a * d + b * c)
    else:
        disc = delta * delta - 4.0 * det
    if disc < 0:
        if disc < -1e-12 * max(delta * delta, 1.0):
            raise ComplexEigenvalue(f"negative discriminant {disc!r}")
        disc = 0.0
    root = math.sqrt(disc)
    lo2 = (delta - root) / 2.0
    hi2 = (delta + root) / 2.0
    if lo2 < 0:
        raise ComplexEigenvalue(f"negative squared symplectic eigenvalue {lo2!r}")
    if not isinstance(state, StandardForm):
        spectrum = _williamson(cm.m)
        if spectrum is not None:
            return spectrum
    # det = nu_minus^2 nu_plus^2 gives a cancellation-free small root
    if hi2 > 0:
        lo2 = det / hi2
    return math.sqrt(lo2), math.sqrt(hi2)


def is_physical(state: StateLike) -> bool:
    """Check positivity and the uncertainty principle ``nu_minus >= 1``."""
    cm = as_matrix(state)
    try:
        nu_minus, _ = symplectic_eigenvalues(state)
    except (NonSymmetric, ComplexEigenvalue):
        return False
    minors = [np.linalg.det(cm.m[:k, :k]) for k in range(1, 5)]
    if any(mn <= 0 for mn in minors):
        return False
    return nu_minus >= 1.0 - PHYSICALITY_TOL


def check_physical(state: StateLike) -> None:
    if not is_physical(state):
        raise Unphysical(f"state {state!r} violates the uncertainty principle")


def marginal(state: StateLike, which: str = "A") -> np.ndarray:
    """Reduced 2x2 covariance matrix of subsystem ``'A'`` or ``'B'``."""
    cm = as_matrix(state)
    if which == "A":
        return np.array(cm.block_a)
    if which == "B":
        return np.array(cm.block_b)
    raise ValueError(f"subsystem must be 'A' or 'B', got {which!r}")


def _single_mode_entropy(sigma: np.ndarray) -> float:
    sigma = np.asarray(sigma, dtype=float)
    if abs(sigma[0, 1] - sigma[1, 0]) > SYMMETRY_TOL:
        raise NonSymmetric("single-mode covariance matrix is not symmetric")
    det = sigma[0, 0] * sigma[1, 1] - sigma[0, 1] * sigma[1, 0]
    if sigma[0, 0] <= 0 or det < 1.0 - PHYSICALITY_TOL:
        raise Unphysical(f"single-mode covariance with det {det!r} is unphysical")
    return 0.5 * math.log(det)


def renyi2_entropy(state) -> float:
    """Renyi-2 entropy ``-ln tr(rho^2) = (1/2) ln det(sigma)``.

    Accepts a two-mode state (``CovarianceMatrix2`` or ``StandardForm``) or a
    2x2 single-mode covariance matrix.
    """
    if isinstance(state, (CovarianceMatrix2, StandardForm)):
        check_physical(state)
        return 0.5 * math.log(determinant(state))
    arr = np.asarray(state, dtype=float)
    if arr.shape == (2, 2):
        return _single_mode_entropy(arr)
    return renyi2_entropy(CovarianceMatrix2(arr))


def thermal_state(nbar_a: float, nbar_b: float | None = None) -> StandardForm:
    """Product of two thermal modes."""
    if nbar_b is None:
        nbar_b = nbar_a
    return StandardForm(1 + 2 * nbar_a, 1 + 2 * nbar_b, 0.0, 0.0)


def two_mode_squeezed_vacuum(r: float) -> StandardForm:
    """Pure two-mode squeezed vacuum with squeezing parameter ``r``."""
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    return StandardForm(ch, ch, sh, -sh)
