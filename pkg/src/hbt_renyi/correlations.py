"""Renyi-2 mutual information, Gaussian classical correlations and discord.

Two routes are provided. The closed forms cover standard-form states with
``a == b`` and ``|c| == |d|`` (the HBT family and two-mode squeezed vacua);
:func:`discord_oracle` minimises the post-measurement conditional entropy
directly over pure single-mode Gaussian measurement seeds and works for any
physical two-mode state. All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import OutOfFamily, SingularUpdate
from .gaussian import (
    CovarianceMatrix2,
    StandardForm,
    StateLike,
    as_matrix,
    check_physical,
    renyi2_entropy,
)

LOG_SQUEEZE_BOUND = 12.0
GRID_LOG_SQUEEZE = 49
GRID_ANGLE = 32
OBJECTIVE_TOL = 1e-10

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CorrelationTriple:
    mutual_info: float
    classical: float
    discord: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.mutual_info, self.classical, self.discord)


@dataclass(frozen=True)
class MeasurementSeed:
    """Pure single-mode Gaussian seed ``R(phi) diag(lam, 1/lam) R(phi)^T``.

    ``log_squeeze = 0`` is heterodyne detection; ``|log_squeeze| -> inf``
    approaches homodyne detection of a rotated quadrature.
    """

    log_squeeze: float
    angle: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.log_squeeze) and math.isfinite(self.angle)):
            raise ValueError("measurement seed parameters must be finite")
        angle = self.angle % math.pi
        if angle >= math.pi:
            angle = 0.0
        object.__setattr__(self, "angle", angle)

    def covariance(self) -> np.ndarray:
        lam = math.exp(self.log_squeeze)
        cs, sn = math.cos(self.angle), math.sin(self.angle)
        rot = np.array([[cs, -sn], [sn, cs]])
        return rot @ np.diag([lam, 1.0 / lam]) @ rot.T


def _check_family(sf: StandardForm) -> None:
    if not isinstance(sf, StandardForm) or not sf.is_symmetric_family:
        raise OutOfFamily(
            "closed forms need a standard form with a == b and |c| == |d|; "
            "use discord_oracle instead"
        )


def mutual_information(state: StateLike) -> float:
    """``S2(A) + S2(B) - S2(AB)``.

    For a standard form this is ``(1/2) ln(a^2 b^2 / ((ab - c^2)(ab - d^2)))``,
    written with ``log1p`` so weak correlations keep full relative precision.
    """
    if isinstance(state, StandardForm):
        check_physical(state)
        ab = state.a * state.b
        c2, d2 = state.c**2, state.d**2
        return 0.5 * (math.log1p(c2 / (ab - c2)) + math.log1p(d2 / (ab - d2)))
    cm = as_matrix(state)
    return (
        renyi2_entropy(cm.block_a) + renyi2_entropy(cm.block_b) - renyi2_entropy(cm)
    )


# With q = a^2 - c^2 the symmetric-family closed forms read
#   I = ln(a^2 / q)                            = log1p(c^2 / q)
#   J = ln((a^2 + a) / (a^2 + a - c^2))        = log1p(c^2 / (q + a))
#   D = ln((a^2 + a^3 - a c^2) / ((a + 1) q))  = log1p(c^2 / ((a + 1) q))
# Sharing one rounded q keeps I = J + D to ~1e-16 even near pure states.


def classical_correlations_closed(sf: StandardForm) -> float:
    """``ln[(a^2 + a) / (a^2 + a - c^2)]`` for the symmetric family."""
    _check_family(sf)
    check_physical(sf)
    a, c2 = sf.a, sf.c**2
    return math.log1p(c2 / (a * a - c2 + a))


def discord_closed(sf: StandardForm) -> float:
    """``ln[(a^2 + a^3 - a c^2) / (a^2 + a^3 - a c^2 - c^2)]`` for the symmetric family."""
    _check_family(sf)
    check_physical(sf)
    a, c2 = sf.a, sf.c**2
    return math.log1p(c2 / ((a + 1.0) * (a * a - c2)))


def _conditional_objective(cm: CovarianceMatrix2):
    """Return ``f(log_squeeze, angle)`` giving the post-measurement entropy of A."""
    (a11, a12), (_, a22) = cm.block_a
    (b11, b12), (_, b22) = cm.block_b
    (c11, c12), (c21, c22) = cm.block_c

    def objective(t: float, phi: float) -> float:
        lam = math.exp(t)
        inv = 1.0 / lam
        cs, sn = math.cos(phi), math.sin(phi)
        m11 = b11 + lam * cs * cs + inv * sn * sn
        m22 = b22 + lam * sn * sn + inv * cs * cs
        m12 = b12 + (lam - inv) * sn * cs
        det_m = m11 * m22 - m12 * m12
        if not det_m > 0:
            raise SingularUpdate(f"sigma_B + sigma_M is singular (det {det_m!r})")
        # (sigma_B + sigma_M)^-1 = adj / det
        i11, i22, i12 = m22 / det_m, m11 / det_m, -m12 / det_m
        # X = C M^-1 C^T
        r11 = c11 * i11 + c12 * i12
        r12 = c11 * i12 + c12 * i22
        r21 = c21 * i11 + c22 * i12
        r22 = c21 * i12 + c22 * i22
        x11 = r11 * c11 + r12 * c12
        x12 = r11 * c21 + r12 * c22
        x22 = r21 * c21 + r22 * c22
        e11, e12, e22 = a11 - x11, a12 - x12, a22 - x22
        det_e = e11 * e22 - e12 * e12
        if not det_e > 0:
            raise SingularUpdate(f"conditional covariance has det {det_e!r}")
        return 0.5 * math.log(det_e)

    return objective


def conditional_entropy_after_measurement(
    state: StateLike, seed: MeasurementSeed, measured: str = "B"
) -> float:
    """Renyi-2 entropy of one subsystem after a Gaussian measurement on the other.

    The conditional covariance ``sigma_A - sigma_C (sigma_B + sigma_M)^-1 sigma_C^T``
    does not depend on the outcome, so no average over outcomes is needed.
    """
    cm = as_matrix(state)
    if measured == "A":
        cm = cm.swapped()
    elif measured != "B":
        raise ValueError(f"measured must be 'A' or 'B', got {measured!r}")
    return _conditional_objective(cm)(seed.log_squeeze, seed.angle)


def _golden_section(f, lo: float, hi: float, tol: float = 1e-10):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _grid_minimum(cm: CovarianceMatrix2):
    ts = np.linspace(-LOG_SQUEEZE_BOUND, LOG_SQUEEZE_BOUND, GRID_LOG_SQUEEZE)
    phis = np.arange(GRID_ANGLE) * (math.pi / GRID_ANGLE)
    t, phi = np.meshgrid(ts, phis, indexing="ij")
    lam = np.exp(t)
    cs, sn = np.cos(phi), np.sin(phi)
    s = np.empty(t.shape + (2, 2))
    s[..., 0, 0] = lam * cs**2 + sn**2 / lam
    s[..., 1, 1] = lam * sn**2 + cs**2 / lam
    s[..., 0, 1] = s[..., 1, 0] = (lam - 1.0 / lam) * sn * cs
    upd = cm.block_c @ np.linalg.inv(cm.block_b + s) @ cm.block_c.T
    vals = 0.5 * np.log(np.linalg.det(cm.block_a - upd))
    vals = np.where(np.isfinite(vals), vals, np.inf)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    return float(ts[i]), float(phis[j])


def minimize_conditional_entropy(
    state: StateLike, measured: str = "B", max_sweeps: int = 500
) -> tuple[float, MeasurementSeed]:
    """Minimum post-measurement entropy over pure Gaussian seeds.

    Coarse grid over ``(log_squeeze, angle)`` followed by coordinate descent
    with golden-section line searches.
    """
    cm = as_matrix(state)
    check_physical(cm)
    if measured == "A":
        cm = cm.swapped()
    elif measured != "B":
        raise ValueError(f"measured must be 'A' or 'B', got {measured!r}")
    f = _conditional_objective(cm)
    t, phi = _grid_minimum(cm)
    best = f(t, phi)
    step_t = 2 * LOG_SQUEEZE_BOUND / (GRID_LOG_SQUEEZE - 1)
    step_phi = math.pi / GRID_ANGLE
    for _ in range(max_sweeps):
        previous = best
        lo, hi = max(-LOG_SQUEEZE_BOUND, t - step_t), min(LOG_SQUEEZE_BOUND, t + step_t)
        t_new, val = _golden_section(lambda u: f(u, phi), lo, hi)
        if val < best:
            t, best = t_new, val
        phi_new, val = _golden_section(lambda u: f(t, u), phi - step_phi, phi + step_phi)
        if val < best:
            phi, best = phi_new, val
        if previous - best < OBJECTIVE_TOL * 1e-3:
            break
    return best, MeasurementSeed(t, phi)


def discord_oracle(
    state: StateLike, measured: str = "B"
) -> tuple[float, float, MeasurementSeed]:
    """Gaussian discord and classical correlations by direct minimisation.

    Returns ``(D, J, argmin_seed)`` with
    ``D = S2(measured) - S2(AB) + min H`` and ``J = S2(other) - min H``.
    """
    cm = as_matrix(state)
    check_physical(cm)
    h_min, seed = minimize_conditional_entropy(cm, measured=measured)
    s_a = renyi2_entropy(cm.block_a)
    s_b = renyi2_entropy(cm.block_b)
    s_ab = renyi2_entropy(cm)
    s_measured, s_other = (s_b, s_a) if measured == "B" else (s_a, s_b)
    discord = s_measured - s_ab + h_min
    classical = s_other - h_min
    return discord, classical, seed


def correlation_triple(state: StateLike, measured: str = "B") -> CorrelationTriple:
    """``(I, J, D)``; closed forms inside the symmetric family, oracle elsewhere."""
    if isinstance(state, StandardForm) and state.is_symmetric_family:
        # the closed forms are symmetric under A <-> B
        return CorrelationTriple(
            mutual_information(state),
            classical_correlations_closed(state),
            discord_closed(state),
        )
    discord, classical, _ = discord_oracle(state, measured=measured)
    return CorrelationTriple(mutual_information(state), classical, discord)
