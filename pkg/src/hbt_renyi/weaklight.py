"""Weak-light coincidence of normalised mutual information and ``g2 - 1``.

For the HBT family ``a = 1 + 2n``, ``c = 2n h`` the mutual information is
``ln g(n, h)`` with ``g = a^2 / (a^2 - c^2)``. Its normalised value
``ln g(n, h) / ln g(n, 1)`` tends to ``h^2 = g2 - 1`` as ``n -> 0`` because
``g(n, h)`` and ``g(n, 1) ** (h^2)`` share their Taylor coefficients in ``n``
through third order.

Note on notation: the exponent here is the *squared* amplitude correlation
``h^2`` (the intensity correlation), while the covariance entry carries
``h`` itself. Writing the same symbol for both makes the third-order
statement false; with the ``h`` / ``h^2`` split all identities hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .exceptions import DomainError
from .optics import HbtParams, ScanPoint, amplitude_correlation

COEFF_RTOL = 1e-8
RESIDUAL_NBARS = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class SeriesMatchReport:
    order_matched: int
    coefficient_table: list = field(default_factory=list)
    max_residual_ratio: float = 0.0


def g_function(nbar, corr):
    """``(1 + 2n)^2 / ((1 + 2n)^2 - (2n h)^2)``; broadcasts over arrays."""
    a2 = (1.0 + 2.0 * np.asarray(nbar, dtype=float)) ** 2
    c2 = (2.0 * np.asarray(nbar, dtype=float) * np.asarray(corr, dtype=float)) ** 2
    denom = a2 - c2
    if np.any(denom <= 0):
        raise DomainError("g is undefined: (1+2n)^2 <= (2nh)^2")
    out = a2 / denom
    return float(out) if np.ndim(out) == 0 else out


def _log_g(nbar: float, corr):
    a = 1.0 + 2.0 * nbar
    h = np.asarray(corr, dtype=float)
    ratio = (2.0 * nbar * h / a) ** 2
    if np.any(ratio >= 1):
        raise DomainError("g is undefined: (1+2n)^2 <= (2nh)^2")
    return -np.log1p(-ratio)


def normalized_mutual_information(nbar: float, corr):
    """``I(x) / I(0) = ln g(n, h) / ln g(n, 1)``."""
    if nbar <= 0:
        raise DomainError("normalised mutual information is 0/0 at nbar = 0")
    out = _log_g(nbar, corr) / _log_g(nbar, 1.0)
    return float(out) if np.ndim(out) == 0 else out


# exact truncated power series in n, coefficient lists of Fractions


def _mul(p: Sequence[Fraction], q: Sequence[Fraction], n: int) -> list:
    out = [Fraction(0)] * (n + 1)
    for i, pi in enumerate(p[: n + 1]):
        if pi:
            for j, qj in enumerate(q[: n + 1 - i]):
                out[i + j] += pi * qj
    return out


def _div(p: Sequence[Fraction], q: Sequence[Fraction], n: int) -> list:
    p = list(p) + [Fraction(0)] * (n + 1 - len(p))
    q = list(q) + [Fraction(0)] * (n + 1 - len(q))
    out = []
    for k in range(n + 1):
        acc = p[k] - sum(out[j] * q[k - j] for j in range(k))
        out.append(acc / q[0])
    return out


def _log(s: Sequence[Fraction], n: int) -> list:
    """Series log of ``s`` with ``s[0] == 1``."""
    deriv = [k * s[k] for k in range(1, n + 1)]
    ratio = _div(deriv, s, n - 1)
    return [Fraction(0)] + [ratio[k - 1] / k for k in range(1, n + 1)]


def _exp(s: Sequence[Fraction], n: int) -> list:
    """Series exp of ``s`` with ``s[0] == 0``."""
    out = [Fraction(1)]
    for k in range(1, n + 1):
        out.append(sum(j * s[j] * out[k - j] for j in range(1, k + 1)) / k)
    return out


def g_series(corr, orders: int) -> list:
    """Exact Taylor coefficients of ``g(n, h)`` in ``n`` up to ``n**orders``."""
    h2 = Fraction(corr) ** 2
    num = [Fraction(1), Fraction(4), Fraction(4)]
    den = [Fraction(1), Fraction(4), 4 - 4 * h2]
    return _div(num, den, orders)


def g_power_series(corr, orders: int) -> list:
    """Exact Taylor coefficients of ``g(n, 1) ** (h^2)`` up to ``n**orders``."""
    h2 = Fraction(corr) ** 2
    log_g1 = _log(g_series(1, orders), orders)
    return _exp([h2 * c for c in log_g1], orders)


def _agree(x: Fraction, y: Fraction) -> bool:
    if x == y:
        return True
    scale = max(abs(x), abs(y))
    return abs(x - y) <= COEFF_RTOL * scale


def taylor_match_order(
    corr: float, orders: int = 8, nbars: Iterable[float] = RESIDUAL_NBARS
) -> SeriesMatchReport:
    """Compare the Taylor series of ``g(n, h)`` and ``g(n, 1) ** (h^2)``.

    ``order_matched`` is the largest ``k <= orders`` such that all
    coefficients of order ``0..k`` agree within a relative 1e-8.
    ``max_residual_ratio`` is ``sup |g - g(n,1)^(h^2)| / n^4`` over ``nbars``,
    evaluated at 50 significant digits.
    """
    if orders < 4:
        raise ValueError("orders must be >= 4 to resolve the order-4 mismatch")
    if not abs(corr) <= 1:
        raise DomainError(f"|corr| must be <= 1, got {corr!r}")
    lhs = g_series(corr, orders)
    rhs = g_power_series(corr, orders)
    matched = -1
    for k in range(orders + 1):
        if not _agree(lhs[k], rhs[k]):
            break
        matched = k
    table = [(k, float(lhs[k]), float(rhs[k])) for k in range(orders + 1)]

    ratio = 0.0
    with mpmath.workdps(50):
        h = mpmath.mpf(corr)
        for nb in nbars:
            n = mpmath.mpf(nb)
            a2 = (1 + 2 * n) ** 2
            g = a2 / (a2 - (2 * n * h) ** 2)
            g1 = a2 / (a2 - (2 * n) ** 2)
            ratio = max(ratio, float(abs(g - g1 ** (h * h)) / n**4))
    return SeriesMatchReport(max(matched, 0), table, ratio)


def weaklight_deviation(p: HbtParams, grid) -> float:
    """``max |I(x)/I(0) - h(x)^2|`` over a grid of offsets or :class:`ScanPoint`."""
    xs = np.array([s.x if isinstance(s, ScanPoint) else s for s in grid], dtype=float)
    if p.nbar <= 0:
        raise DomainError("weak-light deviation needs nbar > 0")
    h = amplitude_correlation(p, xs)
    return float(np.max(np.abs(normalized_mutual_information(p.nbar, h) - h * h)))
