"""HBT set-up: thermal disk source, 50:50 beamsplitter, far-field detectors.

The fixed detector sits at the origin and the scanning detector at
transverse offset ``x``. The far-field scale ``kappa = kA/z`` is treated as a
single parameter. With mean photon number ``nbar`` per mode the two output
arms are in the standard-form state

    a = b = 1 + 2 nbar,   c = d = 2 nbar h(x),   h(x) = jinc(kappa |x|)

and the normalised intensity correlation is ``g2 - 1 = h(x)^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gaussian import StandardForm
from .special import KERNELS, first_zero, jinc, sinc


@dataclass(frozen=True)
class HbtParams:
    nbar: float
    kappa: float = 1000.0
    kernel: str = "jinc"

    def __post_init__(self):
        if not (self.nbar >= 0 and np.isfinite(self.nbar)):
            raise ValueError(f"nbar must be finite and >= 0, got {self.nbar!r}")
        if not (self.kappa > 0 and np.isfinite(self.kappa)):
            raise ValueError(f"kappa must be finite and > 0, got {self.kappa!r}")
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}; choose from {sorted(KERNELS)}")

    @property
    def kernel_fn(self) -> Callable:
        return KERNELS[self.kernel]


@dataclass(frozen=True)
class ScanPoint:
    """Transverse offset of the scanning detector from the fixed one."""

    x: float

    def __post_init__(self):
        if not np.isfinite(self.x):
            raise ValueError("scan point must be finite")


def _offset(s) -> float:
    return s.x if isinstance(s, ScanPoint) else s


def amplitude_correlation(p: HbtParams, s):
    """Normalised field cross-correlation ``h(x) = kernel(kappa |x|)``.

    ``s`` may be a :class:`ScanPoint`, a float or an array of offsets.
    """
    x = _offset(s)
    return p.kernel_fn(p.kappa * np.abs(x))


def covariance_at(p: HbtParams, s) -> StandardForm:
    h = float(amplitude_correlation(p, s))
    c = 2.0 * p.nbar * h
    a = 1.0 + 2.0 * p.nbar
    return StandardForm(a, a, c, c)


def intensity_correlation_minus_one(p: HbtParams, s):
    """``<I1 I2> / (<I1><I2>) - 1 = h(x)^2``, independent of ``nbar``."""
    h = amplitude_correlation(p, s)
    return h * h


def first_kernel_zero(p: HbtParams) -> float:
    """Smallest positive offset where ``h`` vanishes (inf for the Gaussian kernel)."""
    if p.kernel == "jinc":
        return first_zero(jinc, 3.0, 4.5) / p.kappa
    if p.kernel == "sinc":
        return first_zero(sinc, 3.0, 3.5) / p.kappa
    return float("inf")
