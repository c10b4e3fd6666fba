"""Detector scans and photon-number sweeps as flat records."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .correlations import correlation_triple
from .optics import HbtParams, covariance_at, intensity_correlation_minus_one

SCAN_IDENTITY_TOL = 1e-10
RANGE_TOL = 1e-12


@dataclass(frozen=True)
class ScanRecord:
    x: float
    I: float
    J: float
    D: float
    I_norm: float
    J_norm: float
    D_norm: float
    g2m1: float


@dataclass(frozen=True)
class SweepRecord:
    nbar: float
    I: float
    J: float
    D: float
    J_over_I: float
    D_over_I: float


def column_names(record_type) -> list[str]:
    return [f.name for f in fields(record_type)]


def as_row(record) -> dict:
    return asdict(record)


def scan_records(params: HbtParams, x_max: float = 0.01, points: int = 2001) -> list[ScanRecord]:
    """One record per grid point ``x in [0, x_max]``.

    Normalisation uses the analytic values at ``x = 0``, not the first row.
    """
    if points < 2:
        raise ValueError("points must be >= 2")
    if not x_max > 0:
        raise ValueError("x_max must be > 0")
    if params.nbar <= 0:
        raise ValueError("nbar must be > 0 to normalise the correlations")
    i0, j0, d0 = correlation_triple(covariance_at(params, 0.0)).as_tuple()
    out = []
    for x in np.linspace(0.0, x_max, points):
        x = float(x)
        i, j, d = correlation_triple(covariance_at(params, x)).as_tuple()
        out.append(
            ScanRecord(
                x, i, j, d, i / i0, j / j0, d / d0,
                float(intensity_correlation_minus_one(params, x)),
            )
        )
    return out


def nbar_grid(nbar_min: float, nbar_max: float, points_per_decade: int) -> np.ndarray:
    """Log-spaced grid including both endpoints."""
    if not 0 < nbar_min < nbar_max:
        raise ValueError("need 0 < nbar_min < nbar_max")
    if points_per_decade < 1:
        raise ValueError("points_per_decade must be >= 1")
    lo, hi = math.log10(nbar_min), math.log10(nbar_max)
    count = max(2, round((hi - lo) * points_per_decade) + 1)
    grid = np.logspace(lo, hi, count)
    grid[0], grid[-1] = nbar_min, nbar_max
    return grid


def sweep_records(
    x: float = 0.0,
    kappa: float = 1000.0,
    nbar_min: float = 1e-3,
    nbar_max: float = 1e2,
    points_per_decade: int = 10,
    kernel: str = "jinc",
) -> list[SweepRecord]:
    out = []
    for nbar in nbar_grid(nbar_min, nbar_max, points_per_decade):
        params = HbtParams(float(nbar), kappa, kernel)
        i, j, d = correlation_triple(covariance_at(params, x)).as_tuple()
        ratio_j = j / i if i > 0 else float("nan")
        ratio_d = d / i if i > 0 else float("nan")
        out.append(SweepRecord(float(nbar), i, j, d, ratio_j, ratio_d))
    return out


def check_scan_rows(rows) -> list[str]:
    """Return a list of invariant violations (empty when all rows are valid)."""
    problems = []
    for k, row in enumerate(rows):
        r = {name: float(row[name]) for name in column_names(ScanRecord)}
        if abs(r["I"] - r["J"] - r["D"]) > SCAN_IDENTITY_TOL:
            problems.append(f"row {k}: I != J + D")
        if not -RANGE_TOL <= r["I_norm"] <= 1 + RANGE_TOL:
            problems.append(f"row {k}: I_norm outside [0, 1]")
        if not -RANGE_TOL <= r["g2m1"] <= 1 + RANGE_TOL:
            problems.append(f"row {k}: g2m1 outside [0, 1]")
    return problems


def check_sweep_rows(rows) -> list[str]:
    problems = []
    for k, row in enumerate(rows):
        r = {name: float(row[name]) for name in column_names(SweepRecord)}
        if abs(r["I"] - r["J"] - r["D"]) > SCAN_IDENTITY_TOL:
            problems.append(f"row {k}: I != J + D")
        for name in ("J_over_I", "D_over_I"):
            if not -RANGE_TOL <= r[name] <= 1 + RANGE_TOL:
                problems.append(f"row {k}: {name} outside [0, 1]")
    return problems
