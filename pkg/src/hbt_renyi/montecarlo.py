"""Monte Carlo thermal-field sampler for the intensity-correlation law.

A spatially incoherent disk source (unit radius) is discretised into
weighted points on Gauss-Legendre rings. Each trial draws independent
circular complex Gaussian amplitudes, propagates them to the far field with
the Fraunhofer kernel ``exp(-i kappa x . x1)``, and splits the field on a
50:50 beamsplitter. The ensemble field correlation then converges to
``jinc(kappa |x|)`` and the normalised intensity correlation to its square.

The sampling is semiclassical: vacuum-port fluctuations and shot noise are
not simulated. Randomness comes from Philox keyed by the run seed with the
counter set to ``(draw index, trial)``, so every trial is reproducible on
its own and results do not depend on how trials are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DomainError, InsufficientTrials

MIN_SOURCE_POINTS = 16
MIN_TRIALS = 1000
BATCHES = 20
_CHUNK = 2048


@dataclass(frozen=True)
class McConfig:
    source_points: int = 512
    trials: int = 200_000
    nbar: float = 1.0
    kappa: float = 1000.0
    seed: int = 42
    detector_grid: tuple = (0.0,)

    def __post_init__(self):
        if self.source_points < MIN_SOURCE_POINTS:
            raise ValueError(f"source_points must be >= {MIN_SOURCE_POINTS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (self.nbar >= 0 and math.isfinite(self.nbar)):
            raise ValueError("nbar must be finite and >= 0")
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise ValueError("kappa must be finite and > 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        grid = tuple(float(x) for x in self.detector_grid)
        if not grid or not all(math.isfinite(x) for x in grid):
            raise ValueError("detector grid must be non-empty and finite")
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError("detector grid must be sorted")
        object.__setattr__(self, "detector_grid", grid)


@dataclass(frozen=True)
class G2Estimate:
    x: float
    g2_minus_1: float
    std_error: float


@dataclass(frozen=True)
class FieldCorrelationEstimate:
    x: float
    value: float
    std_error: float


@lru_cache(maxsize=16)
def source_geometry(source_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Points on the unit disk and their area weights (summing to one).

    Rings sit at Gauss-Legendre nodes in ``r^2`` (uniform area measure); the
    points are split as evenly as possible between rings, extra points going
    to the outer rings, and are equally spaced in angle on each ring.
    """
    n_rings = max(1, round(math.sqrt(source_points / 2)))
    nodes, gl_weights = np.polynomial.legendre.leggauss(n_rings)
    radii = np.sqrt((nodes + 1.0) / 2.0)
    ring_weights = gl_weights / 2.0
    counts = [source_points // n_rings] * n_rings
    for i in range(source_points % n_rings):
        counts[n_rings - 1 - i] += 1
    xy, w = [], []
    for r, rw, n in zip(radii, ring_weights, counts):
        theta = 2.0 * math.pi * np.arange(n) / n
        xy.append(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))
        w.append(np.full(n, rw / n))
    positions = np.concatenate(xy)
    weights = np.concatenate(w)
    positions.setflags(write=False)
    weights.setflags(write=False)
    return positions, weights


def _phase_matrix(cfg: McConfig, xs) -> np.ndarray:
    # detectors lie on the first transverse axis
    positions, _ = source_geometry(cfg.source_points)
    return np.exp(-1j * cfg.kappa * np.outer(positions[:, 0], np.asarray(xs, dtype=float)))


def discrete_kernel(cfg: McConfig, x) -> np.ndarray:
    """Exact ensemble ``<E*(x) E(0)> / nbar`` for the discretised source."""
    _, weights = source_geometry(cfg.source_points)
    return np.real(weights @ np.conj(_phase_matrix(cfg, np.atleast_1d(x))))


def _unit_gaussians(seed: int, trial: int, count: int) -> np.ndarray:
    """``count`` unit-variance circular complex Gaussians for one trial."""
    bitgen = np.random.Philox(counter=[0, trial, 0, 0], key=seed)
    raw = bitgen.random_raw(2 * count).reshape(count, 2)
    u = (raw >> np.uint64(11)).astype(float) * 2.0**-53
    radius = np.sqrt(-np.log1p(-u[:, 0]))
    return radius * np.exp(2j * math.pi * u[:, 1])


def sample_source_field(cfg: McConfig, trial: int) -> np.ndarray:
    """Source amplitudes for one trial; deterministic in ``(seed, trial)``.

    Point ``j`` has variance ``nbar * w_j`` so the far-field mean intensity
    is ``nbar``.
    """
    _, weights = source_geometry(cfg.source_points)
    if cfg.nbar == 0:
        return np.zeros(cfg.source_points, dtype=complex)
    scale = np.sqrt(cfg.nbar * weights)
    return scale * _unit_gaussians(cfg.seed, trial, cfg.source_points)


def propagate_far_field(field: np.ndarray, x, cfg: McConfig):
    """Far-field amplitude ``sum_j exp(-i kappa x X_j) a_j`` at offset(s) ``x``."""
    out = np.asarray(field) @ _phase_matrix(cfg, np.atleast_1d(x))
    return complex(out[0]) if np.ndim(x) == 0 else out


def _batch_sums(cfg: McConfig, start: int, stop: int, phases: np.ndarray) -> np.ndarray:
    """Per-batch sums of ``I1(0)``, ``I2(x)``, ``I1(0) I2(x)`` and ``E*(x) E(0)``."""
    n_grid = phases.shape[1] - 1
    sums = np.zeros((4, n_grid), dtype=complex)
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        fields = np.stack([sample_source_field(cfg, t) for t in range(lo, hi)])
        far = fields @ phases
        e0, ex = far[:, :1], far[:, 1:]
        i1 = 0.5 * np.abs(e0) ** 2
        i2 = 0.5 * np.abs(ex) ** 2
        sums[0] += i1.sum(axis=0)
        sums[1] += i2.sum(axis=0)
        sums[2] += (i1 * i2).sum(axis=0)
        sums[3] += (np.conj(ex) * e0).sum(axis=0)
    return sums


def _run_batches(cfg: McConfig, workers: int) -> tuple[np.ndarray, np.ndarray]:
    if cfg.trials < MIN_TRIALS:
        raise InsufficientTrials(
            f"need at least {MIN_TRIALS} trials for batch-mean errors, got {cfg.trials}"
        )
    if cfg.nbar <= 0:
        raise DomainError("normalised estimators need nbar > 0")
    phases = _phase_matrix(cfg, (0.0,) + cfg.detector_grid)
    edges = [cfg.trials * b // BATCHES for b in range(BATCHES + 1)]
    jobs = list(zip(edges[:-1], edges[1:]))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda se: _batch_sums(cfg, *se, phases), jobs))
    else:
        results = [_batch_sums(cfg, lo, hi, phases) for lo, hi in jobs]
    counts = np.diff(edges).astype(float)
    return np.stack(results), counts


def _g2_from_sums(sums: np.ndarray, n) -> np.ndarray:
    m1, m2, m12 = (sums[..., k, :].real / n for k in range(3))
    return m12 / (m1 * m2) - 1.0


def estimate_g2(cfg: McConfig, workers: int = 1) -> list[G2Estimate]:
    """Normalised intensity cross-correlation ``g2 - 1`` along the detector grid.

    Errors are 1-sigma batch-means errors over ``BATCHES`` contiguous trial
    blocks. Output is identical for any ``workers``.
    """
    batch, counts = _run_batches(cfg, workers)
    total = batch.sum(axis=0)
    estimate = _g2_from_sums(total, cfg.trials)
    per_batch = _g2_from_sums(batch, counts[:, None])
    err = per_batch.std(axis=0, ddof=1) / math.sqrt(BATCHES)
    return [
        G2Estimate(x, float(g), float(e))
        for x, g, e in zip(cfg.detector_grid, estimate, err)
    ]


def estimate_field_correlation(
    cfg: McConfig, workers: int = 1
) -> list[FieldCorrelationEstimate]:
    """Ensemble ``Re <E*(x) E(0)> / nbar`` with batch-means errors."""
    batch, counts = _run_batches(cfg, workers)
    total = batch.sum(axis=0)
    estimate = total[3].real / (cfg.trials * cfg.nbar)
    per_batch = batch[:, 3, :].real / (counts[:, None] * cfg.nbar)
    err = per_batch.std(axis=0, ddof=1) / math.sqrt(BATCHES)
    return [
        FieldCorrelationEstimate(x, float(v), float(e))
        for x, v, e in zip(cfg.detector_grid, estimate, err)
    ]
