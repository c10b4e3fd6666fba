"""Renyi-2 correlations of two-mode Gaussian states applied to the
Hanbury Brown-Twiss effect with thermal light."""

__version__ = "0.1.0"

from .correlations import (
    CorrelationTriple,
    MeasurementSeed,
    classical_correlations_closed,
    conditional_entropy_after_measurement,
    correlation_triple,
    discord_closed,
    discord_oracle,
    mutual_information,
)
from .gaussian import (
    CovarianceMatrix2,
    StandardForm,
    marginal,
    renyi2_entropy,
    symplectic_eigenvalues,
)
from .optics import (
    HbtParams,
    ScanPoint,
    amplitude_correlation,
    covariance_at,
    intensity_correlation_minus_one,
)
from .special import bessel_j1, jinc
from .weaklight import (
    SeriesMatchReport,
    g_function,
    normalized_mutual_information,
    taylor_match_order,
    weaklight_deviation,
)
