import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from hbt_renyi.correlations import correlation_triple
from hbt_renyi.exceptions import DomainError
from hbt_renyi.optics import HbtParams, ScanPoint, amplitude_correlation, covariance_at
from hbt_renyi.weaklight import (
    g_function,
    g_power_series,
    g_series,
    normalized_mutual_information,
    taylor_match_order,
    weaklight_deviation,
)

GRID = np.linspace(0.0, 0.01, 2001)


def sympy_coefficients(h_value, orders):
    """Symbolic oracle: Taylor coefficients of g and g(n,1)**(h^2)."""
    n = sp.symbols("n")
    h = sp.Rational(h_value)  # exact binary value of the float
    a2 = (1 + 2 * n) ** 2
    g = a2 / (a2 - (2 * n * h) ** 2)
    g1 = a2 / (a2 - (2 * n) ** 2)
    lhs = sp.series(g, n, 0, orders + 1).removeO()
    rhs = sp.series(sp.exp(h**2 * sp.log(g1)), n, 0, orders + 1).removeO()
    return [lhs.coeff(n, k) for k in range(orders + 1)], [rhs.coeff(n, k) for k in range(orders + 1)]


def expansion_oracle(nbar, h):
    """I(x)/I(0) = h^2 + 2 n^2 h^2 (h^2 - 1) + O(n^3)."""
    return h * h + 2 * nbar**2 * h * h * (h * h - 1)


class TestGFunction:
    def test_zero_nbar(self):
        assert g_function(0.0, 0.3) == 1.0

    def test_bright(self):
        assert g_function(10.0, 1.0) == pytest.approx(441 / 41, rel=1e-15)

    def test_dim(self):
        assert g_function(0.01, 0.5) == pytest.approx(1.0404 / 1.0403, rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            g_function(10.0, 1.2)


class TestNormalizedMutualInformation:
    def test_endpoints(self):
        assert normalized_mutual_information(0.3, 1.0) == 1.0
        assert normalized_mutual_information(0.3, 0.0) == 0.0

    def test_dim_half(self):
        got = normalized_mutual_information(0.01, 0.5)
        assert abs(got - 0.25) <= 2 * 0.01**2 * 0.25 * 0.75
        assert got == pytest.approx(expansion_oracle(0.01, 0.5), abs=1e-5)

    def test_matches_correlation_triple(self):
        p = HbtParams(0.3)
        for x in (0.0, 0.001, 0.002, 0.005):
            i0 = correlation_triple(covariance_at(p, 0.0)).mutual_info
            ix = correlation_triple(covariance_at(p, x)).mutual_info
            assert normalized_mutual_information(0.3, amplitude_correlation(p, x)) == pytest.approx(ix / i0, rel=1e-13)

    def test_zero_nbar(self):
        with pytest.raises(DomainError):
            normalized_mutual_information(0.0, 0.5)

    @settings(max_examples=300)
    @given(st.floats(1e-6, 0.1), st.floats(0.0, 1.0))
    def test_expansion_bound(self, nbar, h):
        dev = normalized_mutual_information(nbar, h) - h * h
        # 1e-15 absorbs rounding in the ratio of logarithms
        assert abs(dev) <= 2 * nbar**2 * h * h * (1 - h * h) + 10 * nbar**3 + 1e-15

    def test_expansion_oracle_converges(self):
        # residual of the second-order expansion shrinks like n^3
        for h in (0.3, 0.7):
            r = [abs(normalized_mutual_information(n, h) - expansion_oracle(n, h)) / n**3 for n in (1e-2, 1e-3)]
            assert r[1] < 1.2 * r[0]


class TestTaylorMatch:
    def test_identical_at_h_one(self):
        assert taylor_match_order(1.0, orders=8).order_matched == 8

    def test_trivial_at_h_zero(self):
        rep = taylor_match_order(0.0, orders=8)
        assert rep.order_matched == 8
        assert all(c == 0 for _, c, _ in rep.coefficient_table[1:])

    def test_half(self):
        rep = taylor_match_order(0.5, orders=6)
        assert rep.order_matched == 3
        table = {k: (cg, cgf) for k, cg, cgf in rep.coefficient_table}
        assert table[2] == (1.0, 1.0)
        assert table[3] == (-4.0, -4.0)
        assert table[4][0] != pytest.approx(table[4][1], rel=1e-8)

    @pytest.mark.parametrize("h", [0.1, 0.5, 0.9])
    def test_against_sympy(self, h):
        lhs, rhs = sympy_coefficients(h, 6)
        assert g_series(h, 6) == lhs
        assert g_power_series(h, 6) == rhs

    def test_grid_of_h(self):
        for h in np.linspace(0, 1, 101):
            rep = taylor_match_order(float(h), orders=5)
            lhs, rhs = g_series(float(h), 5), g_power_series(float(h), 5)
            assert lhs[:4] == rhs[:4]
            if 0 < h < 1:
                assert lhs[4] != rhs[4]
                assert rep.order_matched == 3
            else:
                assert rep.order_matched == 5

    def test_residual_ratio(self):
        h = 0.5
        rep = taylor_match_order(h)
        # leading residual coefficient: 8 h^2 (1 - h^2)
        assert rep.max_residual_ratio == pytest.approx(8 * h * h * (1 - h * h), rel=0.2)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            taylor_match_order(0.5, orders=3)
        with pytest.raises(DomainError):
            taylor_match_order(1.5)


class TestDeviation:
    def test_weak_light(self):
        assert weaklight_deviation(HbtParams(0.01, 1000.0), GRID) <= 1e-4

    def test_bright(self):
        dev = weaklight_deviation(HbtParams(10.0, 1000.0), GRID)
        assert dev > 1e-2
        assert 0.05 < dev < 0.5

    def test_scan_points_accepted(self):
        grid = [ScanPoint(float(x)) for x in GRID[::100]]
        assert weaklight_deviation(HbtParams(0.01), grid) == weaklight_deviation(HbtParams(0.01), GRID[::100])

    def test_scaling_with_nbar(self):
        ratios = [weaklight_deviation(HbtParams(n), GRID) / n**2 for n in (1e-2, 1e-3, 1e-4)]
        # 2 n^2 max h^2(1-h^2) = n^2 / 2 in the limit
        assert all(r < 0.6 for r in ratios)
        assert abs(ratios[2] - 0.5) < abs(ratios[1] - 0.5) < abs(ratios[0] - 0.5)
        assert abs(ratios[2] - 0.5) < 1e-3

    def test_grows_with_nbar(self):
        devs = [weaklight_deviation(HbtParams(float(n)), GRID) for n in np.logspace(-4, 1, 26)]
        assert np.all(np.diff(devs) > 0)

    @pytest.mark.parametrize("kernel", ["jinc", "gauss", "sinc"])
    def test_other_kernels(self, kernel):
        p = HbtParams(0.01, 1000.0, kernel)
        assert weaklight_deviation(p, GRID) <= 1e-4

    def test_zero_nbar(self):
        with pytest.raises(DomainError):
            weaklight_deviation(HbtParams(0.0), GRID)
