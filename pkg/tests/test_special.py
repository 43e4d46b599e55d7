import math

import mpmath as mp
import pytest

from twobid.errors import DomainError
from twobid.special import _bessel_asymptotic, _bessel_series, bessel_crossover, bessel_j, hyp2f1

mp.mp.dps = 50


def mp_bessel(alpha, x):
    return float(mp.besselj(alpha, x))


class TestBesselJ:
    def test_at_zero(self):
        assert bessel_j(0.0, 0.0) == 1.0
        assert bessel_j(0.7, 0.0) == 0.0
        assert bessel_j(2.0, 0.0) == 0.0

    def test_half_order_closed_form(self):
        # J_{1/2}(x) = sqrt(2/(pi x)) sin x
        x = math.pi / 2
        assert bessel_j(0.5, x) == pytest.approx(2 / math.pi, abs=1e-12)
        for x in (0.3, 1.7, 9.2):
            expect = math.sqrt(2 / (math.pi * x)) * math.sin(x)
            assert bessel_j(0.5, x) == pytest.approx(expect, rel=1e-10)

    @pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 1.0, 1.7, 2.5, 3.0])
    @pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 20.0, 35.0, 80.0])
    def test_against_high_precision(self, alpha, x):
        assert bessel_j(alpha, x) == pytest.approx(mp_bessel(alpha, x), rel=2e-6, abs=1e-12)

    def test_negative_order(self):
        assert bessel_j(-0.5, 2.0) == pytest.approx(mp_bessel(-0.5, 2.0), rel=1e-9)

    def test_series_asymptotic_agree_at_crossover(self):
        for alpha in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]:
            xc = bessel_crossover(alpha)
            s = _bessel_series(alpha, xc)
            a = _bessel_asymptotic(alpha, xc)
            assert abs(s - a) / abs(s) < 0.01

    def test_series_vs_asymptotic_at_50(self):
        # high-precision series oracle at a point on the asymptotic branch
        oracle = float(mp.besselj(1.0, 50.0))
        assert abs(bessel_j(1.0, 50.0) - oracle) / abs(oracle) < 0.01

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_j(0.0, -1.0)
        with pytest.raises(DomainError):
            bessel_j(-2.0, 1.0)  # negative integer order hits a Gamma pole


class TestHyp2F1:
    def test_empty_sum(self):
        assert hyp2f1(0.3, 1.2, 0.9, 0.0) == 1.0

    def test_log_closed_form(self):
        # F(1,1;2;z) = -ln(1-z)/z
        z = -0.5
        assert hyp2f1(1, 1, 2, z) == pytest.approx(math.log(1.5) / 0.5, rel=1e-12)

    def test_partial_sum_stability_near_edge(self):
        a = hyp2f1(0.4, 0.9, 1.3, -0.9)
        oracle = float(mp.hyp2f1(0.4, 0.9, 1.3, -0.9))
        assert a == pytest.approx(oracle, rel=1e-12)

    @pytest.mark.parametrize(
        "params",
        [(0.3, -0.8, 0.7, 0.5), (-0.1, -0.5, 1.4, -0.7), (2.0, 0.5, 2.5, 0.3)],
    )
    def test_against_high_precision(self, params):
        a, b, c, z = params
        assert hyp2f1(a, b, c, z) == pytest.approx(float(mp.hyp2f1(a, b, c, z)), rel=1e-11)

    def test_domain(self):
        with pytest.raises(DomainError):
            hyp2f1(1, 1, 2, 1.0)
        with pytest.raises(DomainError):
            hyp2f1(1, 1, -2.0, 0.5)
