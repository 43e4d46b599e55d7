import math

import mpmath as mp
import numpy as np
import pytest

from oracles import d1, d2, derangements, relative_residual
from twobid.errors import DomainError
from twobid.impact import (
    DOUBLE,
    OSCILLATORY,
    REAL_DISTINCT,
    ImpactParams,
    char_roots,
    logistic_solution,
    modified_profit_path,
    price_path,
    profit_path,
    profit_path_asymptote,
    profit_path_pair,
    tree_growth,
    two_event_price,
)

mp.mp.dps = 40


class TestCharRoots:
    def test_zero_a(self):
        r = char_roots(0.0, 0.2, 0.6)
        assert r.kind == REAL_DISTINCT
        assert r.d == pytest.approx(0.2)
        assert r.D == pytest.approx(0.04)
        assert sorted([r.r1, r.r2]) == pytest.approx([0.0, 0.4])

    def test_double_root(self):
        d = (0.8 - 0.2) / 2
        r = char_roots(d * d, 0.2, 0.8)
        assert r.kind == DOUBLE
        assert r.r1 == r.r2 == pytest.approx(d)

    def test_oscillatory(self):
        r = char_roots(1.0, 0.0, 1.0)
        assert r.kind == OSCILLATORY
        assert r.d == pytest.approx(0.5)
        assert r.D == pytest.approx(-0.75)
        assert r.freq == pytest.approx(math.sqrt(0.75))

    def test_sum_product_invariant(self):
        for a, b, c in [(0.01, 0.1, 0.9), (0.002, 0.3, 0.7), (0.0196, 0.0, 0.4)]:
            r = char_roots(a, b, c)
            if r.kind == REAL_DISTINCT:
                assert r.r1 + r.r2 == pytest.approx(c - b, abs=1e-12)
                assert r.r1 * r.r2 == pytest.approx(a, abs=1e-12)


class TestPricePath:
    def test_t_one(self):
        roots = char_roots(0.0, 0.2, 0.6)
        assert price_path(roots, 1.0, 0.0, 1.0) == 1.0
        osc = char_roots(1.0, 0.0, 1.0)
        assert price_path(osc, 0.7, 0.4, 1.0) == pytest.approx(0.4)

    def test_domain(self):
        with pytest.raises(DomainError):
            price_path(char_roots(0.0, 0.2, 0.6), 1.0, 1.0, 0.0)

    @pytest.mark.parametrize(
        "a,b,c", [(0.02, 0.1, 0.7), (0.09, 0.0, 0.4), (0.09, 0.0, 0.6), (0.25, 0.1, 0.9)]
    )
    def test_ode_residual(self, a, b, c):
        # the price path solves t^2 p'' + (1+b-c) t p' + a p = 0, the scalar
        # reduction of the coupled upgrade/price system
        roots = char_roots(a, b, c)
        f = lambda t: price_path(roots, 0.8, 0.5, t)
        for t in np.linspace(0.5, 50.0, 41):
            h = 1e-2 * max(t, 0.5)
            res = relative_residual(
                [t * t * d2(f, t, h), (1 + b - c) * t * d1(f, t, h), a * f(t)]
            )
            assert res < 1e-6

    def test_degenerate_basis_residual(self):
        d = 0.3
        roots = char_roots(d * d, 0.1, 0.7)
        assert roots.kind == DOUBLE
        f = lambda t: price_path(roots, 0.6, 0.9, t)
        for t in np.linspace(0.5, 50.0, 21):
            h = 1e-2 * max(t, 0.5)
            res = relative_residual(
                [t * t * d2(f, t, h), (1 + 0.1 - 0.7) * t * d1(f, t, h), d * d * f(t)]
            )
            assert res < 1e-6


class TestLogisticSolution:
    def test_initial_values(self):
        c, b, beta, B, sigma = 0.9, 0.3, 0.2, 1.5, 2.0
        r = c - b
        u0, p0 = logistic_solution(c, b, beta, B, sigma, 0.0)
        assert u0 == pytest.approx(beta / r)
        assert p0 == pytest.approx(sigma * c * beta / r)

    def test_saturation(self):
        c, b, sigma = 0.8, 0.3, 1.7
        _, p0 = logistic_solution(c, b, 0.0, 2.0, sigma, 0.0)
        assert p0 == 0.0
        _, p_inf = logistic_solution(c, b, 0.0, 2.0, sigma, 1e9)
        assert p_inf == pytest.approx(sigma * b, rel=1e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            logistic_solution(0.5, 0.5, 0.0, 1.0, 1.0, 1.0)  # r = 0
        with pytest.raises(DomainError):
            logistic_solution(0.9, 0.3, 0.7, 1.0, 1.0, 1.0)  # beta >= r

    def test_ode_residual(self):
        # with a=0 the system reduces to u' = (1-u)(r u - beta)/t
        c, b, beta, B, sigma = 0.9, 0.35, 0.2, 1.3, 1.0
        r = c - b
        fu = lambda t: logistic_solution(c, b, beta, B, sigma, t)[0]
        for t in np.linspace(0.1, 100.0, 57):
            h = 1e-3 * max(t, 0.2)
            u = fu(t)
            res = relative_residual([d1(fu, t, h), -(1 - u) * (r * u - beta) / t])
            assert res < 1e-6

    def test_price_equation_consistency(self):
        # p = sigma (b u + beta) makes the price equation exact by construction
        c, b, beta, B, sigma = 0.7, 0.2, 0.1, 0.8, 2.5
        for t in (0.5, 3.0, 40.0):
            u, p = logistic_solution(c, b, beta, B, sigma, t)
            assert p == pytest.approx(sigma * (b * u + beta), rel=1e-14)


class TestProfitPath:
    def test_ode_residual(self):
        # t^2 p'' - c t p' + e t^2 p = 0 on [1, 60]
        c, e = 0.7, 0.01
        f = lambda t: profit_path(c, e, 0.9, 0.4, t)
        for t in np.linspace(1.0, 60.0, 60):
            h = 0.008 * t ** (2 / 3)
            res = relative_residual(
                [t * t * d2(f, t, h), -c * t * d1(f, t, h), e * t * t * f(t)]
            )
            assert res < 1e-8

    def test_leading_power_at_zero(self):
        c, e = 0.5, 1.0
        values = [profit_path(c, e, 1.0, 0.0, t) for t in (1e-3, 1e-4, 1e-5)]
        assert all(abs(v) < 1e-4 for v in values)
        assert abs(values[2]) < abs(values[1]) < abs(values[0])

    def test_peak_spacing(self):
        # t-period approaches 2 pi / sqrt(e) once sqrt(e) t > 40
        c, e = 0.6, 1.0
        ts = np.arange(45.0, 95.0, 1e-3)
        vals = np.array([profit_path_pair(c, e, t)[0] for t in ts])
        peaks = [
            ts[i]
            for i in range(1, len(ts) - 1)
            if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]
        ]
        gaps = np.diff(peaks)
        expect = 2 * math.pi / math.sqrt(e)
        assert np.all(np.abs(gaps - expect) / expect < 0.02)

    def test_asymptote_phase_and_amplitude(self):
        # the exposed closed form tracks the exact path for large arguments
        c, e = 0.4, 1.0
        for t in np.linspace(60.0, 120.0, 25):
            exact = profit_path_pair(c, e, t)[0]
            approx, phase = profit_path_asymptote(c, e, +1, t)
            assert approx == pytest.approx(exact, abs=3e-3 * t ** (c / 2))
        assert phase == pytest.approx((1 + c) / 2 * math.pi / 2 + math.pi / 4)

    def test_domain(self):
        with pytest.raises(DomainError):
            profit_path(0.5, 1.0, 1.0, 0.0, 0.0)
        with pytest.raises(DomainError):
            profit_path(0.5, -1.0, 1.0, 0.0, 1.0)


class TestModifiedProfitPath:
    def test_ode_residual(self):
        # t^2 p'' + (1-c) t p' + e t^nu p = 0
        c, e, nu = 0.55, 0.09, 0.6
        f = lambda t: modified_profit_path(c, e, nu, t)[0]
        for t in np.linspace(1.0, 60.0, 60):
            h = 0.008 * t ** (2 / 3)
            res = relative_residual(
                [t * t * d2(f, t, h), (1 - c) * t * d1(f, t, h), e * t**nu * f(t)]
            )
            assert res < 1e-7

    def test_envelope_exponent(self):
        # peak amplitudes follow t^(c/2 - nu/4)
        c, e, nu = 0.8, 4.0, 1.0
        ts = np.arange(20.0, 200.0, 1e-3)
        vals = np.array([modified_profit_path(c, e, nu, t)[0] for t in ts])
        mags = np.abs(vals)
        peaks = [
            (ts[i], mags[i])
            for i in range(1, len(ts) - 1)
            if mags[i] >= mags[i - 1] and mags[i] >= mags[i + 1] and mags[i] > 0
        ]
        pt = np.log([p[0] for p in peaks])
        pv = np.log([p[1] for p in peaks])
        slope = np.polyfit(pt, pv, 1)[0]
        expect = c / 2 - nu / 4
        assert abs(slope - expect) / abs(expect) < 0.05

    def test_first_zero_matches_bessel_zero(self):
        # nu -> 1, c = 1 is the degenerate integer order; approach it and
        # check the first zero maps to the J_1 zero 3.8317 through the
        # argument transform
        c, e, nu = 0.9999, 1.0, 0.99995
        j1_zero = 3.831705970207512
        # argument x = 2 sqrt(e) t^(nu/2) / nu = j1_zero  =>  t*
        t_star = (j1_zero * nu / (2 * math.sqrt(e))) ** (2 / nu)
        f = lambda t: modified_profit_path(c, e, nu, t)[0]
        lo, hi = 0.5 * t_star, 1.5 * t_star
        assert f(lo) > 0 > f(hi)
        for _ in range(60):
            mid = (lo + hi) / 2
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
        assert (lo + hi) / 2 == pytest.approx(t_star, abs=1e-3)

    def test_degenerate_order_rejected(self):
        with pytest.raises(DomainError):
            modified_profit_path(1.0, 1.0, 0.5, 2.0)  # c/nu = 2


class TestTwoEventPrice:
    def test_at_zero(self):
        res = two_event_price(0.05, 0.3, 0.3, 2.0, 0.0)
        assert res.p == 1.0
        assert res.p1 is None and res.p2 is None

    def test_ode_residual(self):
        # t (t+tau) p'' + ((1-c) t + (1-c0) tau) p' + a p = 0 below tau
        a, c0, ct, tau = 0.05, 0.3, 0.3, 2.0
        c = c0 + ct
        f = lambda t: two_event_price(a, c0, ct, tau, t).p
        for t in np.linspace(0.05 * tau, 0.85 * tau, 33):
            h = 5e-4 * tau
            res = relative_residual(
                [
                    t * (t + tau) * d2(f, t, h),
                    ((1 - c) * t + (1 - c0) * tau) * d1(f, t, h),
                    a * f(t),
                ]
            )
            assert res < 1e-6

    def test_large_t_exponents(self):
        # p1, p2 grow as t^{r1}, t^{r2} with the b=0 characteristic roots
        a, c0, ct, tau = 0.05, 0.3, 0.3, 1.0
        roots = char_roots(a, 0.0, c0 + ct)
        ts = np.linspace(20 * tau, 200 * tau, 40)
        for pick, expect in ((1, roots.r1), (2, roots.r2)):
            vals = [getattr(two_event_price(a, c0, ct, tau, t), f"p{pick}") for t in ts]
            slope = np.polyfit(np.log(ts), np.log(np.abs(vals)), 1)[0]
            assert abs(slope - expect) < 0.02

    def test_hypergeometric_against_oracle(self):
        a, c0, ct, tau = 0.04, 0.25, 0.35, 1.5
        c = c0 + ct
        root = math.sqrt(c * c / 4 - a)
        alpha, beta = -c / 2 + root, -c / 2 - root
        for t in (0.2, 0.9):
            expect = float(mp.hyp2f1(alpha, beta, 1 - c0, -t / tau))
            assert two_event_price(a, c0, ct, tau, t).p == pytest.approx(expect, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            two_event_price(0.05, 0.3, 0.3, 2.0, 2.0)  # t == tau: nothing converges


class TestTreeGrowth:
    def test_linear_solution(self):
        seq = tree_growth(1.0, 0.0, 1.0, 2.0, 20)
        assert seq == pytest.approx(list(range(3, 21)), abs=1e-12)

    def test_derangement_solution(self):
        # seeds D_1/0! = 0 and D_2/1! = 1 give f_n = D_n/(n-1)!
        seq = [0.0, 1.0] + tree_growth(1.0, 0.0, 0.0, 1.0, 12)
        for n in range(1, 13):
            expect = derangements(n) / math.factorial(n - 1)
            assert seq[n - 1] == pytest.approx(expect, abs=1e-12)
        assert seq[3] == pytest.approx(9 / 6)

    def test_limit_over_e(self):
        seq = [0.0, 1.0] + tree_growth(1.0, 0.0, 0.0, 1.0, 20)
        assert abs(seq[19] / 20 - 1 / math.e) / (1 / math.e) < 0.015

    def test_emigration_damps(self):
        damped = tree_growth(1.0, 0.1, 1.0, 2.0, 15)
        free = tree_growth(1.0, 0.0, 1.0, 2.0, 15)
        assert all(d < f for d, f in zip(damped, free))

    def test_domain(self):
        with pytest.raises(DomainError):
            tree_growth(1.0, 0.0, 1.0, 2.0, 2)


class TestImpactParams:
    def test_validation(self):
        ImpactParams(a=0.1, b=0.2, c=0.9)
        with pytest.raises(DomainError):
            ImpactParams(sigma=0.0)
        with pytest.raises(DomainError):
            ImpactParams(nu=1.5)
        with pytest.raises(DomainError):
            ImpactParams(tau=0.0)
