import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from infobounds import concentration as conc
from infobounds.errors import ConfigurationError, DomainError


class TestTailBound:
    def test_zero_epsilon_is_trivial(self):
        tb = conc.subgaussian_tail_bound(conc.SubgaussianSpec(1.0), 0.0)
        assert tb.value == 1.0

    def test_chernoff_unit(self):
        tb = conc.subgaussian_tail_bound(conc.SubgaussianSpec(1.0), 1.0)
        assert tb.value == pytest.approx(0.60653, abs=1e-5)

    def test_two_sided_sample_mean(self):
        tb = conc.subgaussian_tail_bound(conc.SubgaussianSpec(4.0), 1.0, "two_sided", n=100)
        assert tb.value == pytest.approx(2 * math.exp(-100 / 8), rel=1e-12)
        assert tb.value == pytest.approx(7.45e-6, rel=1e-3)

    def test_sharp_gaussian_undefined_at_zero(self):
        with pytest.raises(ZeroDivisionError):
            conc.subgaussian_tail_bound(conc.SubgaussianSpec(1.0), 0.0, "sharp_gaussian")

    def test_nonpositive_proxy_rejected(self):
        with pytest.raises(DomainError):
            conc.SubgaussianSpec(0.0)

    @given(st.floats(0.01, 10), st.floats(0.0, 10), st.integers(1, 1000))
    def test_value_is_clamped_probability(self, s2, eps, n):
        tb = conc.subgaussian_tail_bound(conc.SubgaussianSpec(s2), eps, "two_sided", n)
        assert 0.0 <= tb.value <= 1.0

    @given(st.floats(0.1, 5), st.floats(0.1, 6))
    def test_chernoff_dominates_gaussian_tail(self, s2, eps):
        tb = conc.subgaussian_tail_bound(conc.SubgaussianSpec(s2), eps)
        assert stats.norm.sf(eps / math.sqrt(s2)) <= tb.value + 1e-15


class TestSandwich:
    def test_unit_threshold(self):
        lo, hi = conc.gaussian_tail_sandwich(1.0, 1.0)
        assert lo == pytest.approx(0.12099, abs=1e-5)
        assert hi == pytest.approx(0.24197, abs=1e-5)
        assert lo <= conc.gaussian_tail_quadrature(1.0, 1.0) <= hi

    def test_three_sigma(self):
        lo, hi = conc.gaussian_tail_sandwich(1.0, 3.0)
        assert hi == pytest.approx(0.00148, abs=1e-5)
        assert lo <= conc.gaussian_tail_quadrature(1.0, 3.0) <= hi

    def test_ratio_tends_to_one(self):
        lo, hi = conc.gaussian_tail_sandwich(1.0, 30.0)
        assert lo / hi == pytest.approx(1 / (1 + 30.0**-2), rel=1e-12)
        assert lo / hi > 0.998

    def test_rejects_nonpositive_threshold(self):
        with pytest.raises(DomainError):
            conc.gaussian_tail_sandwich(1.0, 0.0)

    @given(st.floats(0.1, 10), st.floats(0.05, 8))
    def test_quadrature_inside(self, s2, x):
        a = x * math.sqrt(s2)
        lo, hi = conc.gaussian_tail_sandwich(s2, a)
        q = conc.gaussian_tail_quadrature(s2, a)
        assert lo - 1e-12 <= q <= hi + 1e-12


class TestProxies:
    def test_hoeffding_proxy(self):
        assert conc.hoeffding_proxy(0, 1).variance_proxy == 0.25
        assert conc.hoeffding_proxy(-1, 1).variance_proxy == 1.0
        assert isinstance(conc.hoeffding_proxy(2, 2), conc.DegenerateConstant)
        with pytest.raises(DomainError):
            conc.hoeffding_proxy(1, 0)

    def test_algebra(self):
        one = conc.SubgaussianSpec(1.0)
        assert conc.proxy_algebra([one], [3], True).variance_proxy == pytest.approx(9)
        assert conc.proxy_algebra([one, one], [1, 1], True).variance_proxy == pytest.approx(2)
        assert conc.proxy_algebra([one, one], [1, 1], False).variance_proxy == pytest.approx(4)
        with pytest.raises(DomainError):
            conc.proxy_algebra([], [], True)

    @given(st.lists(st.floats(0.1, 5), min_size=1, max_size=6), st.data())
    def test_dependent_never_smaller(self, proxies, data):
        w = data.draw(st.lists(st.floats(-3, 3), min_size=len(proxies), max_size=len(proxies)))
        if all(abs(x) < 1e-3 for x in w):
            return
        specs = [conc.SubgaussianSpec(p) for p in proxies]
        ind = conc.proxy_algebra(specs, w, True).variance_proxy
        dep = conc.proxy_algebra(specs, w, False).variance_proxy
        assert ind <= dep * (1 + 1e-12)


class TestMgfAndMaximal:
    def test_square_mgf(self):
        assert conc.square_mgf_bound(1, 0) == 1.0
        assert conc.square_mgf_bound(1, 0.25) == pytest.approx(1.41421, abs=1e-5)
        with pytest.raises(DomainError):
            conc.square_mgf_bound(1, 0.5)

    def test_square_mgf_matches_quadrature(self):
        from scipy.integrate import quad
        val, _ = quad(lambda z: math.exp(-0.25 * z * z) / math.sqrt(2 * math.pi), -np.inf, np.inf)
        assert val == pytest.approx(conc.square_mgf_bound(1, 0.25), rel=1e-8)

    def test_maximal(self):
        assert conc.maximal_bounds(1, 2) == pytest.approx(1.17741, abs=1e-5)
        assert conc.maximal_bounds(1, 2, kind="expectation_abs") == pytest.approx(1.66511, abs=1e-5)
        assert conc.maximal_bounds(1, 10, 0.0, "tail") == 1.0
        with pytest.raises(DomainError):
            conc.maximal_bounds(1, 1)


class TestHoeffding:
    def test_unit_ranges(self):
        assert conc.hoeffding_inequality([(0, 1)] * 100, 0.2) == pytest.approx(2 * math.exp(-8), rel=1e-12)
        assert conc.hoeffding_inequality([(0, 1)] * 100, 0.2) == pytest.approx(6.71e-4, rel=1e-3)

    def test_tiny_epsilon_clamps(self):
        assert conc.hoeffding_inequality([(0, 1), (-2, 3)], 1e-9) == 1.0

    def test_degenerate_rejected(self):
        with pytest.raises(DomainError):
            conc.hoeffding_inequality([(1, 1), (2, 2)], 0.1)


class TestEmpirical:
    def test_ten_sigma_never_hit(self):
        r = conc.empirical_tail_check(conc.gaussian_source(), 10.0, 10**6, seed=3)
        assert r.frequency == 0.0

    def test_one_sigma_frequency(self):
        r = conc.empirical_tail_check(conc.gaussian_source(), 1.0, 10**6, seed=3)
        assert abs(r.frequency - stats.norm.sf(1.0)) <= r.hoeffding_halfwidth

    def test_rademacher_mean_against_binomial(self):
        r = conc.empirical_tail_check(conc.rademacher_source(), 0.2, 10**5, seed=5, sample_size=25)
        # mean >= 0.2 iff at least 15 of 25 signs are +1
        exact = stats.binom.sf(14, 25, 0.5)
        assert abs(r.frequency - exact) <= r.hoeffding_halfwidth
        assert r.frequency <= math.exp(-25 * 0.04 / 2) + r.hoeffding_halfwidth

    def test_too_few_trials(self):
        with pytest.raises(ConfigurationError):
            conc.empirical_tail_check(conc.gaussian_source(), 1.0, 999, seed=0)

    def test_seed_determinism(self):
        a = conc.empirical_tail_check(conc.uniform_source(), 0.3, 5000, seed=11)
        b = conc.empirical_tail_check(conc.uniform_source(), 0.3, 5000, seed=11)
        assert a == b


@settings(max_examples=50)
@given(st.floats(0.01, 20), st.integers(1, 50))
def test_chernoff_monotone_in_n(eps, n):
    spec = conc.SubgaussianSpec(1.0)
    assert conc.subgaussian_tail_bound(spec, eps, n=n + 1).raw <= conc.subgaussian_tail_bound(spec, eps, n=n).raw
