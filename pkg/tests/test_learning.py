import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from infobounds import learning as lrn
from infobounds.errors import CapabilityError, DomainError, SizeError


def _table_loss(table):
    """Finite-class loss that reads row w of a fixed (|W|, n) table."""
    table = np.asarray(table, dtype=float)
    return lambda data, w: table[w]


class TestRiskAndErm:
    def test_zero_loss(self):
        data = lrn.Dataset(np.zeros(5))
        assert lrn.empirical_risk(0, data, lambda d, w: np.zeros(d.n)) == 0.0

    def test_zero_one_three_of_ten(self):
        x = np.ones((10, 1))
        y = np.array([1.0] * 7 + [0.0] * 3)
        assert lrn.empirical_risk(np.array([1.0]), lrn.Dataset(x, y), lrn.zero_one_loss) == pytest.approx(0.3)

    def test_squared_loss(self):
        data = lrn.Dataset(np.zeros((2, 1)), np.array([1.0, 2.0]))
        assert lrn.empirical_risk(np.zeros(1), data, lrn.squared_loss) == pytest.approx(2.5)

    def test_empty(self):
        with pytest.raises(DomainError):
            lrn.empirical_risk(0, lrn.Dataset(np.zeros((0, 1))), lambda d, w: np.zeros(0))

    def test_finite_argmin_and_ties(self):
        data = lrn.Dataset(np.zeros((10, 1)))
        cls = lrn.ModelClass("finite", models=[0, 1])
        w, v = lrn.erm(cls, data, _table_loss([[0.4] * 10, [0.1] * 10]))
        assert w == 1 and v == pytest.approx(0.1)
        w, _ = lrn.erm(cls, data, _table_loss([[0.3] * 10, [0.3] * 10]))
        assert w == 0

    def test_separable_classifier(self):
        x = np.array([[1, 2], [2, 1], [1, 1], [-1, -2], [-2, -1], [-1, -1]], dtype=float)
        y = np.array([1, 1, 1, 0, 0, 0], dtype=float)
        w, v = lrn.erm(lrn.ModelClass("linear_classifier", dim=2), lrn.Dataset(x, y), lrn.zero_one_loss)
        assert v == 0.0
        assert np.array_equal(lrn.classify(w, x), y)

    def test_constrained_least_squares(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((30, 3))
        y = x @ np.array([3.0, 0.0, 0.0])
        w = lrn.constrained_least_squares(x, y, 1.0)
        assert np.linalg.norm(w) <= 1.0 + 1e-9
        # feasible random directions never beat the solution
        for _ in range(200):
            u = rng.standard_normal(3)
            u *= rng.random() / np.linalg.norm(u)
            assert np.sum((y - x @ u) ** 2) >= np.sum((y - x @ w) ** 2) - 1e-9


class TestGap:
    def test_constant_losses(self):
        def sampler(rng, n):
            return lrn.Dataset(np.zeros((n, 1)))

        prob = lrn.LearningProblem("const", sampler, lrn.ModelClass("finite", models=[0, 1]),
                                   lambda d, w: np.full(d.n, 0.2 * (w + 1)), true_risk=lambda w: 0.2 * (w + 1))
        assert lrn.worst_case_gap_mc(prob, 5, 50, seed=0).mean == 0.0

    def test_two_bernoulli_against_binomial(self):
        prob = lrn.finite_bernoulli(2, [0.3, 0.6])
        n = 100
        est = lrn.worst_case_gap_mc(prob, n, 20000, seed=1)
        k = np.arange(n + 1)
        e = [np.sum(stats.binom.pmf(k, n, p) * np.abs(k / n - p)) for p in (0.3, 0.6)]
        # independent coordinates: E max(|A|, |B|) from the two exact marginals
        pa = stats.binom.pmf(k, n, 0.3)
        pb = stats.binom.pmf(k, n, 0.6)
        ga = np.abs(k / n - 0.3)
        gb = np.abs(k / n - 0.6)
        exact = float(np.sum(pa[:, None] * pb[None, :] * np.maximum(ga[:, None], gb[None, :])))
        assert exact >= max(e)
        assert abs(est.mean - exact) <= 3 * est.se

    def test_sqrt_n_scaling(self):
        prob = lrn.finite_bernoulli(2, [0.3, 0.6])
        a = lrn.worst_case_gap_mc(prob, 100, 20000, seed=2).mean
        b = lrn.worst_case_gap_mc(prob, 400, 20000, seed=2).mean
        assert 0.35 <= b / a <= 0.65

    def test_missing_risk(self):
        prob = lrn.halfspace2d()
        with pytest.raises(CapabilityError):
            lrn.worst_case_gap_mc(prob, 10, 10, seed=0)

    def test_decomposition_adds_up(self):
        prob = lrn.finite_bernoulli(4)
        data = prob.draw(0, 0, 30)
        t = lrn.excess_risk_decomposition(prob, data, 2)
        assert t["generalization"] + t["optimization"] + t["estimation"] == pytest.approx(t["excess"])


class TestFiniteClassBound:
    def test_examples(self):
        assert lrn.finite_class_bound(1.0, math.e, 1).value == pytest.approx(2.0)
        assert lrn.finite_class_bound(0.25, 16, 100).value == pytest.approx(0.16651, abs=1e-5)
        v1 = lrn.finite_class_bound(0.5, 7, 30).value
        assert lrn.finite_class_bound(0.5, 7, 120).value == pytest.approx(v1 / 2)
        with pytest.raises(DomainError):
            lrn.finite_class_bound(1.0, 1, 10)


class TestRademacher:
    def test_constant_singleton(self):
        n, c = 6, 0.7
        data = lrn.Dataset(np.zeros((n, 1)))
        cls = lrn.ModelClass("finite", models=[0])
        got = lrn.rademacher(cls, data, lambda d, w: np.full(d.n, c))
        k = np.arange(n + 1)
        want = c * np.sum([math.comb(n, int(j)) * abs(n - 2 * j) for j in k]) / 2**n / n
        assert got == pytest.approx(want, rel=1e-12)

    def test_single_sample(self):
        data = lrn.Dataset(np.zeros((1, 1)))
        cls = lrn.ModelClass("finite", models=[0, 1])
        assert lrn.rademacher(cls, data, _table_loss([[0.0], [1.0]])) == pytest.approx(1.0)

    def test_mc_matches_exact(self):
        rng = np.random.default_rng(4)
        table = rng.random((2, 10))
        data = lrn.Dataset(np.zeros((10, 1)))
        cls = lrn.ModelClass("finite", models=[0, 1])
        exact = lrn.rademacher(cls, data, _table_loss(table))
        est = lrn.rademacher(cls, data, _table_loss(table), "mc", trials=10**5, seed=0)
        assert abs(est.mean - exact) <= 3 * est.se

    def test_brute_force_oracle(self):
        table = np.array([[1, 0, 1, 1], [0, 1, 1, 0], [0.5, 0.5, 0, 1]])
        data = lrn.Dataset(np.zeros((4, 1)))
        cls = lrn.ModelClass("finite", models=[0, 1, 2])
        want = np.mean([max(abs(np.dot(s, row)) / 4 for row in table) for s in product((-1, 1), repeat=4)])
        assert lrn.rademacher(cls, data, _table_loss(table)) == pytest.approx(want)

    def test_size_limit(self):
        data = lrn.Dataset(np.zeros((25, 1)))
        with pytest.raises(SizeError):
            lrn.rademacher(lrn.ModelClass("finite", models=[0]), data, lambda d, w: np.ones(d.n))


class TestLinregBound:
    def test_zero_data(self):
        data = lrn.Dataset(np.zeros((4, 1)), np.zeros(4))
        assert lrn.linreg_rademacher_bound(data, 1.0, 1.0).value == 0.0

    def test_example(self):
        data = lrn.Dataset(np.ones((4, 1)), np.ones(4))
        assert lrn.linreg_rademacher_bound(data, 1.0, 2.0).value == pytest.approx(8.0)
        scaled = lrn.Dataset(2 * np.ones((4, 1)), 2 * np.ones(4))
        assert lrn.linreg_rademacher_bound(scaled, 1.0, 4.0).value == pytest.approx(32.0)

    def test_b_too_small(self):
        with pytest.raises(DomainError, match="at least"):
            lrn.linreg_rademacher_bound(lrn.Dataset(np.ones((4, 1)), np.ones(4)), 1.0, 1.0)


class TestEntropyBounds:
    grid = np.logspace(-3, 0, 61)

    def test_pseudometric(self):
        x = np.ones((16, 1))
        y = np.array([1.0] * 12 + [0.0] * 4)
        data = lrn.Dataset(x, y)
        a, b = np.array([1.0]), np.array([-1.0])
        assert lrn.empirical_pseudometric(a, a, data, lrn.zero_one_loss) == 0.0
        assert lrn.empirical_pseudometric(a, b, data, lrn.zero_one_loss) == pytest.approx(1.0)
        # disagreement on 4 of 16 points
        data2 = lrn.Dataset(np.vstack([np.ones((12, 1)), -np.ones((4, 1))]), np.ones(16))
        assert lrn.empirical_pseudometric(a, np.array([0.0]), data2, lrn.zero_one_loss) == pytest.approx(0.5)

    def test_zero_entropy(self):
        assert lrn.entropy_gen_bound(1.0, 10, lambda d: 0.0, self.grid).value == pytest.approx(2e-3)
        assert lrn.lipschitz_class_bound(1.0, 1.0, 10, lambda d: 0.0, self.grid).value == pytest.approx(2e-3)

    def test_grid_minimum_and_monotone(self):
        curve = lambda d: 4 * math.log(1 / d)  # noqa: E731
        r = lrn.entropy_gen_bound(1.0, 100, curve, self.grid)
        assert all(r.value <= 2 * d + 6 * math.sqrt(curve(d) / 100) + 1e-15 for d in self.grid)
        assert lrn.entropy_gen_bound(1.0, 400, curve, self.grid).value < r.value
        lip = lrn.lipschitz_class_bound(1.0, 1.0, 100, curve, self.grid)
        assert lip.value <= r.value
        assert lrn.lipschitz_class_bound(1.0, 2.0, 100, curve, self.grid).value >= lip.value

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            lrn.entropy_gen_bound(1.0, 10, lambda d: 0.0, [])


class TestShatter:
    def test_three_points_with_bias(self):
        pts = lrn.with_bias(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        count, shattered = lrn.shatter_coefficient(lrn.ModelClass("linear_classifier", dim=3), pts)
        assert count == 8 and shattered

    def test_empty(self):
        assert lrn.shatter_coefficient(lrn.ModelClass("linear_classifier", dim=2), np.zeros((0, 2))) == (1, True)

    def test_constant_class(self):
        cls = lrn.ModelClass("finite", models=[lambda p: np.zeros(len(p)), lambda p: np.ones(len(p))])
        count, _ = lrn.shatter_coefficient(cls, np.arange(5.0))
        assert count <= 2
        cert = lrn.vc_dimension_search(cls, lambda rng, m: rng.random((m, 1)), 4, 3, seed=0)
        assert cert.lower == 1

    def test_halfspace_certificate(self):
        cert = lrn.vc_dimension_search(lrn.ModelClass("linear_classifier", dim=2),
                                       lambda rng, m: rng.standard_normal((m, 2)), 4, 20, seed=0)
        assert cert.lower == 2

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2**31 - 1), st.integers(3, 10))
    def test_sauer_dominates(self, seed, n):
        pts = np.random.default_rng(seed).standard_normal((n, 2))
        count, _ = lrn.shatter_coefficient(lrn.ModelClass("linear_classifier", dim=2), pts)
        assert count <= lrn.vc_tools(2, n, "sauer")

    def test_vc_tools(self):
        assert lrn.vc_tools(1, 1, "sauer") == pytest.approx(math.e)
        assert lrn.vc_tools(2, 10, "sauer") == pytest.approx(184.73, abs=0.01)
        assert lrn.vc_tools(3, 300, "vc_gen_bound") == pytest.approx(0.1)
        assert lrn.vc_tools(2, 10, "vc_entropy", delta=math.exp(-1)) == pytest.approx(2.0)
        with pytest.raises(DomainError):
            lrn.vc_tools(3, 2, "sauer")

    def test_unsupported(self):
        cls = lrn.ModelClass("linear_regressor", dim=2, radius=1.0)
        with pytest.raises(CapabilityError):
            lrn.shatter_coefficient(cls, np.zeros((3, 2)))
