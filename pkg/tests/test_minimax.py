import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infobounds import info_gen as ig
from infobounds import minimax as mm
from infobounds.errors import CertificationError, DomainError, SizeError
from infobounds.rng import substream

LOG2E = math.log2(math.e)


def _pmf_pairs():
    return st.integers(2, 8).flatmap(
        lambda k: st.tuples(st.lists(st.floats(1e-3, 1.0), min_size=k, max_size=k),
                            st.lists(st.floats(1e-3, 1.0), min_size=k, max_size=k)))


class TestDivergences:
    def test_kl_examples(self):
        assert mm.kl_divergence([0.2, 0.8], [0.2, 0.8], "finite") == 0.0
        assert mm.kl_divergence(0.0, 2.0, "gaussian_location", sigma2=1.0) == pytest.approx(2.0)
        assert mm.kl_divergence(0.0, 2.0, "gaussian_location", "bits", sigma2=1.0) == pytest.approx(2 * LOG2E)
        assert mm.kl_divergence([0.75, 0.25], [0.5, 0.5], "finite") == pytest.approx(0.13081, abs=1e-5)

    def test_grid_support_violation(self):
        g = mm.grid_points(100)
        f = np.ones_like(g)
        q = np.where(g < 0.5, 2.0, 0.0)
        assert mm.kl_divergence(f, q, "grid", grid=g) == math.inf

    def test_hellinger(self):
        g = mm.grid_points()
        f = np.ones_like(g)
        assert mm.hellinger_sq(f, f, g) == 0.0
        a = np.where(g <= 0.5, 2.0, 0.0)
        b = np.where(g >= 0.5, 2.0, 0.0)
        assert mm.hellinger_sq_finite([1, 0], [0, 1]) == 1.0
        assert mm.hellinger_sq(a, b, g) == pytest.approx(1.0, abs=1e-3)
        with pytest.raises(DomainError):
            mm.hellinger_sq(-f, f, g)

    def test_hellinger_grid_refinement(self):
        coarse, fine = mm.grid_points(4096), mm.grid_points(40960)

        def h(grid):
            return mm.hellinger_sq(np.ones_like(grid), 1 + 0.5 * np.sin(2 * np.pi * grid), grid)

        assert abs(h(coarse) - h(fine)) <= 1e-6

    @given(_pmf_pairs())
    def test_pinsker_and_hellinger_rails(self, pair):
        p = np.array(pair[0]) / sum(pair[0])
        q = np.array(pair[1]) / sum(pair[1])
        tv = mm.total_variation(p, q)
        h2 = mm.hellinger_sq_finite(p, q)
        assert mm.kl_divergence(p, q, "finite") >= 2 * tv**2 - 1e-12
        assert h2 <= tv + 1e-12
        assert tv <= math.sqrt(2 * h2) + 1e-12


class TestHellingerKl:
    def test_identical(self):
        g = mm.grid_points()
        f = 1 + 0.5 * np.sin(2 * np.pi * g)
        r = mm.hellinger_kl_inequality_check(f, f, 0.5, g)
        assert r.kl_bits == 0.0 and r.bound_bits == 0.0 and r.holds

    def test_stated_constant_fails_near_uniform(self):
        # measured counterexample: the KL in bits is about twice the stated bound
        g = mm.grid_points()
        r = mm.hellinger_kl_inequality_check(1 + 0.5 * np.sin(2 * np.pi * g), np.ones_like(g), 0.5, g)
        assert not r.holds
        assert r.ratio == pytest.approx(1.9402, abs=1e-3)

    def test_stated_constant_holds_far_from_uniform(self):
        g = mm.grid_points()
        r = mm.hellinger_kl_inequality_check(1 + 0.99 * np.sin(2 * np.pi * g), np.ones_like(g), 0.01, g)
        assert r.holds

    def test_bump_pair_is_tight_for_four_over_ln2(self):
        g = mm.grid_points()
        a = np.ones(8, dtype=int)
        b = a.copy()
        b[0] = -1
        r = mm.hellinger_kl_inequality_check(mm.bump_density(a, 0.5, g), mm.bump_density(b, 0.5, g), 0.5, g,
                                             constant=4 / math.log(2))
        assert abs(r.ratio - 1) < 1e-5

    def test_precondition(self):
        g = mm.grid_points()
        with pytest.raises(DomainError):
            mm.hellinger_kl_inequality_check(1 + 0.9 * np.sin(2 * np.pi * g), np.ones_like(g), 0.5, g)


class TestFano:
    def test_error_lower(self):
        assert mm.fano_error_lower(0, 2) == 0.0
        assert mm.fano_error_lower(0, 1024) == pytest.approx(0.9)
        assert mm.fano_error_lower(20, 1024) == 0.0
        assert mm.fano_error_lower(0, 1024, "e") == pytest.approx(1 - 1 / math.log(1024))
        with pytest.raises(DomainError):
            mm.fano_error_lower(0, 1)

    def test_local_indistinguishable(self):
        m = 1024
        inst = mm.FanoInstance(np.arange(m)[:, None] * 2.0, 2.0, np.zeros((m, m)), 1)
        r = mm.local_fano_bound(inst, mm.SQUARE, 1.0)
        assert r.lower_bound == pytest.approx(0.9)
        assert r.lower_bound == r.phi_delta * max(0.0, r.error_prob_lower)

    def test_local_two_hypotheses(self):
        inst = mm.FanoInstance(np.array([[0.0], [3.0]]), 3.0, np.array([[0, 0.1], [0.1, 0]]), 5)
        assert mm.local_fano_bound(inst, mm.SQUARE, 1.5).lower_bound == 0.0

    def test_local_separation(self):
        inst = mm.FanoInstance(np.array([[0.0], [1.0]]), 1.0, np.zeros((2, 2)), 1)
        with pytest.raises(CertificationError):
            mm.local_fano_bound(inst, mm.SQUARE, 1.0)

    def test_bad_divergences(self):
        with pytest.raises(DomainError):
            mm.FanoInstance(np.zeros((2, 1)), 1.0, np.array([[0.1, 0], [0, 0]]), 1)

    def test_global(self):
        r = mm.global_fano_bound(0.0, 10.0, 50, 0.0, mm.SQUARE, 0.3)
        assert r.lower_bound == pytest.approx(0.09 * 0.9)
        assert mm.global_fano_bound(0.0, 10.0, 100, 1.0, mm.SQUARE, 0.3).lower_bound == 0.0
        with pytest.raises(DomainError):
            mm.global_fano_bound(0.0, 0.0, 1, 0.0, mm.SQUARE, 1.0)

    def test_loss_shapes(self):
        assert mm.SQUARE.check() and mm.ABSOLUTE.check()
        assert not mm.LossShape("bad", lambda a: -a + 0.0 * a).check()

    def test_mi_bound_dominates_plugin(self):
        # finite alphabet: 8 Bernoulli hypotheses, n = 5, count statistic
        p = 0.3 + 0.05 * np.arange(8)
        n, trials = 5, 200_000
        div = np.array([[mm.kl_divergence([a, 1 - a], [b, 1 - b], "finite", "bits") for b in p] for a in p])
        inst = mm.FanoInstance(p[:, None], 0.05, div, n)
        bound = mm.local_fano_bound(inst, mm.SQUARE, 0.025).mi_upper
        rng = substream(0, 7)
        j = rng.integers(0, 8, size=trials)
        t = rng.binomial(n, p[j])
        joint = np.zeros((8, n + 1))
        np.add.at(joint, (j, t), 1.0)
        plug = ig._mi_from_joint(joint / trials) * LOG2E
        assert plug <= bound


class TestGaussianMean:
    @pytest.mark.parametrize("k,n,s2", [(30, 100, 1.0), (3, 1, 1.0), (10, 10**4, 4.0)])
    def test_closed_form(self, k, n, s2):
        r = mm.gaussian_mean_pipeline(k, n, s2)
        assert r.lower_bound == pytest.approx(s2 * k / (384 * n * LOG2E), rel=1e-12)
        assert r.lower_bound <= r.parameters["reference_sample_mean"]
        assert r.lower_bound / (s2 * k / n) == pytest.approx(1 / (384 * LOG2E), rel=1e-12)

    def test_examples(self):
        r = mm.gaussian_mean_pipeline(30, 100, 1.0)
        assert r.lower_bound == pytest.approx(5.4155e-4, rel=1e-4)
        assert r.parameters["reference_sample_mean"] == pytest.approx(0.3)
        assert r.parameters["packing"]["status"] == "not constructively certified"
        assert mm.gaussian_mean_pipeline(3, 1).lower_bound == pytest.approx(5.4155e-3, rel=1e-4)

    def test_chain_dominates(self):
        r = mm.gaussian_mean_pipeline(6, 20, 1.0)
        assert r.parameters["chain_value"] >= r.lower_bound - 1e-15
        assert r.parameters["certified_local_fano"] >= r.lower_bound - 1e-15

    def test_packing_certificate(self):
        for k in (3, 8, 12):
            cert = mm.packing_certificate(k)
            assert cert["certified"] and cert["log2_m"] >= k
            assert mm.min_pairwise_distance(cert["points"]) > 2.0

    def test_small_k(self):
        with pytest.raises(DomainError):
            mm.gaussian_mean_pipeline(2, 10)

    def test_bayes_chain(self):
        s2, n = 2.0, 50
        gammas = np.logspace(-3, 8, 40)
        vals = [mm.bayes_reference(s2, n, g) for g in gammas]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert all(v < s2 / n for v in vals)
        assert abs(mm.bayes_reference(s2, n, 1e6 * s2 / n) - s2 / n) <= 1e-6


@pytest.fixture(scope="module")
def report():
    return mm.density_packing_pipeline(8, 2**15)


class TestDensity:
    def test_audits(self, report):
        assert all(report.parameters["audits"].values())
        assert report.parameters["C1"] == 0.5
        assert report.parameters["m"] >= 8

    def test_delta2(self, report):
        assert report.parameters["int_phi2"] == pytest.approx(1 / 8, rel=1e-9)
        assert report.phi_delta == pytest.approx(0.25 / (8 * 8**4) / 8, rel=1e-9)
        assert report.phi_delta == pytest.approx(9.54e-7, rel=1e-3)

    def test_power_law(self, report):
        big = mm.density_packing_pipeline(16, 2**20)
        assert big.parameters["C2_implied"] == pytest.approx(report.parameters["C2_implied"], rel=1e-12)
        assert report.parameters["ratio_condition_met"] and big.parameters["ratio_condition_met"]
        assert big.lower_bound / report.lower_bound == pytest.approx((2**5) ** -0.8, abs=1e-6)

    def test_members_integrate_to_one(self):
        g = mm.grid_points()
        rng = np.random.default_rng(0)
        for _ in range(5):
            s = rng.choice([-1, 1], size=8)
            f = mm.bump_density(s, 0.5, g)
            assert abs(np.trapezoid(f, g) - 1) <= 1e-6
            assert f.min() >= 0.5

    def test_range(self):
        with pytest.raises(DomainError):
            mm.density_packing_pipeline(3, 100)

    def test_curvature_violation(self):
        with pytest.raises(CertificationError):
            mm.density_packing_pipeline(8, 2**15, c1=1.0)


class TestRegression:
    def test_default_value(self):
        r = mm.nonlinear_regression_pipeline(1.0, 10**6)
        c = r.parameters["c"]
        assert r.parameters["ratio_condition_met"]
        assert r.lower_bound == pytest.approx(0.5 * c * c * 1e6 ** (-2 / 3), rel=1e-12)
        assert r.parameters["c1"] == pytest.approx(1.0)
        assert r.parameters["c2"] == pytest.approx(2 * math.log2(3))
        assert r.parameters["ratio"] == pytest.approx(r.parameters["ratio_closed_form"], rel=1e-12)

    def test_scaling(self):
        a = mm.nonlinear_regression_pipeline(1.0, 10**6)
        b = mm.nonlinear_regression_pipeline(1.0, 4 * 10**6)
        assert b.lower_bound / a.lower_bound == pytest.approx(4 ** (-2 / 3), abs=1e-12)
        d1 = mm.nonlinear_regression_pipeline(1.0, 10**6).parameters["delta"]
        d2 = mm.nonlinear_regression_pipeline(2.0, 10**6).parameters["delta"]
        assert d2 / d1 == pytest.approx(2 ** (2 / 3), rel=1e-12)

    def test_global_route(self):
        r = mm.nonlinear_regression_pipeline(1.0, 10**6)
        p = r.parameters
        g = mm.global_fano_bound(p["logK"], p["logM"], p["n"], p["epsilon"], mm.SQUARE, p["delta"])
        assert g.lower_bound == p["global_fano_value"]

    def test_unmet_flag(self):
        r = mm.nonlinear_regression_pipeline(10.0, 10)
        assert not r.parameters["ratio_condition_met"]


class TestReduction:
    @staticmethod
    def _instance(sigma2, n):
        pts = mm.packing_certificate(3)["points"]
        return mm.gaussian_fano_instance(pts, 2.0, sigma2, n)

    def test_oracle(self):
        inst = self._instance(1e-14, 1)
        r = mm.testing_reduction_sim(inst, mm.sample_mean_estimator, 2000, seed=0)
        assert r.test_error == 0.0

    def test_constant(self):
        inst = self._instance(1.0, 1)
        r = mm.testing_reduction_sim(inst, mm.constant_estimator(inst.packing[0]), 20000, seed=0)
        want = (inst.m - 1) / inst.m
        assert abs(r.test_error - want) <= 3 * r.test_error_se

    def test_monotone_and_direction(self):
        inst = self._instance(1.0, 1)
        errs = []
        for n in (1, 10, 100):
            r = mm.testing_reduction_sim(inst, mm.sample_mean_estimator, 20000, seed=1, n=n)
            assert r.direction_holds
            errs.append(r.test_error)
        assert errs[0] > errs[1] > errs[2]


class TestBinary:
    def test_bernoulli(self):
        r = mm.binary_test_minimax([0.8, 0.2], [0.2, 0.8], 3)
        assert r.value == pytest.approx(0.104, abs=1e-12)
        assert r.deterministic_value == pytest.approx(0.104, abs=1e-12)
        assert r.alpha == pytest.approx(r.beta, abs=1e-12)

    def test_identical(self):
        assert mm.binary_test_minimax([0.3, 0.7], [0.3, 0.7], 2).value == 0.5

    def test_disjoint(self):
        assert mm.binary_test_minimax([1.0, 0.0], [0.0, 1.0], 1).value == 0.0

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.integers(1, 3))
    def test_randomization_never_worse(self, a, b, n):
        r = mm.binary_test_minimax([1 - a, a], [1 - b, b], n)
        assert r.value <= r.deterministic_value + 1e-12
        assert 0.0 <= r.gamma <= 1.0

    def test_budget(self):
        with pytest.raises(SizeError):
            mm.binary_test_minimax([0.5, 0.5], [0.4, 0.6], 21)


class TestFamilies:
    def test_parse(self):
        assert mm.family_from_name("gauss-mean:30:2") == {"family": "gauss-mean", "k": 30, "sigma2": 2.0}
        assert mm.family_from_name("bump-densities:8:0.5")["c1"] == 0.5
        assert mm.family_from_name("lipschitz-regression:2")["sigma"] == 2.0
        with pytest.raises(DomainError):
            mm.family_from_name("gauss-mean:x")
        with pytest.raises(DomainError):
            mm.family_from_name("nope")
