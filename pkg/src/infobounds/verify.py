"""Invariant-check suites, one per acceptance criterion.

Each suite takes a seed and an optional trial-count override and returns a
``SuiteResult`` whose ``results`` field is a pure function of its inputs (no
timings), so repeated runs serialize byte-identically.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import concentration as conc
from . import info_gen as ig
from . import learning as lrn
from . import metric_entropy as me
from . import minimax as mm
from .rng import substream, tag


@dataclass
class Check:
    name: str
    value: float
    bound: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "bound": self.bound, "passed": bool(self.passed),
                "detail": self.detail}


@dataclass
class SuiteResult:
    suite: str
    checks: list
    summary: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def results(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.as_dict() for c in self.checks],
                "summary": self.summary}

    def line(self) -> str:
        bad = [c.name for c in self.checks if not c.passed]
        status = "PASS" if not bad else "FAIL"
        tail = f"{len(self.checks)} checks" if not bad else f"failed: {', '.join(bad[:5])}"
        return f"[{status}] {self.suite}: {tail} ({self.elapsed:.1f}s)"


def _f(x) -> float:
    return float(x)


# ---------------------------------------------------------------------------
# concentration and metric entropy
# ---------------------------------------------------------------------------


def suite_tails(seed: int, trials: int | None = None) -> SuiteResult:
    trials = trials or 10**6
    checks = []
    for name, make in conc.SOURCES.items():
        src = make()
        sigma = math.sqrt(src.variance_proxy)
        for mult in (0.25, 0.5, 1.0, 2.0, 3.0):
            eps = mult * sigma
            rep = conc.empirical_tail_check(src, eps, trials, seed)
            bound = conc.subgaussian_tail_bound(src.spec, eps).value
            checks.append(Check(f"{name}:eps={mult}sigma", rep.frequency, bound + rep.hoeffding_halfwidth,
                                rep.frequency <= bound + rep.hoeffding_halfwidth,
                                {"bound": bound, "halfwidth": rep.hoeffding_halfwidth, "trials": trials}))
    for mult in (0.5, 1.0, 2.0, 3.0, 4.0):
        lo, hi = conc.gaussian_tail_sandwich(1.0, mult)
        q = conc.gaussian_tail_quadrature(1.0, mult)
        checks.append(Check(f"gaussian-sandwich:a={mult}sigma", q, hi, lo - 1e-9 <= q <= hi + 1e-9,
                            {"lower": lo, "upper": hi}))
    return SuiteResult("tails", checks)


def suite_covering(seed: int, trials: int | None = None) -> SuiteResult:
    checks = []
    cache: dict = {}
    for n in range(1, 9):
        for delta in (1, 2, 3):
            row = me.sandwich_row(n, delta, cache)
            checks.append(Check(f"sandwich:n={n}:delta={delta}", row["N"], row["M_delta"], row["sandwich"],
                                {"M_2delta": row["M_2delta"]}))
            if row["within_bounds"] is not None:
                checks.append(Check(f"analytic:n={n}:delta={delta}", row["H"], row["upper"], row["within_bounds"],
                                    {"lower": row["lower"]}))
    return SuiteResult("covering", checks)


def suite_rate_distortion(seed: int, trials: int | None = None) -> SuiteResult:
    """1 - H(D) is the left end of the sandwich; exact volumes sit at or above it."""
    checks = []
    rows = {n: me.rd_compare("binary_symmetric", 0.11, n) for n in (20, 40, 60)}
    for n, r in rows.items():
        ok = r.rd_value <= r.per_dim_entropy_lower <= r.per_dim_entropy_upper
        checks.append(Check(f"rd-le-lower:n={n}", r.rd_value, r.per_dim_entropy_lower, ok,
                            {"upper": r.per_dim_entropy_upper, "width": r.width,
                             "excess": r.per_dim_entropy_upper - r.rd_value}))
    checks.append(Check("width-shrinks", rows[60].width, rows[20].width, rows[60].width < rows[20].width))
    ex20 = rows[20].per_dim_entropy_upper - rows[20].rd_value
    ex60 = rows[60].per_dim_entropy_upper - rows[60].rd_value
    checks.append(Check("excess-shrinks", ex60, ex20, ex60 < ex20))
    return SuiteResult("rate-distortion", checks)


def suite_lipschitz(seed: int, trials: int | None = None) -> SuiteResult:
    checks = []
    for delta in (0.5, 0.25):
        fam = me.lipschitz_packing_family(1.0, delta, seed)
        size = 2 ** math.floor(1.0 / delta)
        sep = me.family_min_separation(fam)
        checks.append(Check(f"size:delta={delta}", len(fam), size, len(fam) == size))
        checks.append(Check(f"separation:delta={delta}", sep, 2 * delta, sep >= 2 * delta))
    return SuiteResult("lipschitz", checks)


# ---------------------------------------------------------------------------
# learning
# ---------------------------------------------------------------------------


def suite_rademacher(seed: int, trials: int | None = None) -> SuiteResult:
    trials = trials or 10**5
    prob = lrn.finite_bernoulli(4)
    cls = prob.model_class
    data = prob.draw(seed, 0, 10)
    exact = lrn.rademacher(cls, data, prob.loss, "exact")
    est = lrn.rademacher(cls, data, prob.loss, "mc", trials=trials, seed=seed)
    checks = [Check("exact-vs-mc", est.mean, exact, abs(est.mean - exact) <= 3 * est.se,
                    {"se": est.se, "trials": trials})]
    draws = 500
    comps = np.array([lrn.rademacher(cls, prob.draw(seed, 1 + t, 10), prob.loss, "exact") for t in range(draws)])
    gap = lrn.worst_case_gap_mc(prob, 10, draws, seed)
    r_se = float(comps.std(ddof=1) / math.sqrt(draws))
    comb = math.sqrt(gap.se**2 + (2 * r_se) ** 2)
    rn = float(comps.mean())
    checks.append(Check("symmetrization", gap.mean, 2 * rn + 3 * comb, gap.mean <= 2 * rn + 3 * comb,
                        {"R_n": rn, "combined_se": comb, "draws": draws}))
    return SuiteResult("rademacher", checks)


def suite_finite_class(seed: int, trials: int | None = None) -> SuiteResult:
    trials = trials or 20000
    prob = lrn.finite_bernoulli(16)
    checks = []
    means = {}
    for n in (25, 100, 400):
        est = lrn.worst_case_gap_mc(prob, n, trials, seed)
        bound = lrn.finite_class_bound(0.25, 16, n).value
        means[n] = est.mean
        checks.append(Check(f"bound:n={n}", est.mean, bound + 3 * est.se, est.mean <= bound + 3 * est.se,
                            {"se": est.se, "bound": bound}))
    for a, b in ((25, 100), (100, 400)):
        r = means[b] / means[a]
        checks.append(Check(f"scaling:{a}->{b}", r, 0.6, 0.4 <= r <= 0.6, {"lower": 0.4}))
    return SuiteResult("finite-class", checks)


def suite_vc(seed: int, trials: int | None = None) -> SuiteResult:
    cls = lrn.ModelClass("linear_classifier", dim=2)
    cert = lrn.vc_dimension_search(cls, lambda rng, m: rng.standard_normal((m, 2)), 6, 20, seed)
    checks = [Check("certificate", cert.lower, 2, cert.lower == 2)]
    rng = substream(seed, tag("vc-suite"))
    for n in range(3, 11):
        count, _ = lrn.shatter_coefficient(cls, rng.standard_normal((n, 2)))
        sauer = lrn.vc_tools(2, n, "sauer")
        checks.append(Check(f"sauer:n={n}", count, sauer, count <= sauer))
    return SuiteResult("vc", checks)


# ---------------------------------------------------------------------------
# information-theoretic generalization
# ---------------------------------------------------------------------------


def _instance(seed: int, symbols: int = 3, models: int = 4) -> ig.FiniteInstance:
    return ig.random_instance(substream(seed, tag("suite-instance"), symbols, models), symbols, models)


def suite_gibbs(seed: int, trials: int | None = None) -> SuiteResult:
    draws = trials or 20000
    inst = _instance(seed)
    checks = []
    for n in (10, 50):
        for beta in (0.5, 1.0, 2.0, 5.0, 10.0):
            nb = ig.neighbor_kl_max(inst, beta, n)
            checks.append(Check(f"neighbor-kl:beta={beta}:n={n}", nb["max_kl"], nb["bound"],
                                nb["max_kl"] <= nb["bound"] * (1 + 1e-9), {"pairs": nb["pairs"]}))
            learner = ig.gibbs_learner(inst, beta)
            mi = ig.exact_mutual_information(learner, inst.pz, n).nats
            cap = beta**2 / (2 * n)
            checks.append(Check(f"mi:beta={beta}:n={n}", mi, cap, mi <= cap * (1 + 1e-9)))
            gen = ig.generalization_mc(inst, learner, n, draws, seed)
            lim = beta / (2 * n) + 3 * gen.se
            checks.append(Check(f"gen:beta={beta}:n={n}", abs(gen.mean), lim, abs(gen.mean) <= lim,
                                {"se": gen.se, "draws": draws}))
    counts = np.array([4, 3, 3])
    prior = np.array([0.1, 0.2, 0.3, 0.4])
    post = ig.gibbs_posterior(ig.GibbsConfig(0.0, "finite", prior_pmf=prior, loss_table=inst.loss), counts).pmf
    err = float(np.abs(post - prior).max())
    checks.append(Check("beta0-prior", err, 1e-12, err <= 1e-12))
    beta, dim = 4.0, 2
    z = substream(seed, tag("gibbs-suite-data")).standard_normal((20, dim)) + 1.0
    closed = ig.gibbs_posterior(ig.GibbsConfig(beta, "normal", dim=dim, loss="squared_mean"), z)
    risk = lambda w, d: 0.5 * float(np.mean(np.sum((d - w) ** 2, axis=1)))
    chain = ig.gibbs_posterior(ig.GibbsConfig(beta, "normal", dim=dim, risk_fn=risk), z, seed, steps=60000)
    se_m = np.asarray(chain.diagnostics["se_mean"])
    se_v = np.asarray(chain.diagnostics["se_var"])
    for i in range(dim):
        dm = abs(chain.mean[i] - closed.mean[i])
        dv = abs(chain.var[i] - closed.var[i])
        checks.append(Check(f"mcmc-mean:{i}", _f(dm), _f(3 * se_m[i]), dm <= 3 * se_m[i]))
        checks.append(Check(f"mcmc-var:{i}", _f(dv), _f(3 * se_v[i]), dv <= 3 * se_v[i]))
    return SuiteResult("gibbs", checks)


def suite_mi(seed: int, trials: int | None = None) -> SuiteResult:
    draws = trials or 20000
    checks = []
    sigma2 = 0.25
    for idx, (symbols, models, n) in enumerate(((3, 4, 10), (2, 6, 8), (4, 3, 6))):
        inst = _instance(seed + idx, symbols, models)
        for name, learner in (("gibbs", ig.gibbs_learner(inst, 5.0)), ("erm", ig.erm_learner(inst))):
            mi = ig.exact_mutual_information(learner, inst.pz, n)
            full = ig.mi_gen_bound(sigma2, n, "mi", mi.nats).value
            indiv = ig.mi_gen_bound(sigma2, n, "individual", mi.detail["per_sample"]).value
            gen = ig.generalization_mc(inst, learner, n, draws, seed)
            tag_ = f"{name}:case={idx}"
            checks.append(Check(f"mi-bound:{tag_}", abs(gen.mean), full + 3 * gen.se,
                                abs(gen.mean) <= full + 3 * gen.se, {"se": gen.se, "bound": full}))
            checks.append(Check(f"individual:{tag_}", indiv, full, indiv <= full * (1 + 1e-12)))
    exact, _ = ig.gaussian_mean_individual_mi(2, 1.0)
    w, z1 = ig.sample_mean_pairs(2, 1.0, trials or 10**6, seed)
    est = ig.plugin_mutual_information(w, z1).nats
    checks.append(Check("gaussian-plugin", abs(est - exact), 0.02, abs(est - exact) <= 0.02,
                        {"exact": exact, "plugin": est}))
    return SuiteResult("mi", checks)


def suite_pac_bayes(seed: int, trials: int | None = None) -> SuiteResult:
    draws = trials or 2000
    inst = _instance(seed, 4, 6)
    rep = ig.pac_bayes_coverage(inst, 5.0, 50, 0.1, draws, seed)
    return SuiteResult("pac-bayes", [Check("coverage", rep.frequency, rep.target, rep.frequency >= rep.target,
                                           rep.as_dict())])


# ---------------------------------------------------------------------------
# minimax
# ---------------------------------------------------------------------------


def suite_gauss_fano(seed: int, trials: int | None = None) -> SuiteResult:
    checks = []
    for k, n, s2 in ((30, 100, 1.0), (3, 1, 1.0), (10, 10**4, 4.0)):
        r = mm.gaussian_mean_pipeline(k, n, s2, seed)
        want = s2 * k / (384 * n * mm.LOG2E)
        checks.append(Check(f"closed-form:k={k}:n={n}", r.lower_bound, want,
                            abs(r.lower_bound - want) <= 1e-12))
        ref = r.parameters["reference_sample_mean"]
        checks.append(Check(f"reference:k={k}:n={n}", r.lower_bound, ref, r.lower_bound <= ref))
    for k in range(3, 13):
        cert = mm.packing_certificate(k, seed)
        checks.append(Check(f"packing:k={k}", cert["log2_m"], k, cert["certified"] and cert["log2_m"] >= k))
    return SuiteResult("gauss-fano", checks)


def suite_density(seed: int, trials: int | None = None) -> SuiteResult:
    r1 = mm.density_packing_pipeline(8, 2**15, seed=seed)
    r2 = mm.density_packing_pipeline(16, 2**20, seed=seed)
    checks = [Check(f"audit:{key}", 1.0, 1.0, ok) for key, ok in r1.parameters["audits"].items()]
    checks.append(Check("c1-halving", r1.parameters["C1"], 0.5, r1.parameters["C1"] > 0))
    for label, r in (("k=8", r1), ("k=16", r2)):
        p = r.parameters
        checks.append(Check(f"ratio:{label}", p["ratio_actual"], 0.5, p["ratio_condition_met"]))
    c2a, c2b = r1.parameters["C2_implied"], r2.parameters["C2_implied"]
    checks.append(Check("fixed-c2", c2b, c2a, abs(c2a - c2b) <= 1e-12))
    ratio = r2.lower_bound / r1.lower_bound
    want = (2**20 / 2**15) ** -0.8
    checks.append(Check("power-law", ratio, want, abs(ratio - want) <= 1e-6))
    return SuiteResult("density", checks, {"lower_k8": r1.lower_bound, "lower_k16": r2.lower_bound})


def suite_reduction(seed: int, trials: int | None = None) -> SuiteResult:
    trials = trials or 20000
    cert = mm.packing_certificate(3, seed)
    inst = mm.gaussian_fano_instance(cert["points"], 2.0, 1.0, 1)
    checks = []
    for n in (1, 10, 100):
        r = mm.testing_reduction_sim(inst, mm.sample_mean_estimator, trials, seed, n=n)
        lim = r.miss_probability + 3 * r.combined_se
        checks.append(Check(f"direction:n={n}", r.test_error, lim, r.test_error <= lim, r.as_dict()))
    r = mm.testing_reduction_sim(inst, mm.constant_estimator(inst.packing[0]), trials, seed, n=10)
    want = (inst.m - 1) / inst.m
    checks.append(Check("constant-estimator", r.test_error, want, abs(r.test_error - want) <= 3 * r.test_error_se,
                        {"se": r.test_error_se}))
    return SuiteResult("reduction", checks)


def suite_binary(seed: int, trials: int | None = None) -> SuiteResult:
    r = mm.binary_test_minimax([0.8, 0.2], [0.2, 0.8], 3)
    majority = 3 * 0.2**2 * 0.8 + 0.2**3
    checks = [
        Check("lr-vs-enumeration", r.value, r.deterministic_value, abs(r.value - r.deterministic_value) <= 1e-12),
        Check("equalized", abs(r.alpha - r.beta), 1e-12, abs(r.alpha - r.beta) <= 1e-12),
        Check("majority-rule", r.value, majority, abs(r.value - majority) <= 1e-12),
    ]
    same = mm.binary_test_minimax([0.3, 0.7], [0.3, 0.7], 3)
    checks.append(Check("identical-half", same.value, 0.5, same.value == 0.5))
    return SuiteResult("binary", checks, r.as_dict())


SUITES: dict[str, Callable[[int, int | None], SuiteResult]] = {
    "tails": suite_tails,
    "covering": suite_covering,
    "rate-distortion": suite_rate_distortion,
    "lipschitz": suite_lipschitz,
    "rademacher": suite_rademacher,
    "finite-class": suite_finite_class,
    "vc": suite_vc,
    "gibbs": suite_gibbs,
    "mi": suite_mi,
    "pac-bayes": suite_pac_bayes,
    "gauss-fano": suite_gauss_fano,
    "density": suite_density,
    "reduction": suite_reduction,
    "binary": suite_binary,
}


def run_suite(name: str, seed: int = 0, trials: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    start = time.perf_counter()
    res = SUITES[name](seed, trials)
    res.elapsed = time.perf_counter() - start
    return res
