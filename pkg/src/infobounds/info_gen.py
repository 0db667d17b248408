"""Information-theoretic generalization: exact mutual information on finite
instances, MI bounds, the Gibbs algorithm, and PAC-Bayes.

All information quantities are in nats.

A finite instance has a data alphabet {0, ..., |Z|-1} with pmf ``pz``, models
{0, ..., |W|-1} and a loss table ``loss[w, z]``.  Learners that only look at
symbol counts (Gibbs, ERM) are exchangeable, and exact sums over datasets then
run over multinomial types instead of sequences.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from .errors import CapabilityError, DomainError, SizeError
from .learning import GenBoundReport, McEstimate, _estimate
from .rng import blocks, substream, tag

EXACT_BUDGET = 10**7
ROW_TOL = 1e-12


# ---------------------------------------------------------------------------
# finite instances and learners
# ---------------------------------------------------------------------------


@dataclass
class FiniteInstance:
    pz: np.ndarray
    loss: np.ndarray

    def __post_init__(self):
        self.pz = np.asarray(self.pz, dtype=float)
        self.loss = np.asarray(self.loss, dtype=float)
        if self.pz.ndim != 1 or abs(self.pz.sum() - 1.0) > 1e-12 or np.any(self.pz < 0):
            raise DomainError("pz must be a probability vector")
        if self.loss.ndim != 2 or self.loss.shape[1] != self.pz.size:
            raise DomainError("loss must be a (|W|, |Z|) table")

    @property
    def n_models(self) -> int:
        return self.loss.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.pz.size

    def risk(self) -> np.ndarray:
        """Exact risk L(w) for every model."""
        return self.loss @ self.pz

    def empirical_risk(self, counts: np.ndarray) -> np.ndarray:
        counts = np.asarray(counts, dtype=float)
        return counts @ self.loss.T / counts.sum(axis=-1, keepdims=True)

    def sample_counts(self, rng: np.random.Generator, n: int, size: int | None = None) -> np.ndarray:
        return rng.multinomial(n, self.pz, size=size)


def random_instance(rng: np.random.Generator, n_symbols: int, n_models: int) -> FiniteInstance:
    pz = rng.dirichlet(np.ones(n_symbols))
    return FiniteInstance(pz, rng.random((n_models, n_symbols)))


@dataclass
class FiniteLearner:
    """Conditional pmf of W given the data.

    ``kernel`` maps a count vector (when ``exchangeable``) or a symbol sequence
    to a probability vector over models; it may also accept a 2-D batch.
    """

    n_models: int
    kernel: Callable[[np.ndarray], np.ndarray]
    exchangeable: bool = True
    description: str = ""

    def pmf(self, data: np.ndarray) -> np.ndarray:
        p = np.asarray(self.kernel(np.asarray(data)), dtype=float)
        if np.any(np.abs(p.sum(axis=-1) - 1.0) > ROW_TOL) or np.any(p < 0):
            raise DomainError("learner rows must be probability vectors")
        return p


def gibbs_learner(instance: FiniteInstance, beta: float, prior: np.ndarray | None = None) -> FiniteLearner:
    """Exact finite Gibbs posterior prop. to exp(-beta L_n(w)) prior(w)."""
    prior = _uniform(instance.n_models) if prior is None else _check_pmf(prior)
    log_prior = _safe_log(prior)

    def kernel(counts):
        return _softmax(-beta * instance.empirical_risk(counts) + log_prior)

    return FiniteLearner(instance.n_models, kernel, True, f"gibbs(beta={beta})")


def erm_learner(instance: FiniteInstance) -> FiniteLearner:
    """Deterministic ERM over the finite class (lowest index on ties)."""

    def kernel(counts):
        emp = instance.empirical_risk(counts)
        j = np.argmin(emp, axis=-1)
        return np.eye(instance.n_models)[j]

    return FiniteLearner(instance.n_models, kernel, True, "erm")


def _uniform(m: int) -> np.ndarray:
    return np.full(m, 1.0 / m)


def _check_pmf(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise DomainError("prior must be a probability vector")
    return p


def _safe_log(p: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(p)


def _softmax(a: np.ndarray) -> np.ndarray:
    return np.exp(a - special.logsumexp(a, axis=-1, keepdims=True))


def _xlogy_ratio(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise p ln(p/q) with 0 ln 0 = 0 and +inf where p > 0 = q."""
    with np.errstate(divide="ignore", invalid="ignore"):
        out = special.xlogy(p, p) - special.xlogy(p, q)
    return np.where(p > 0, np.where(q > 0, out, np.inf), 0.0)


# ---------------------------------------------------------------------------
# dataset enumeration
# ---------------------------------------------------------------------------


def compositions(n: int, k: int) -> np.ndarray:
    """All count vectors of length k summing to n, in lexicographic order."""
    rows = []
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        prev, row = -1, []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(n + k - 2 - prev)
        rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(-1, k)


def type_log_probs(counts: np.ndarray, pz: np.ndarray) -> np.ndarray:
    """Log probability of each type class: log multinomial(n; t) + sum t_z log p_z."""
    counts = np.asarray(counts)
    n = counts.sum(axis=1)
    logcoef = special.gammaln(n + 1) - special.gammaln(counts + 1).sum(axis=1)
    return logcoef + special.xlogy(counts, pz).sum(axis=1)


def _type_count(n: int, k: int) -> int:
    return math.comb(n + k - 1, k - 1)


# ---------------------------------------------------------------------------
# mutual information
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MIEstimate:
    nats: float
    method: str
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"nats": self.nats, "method": self.method, "detail": dict(self.detail)}


def _mi_from_joint(joint: np.ndarray) -> float:
    """I(A;B) for a joint pmf with rows indexed by A."""
    pa = joint.sum(axis=1, keepdims=True)
    pb = joint.sum(axis=0, keepdims=True)
    return float(max(0.0, np.sum(_xlogy_ratio(joint, pa * pb))))


def exact_mutual_information(learner: FiniteLearner, pz, n: int) -> MIEstimate:
    """Exact I(W; Z^n) and each I(W; Z_i) by enumeration over datasets."""
    pz = _check_pmf(pz)
    k = pz.size
    m = learner.n_models
    if learner.exchangeable:
        cells = _type_count(n, k)
        if cells * m > EXACT_BUDGET:
            raise SizeError(f"{cells} types x {m} models exceeds the enumeration budget")
        counts = compositions(n, k)
        weights = np.exp(type_log_probs(counts, pz))
        post = learner.pmf(counts)
        pw = weights @ post
        total = float(np.sum(weights * np.sum(_xlogy_ratio(post, pw[None, :]), axis=1)))
        # joint of (W, Z_1): Z_1 = a and the other n-1 symbols have type t
        rest = compositions(n - 1, k) if n > 1 else np.zeros((1, k), dtype=np.int64)
        rest_w = np.exp(type_log_probs(rest, pz)) if n > 1 else np.ones(1)
        joint = np.empty((m, k))
        for a in range(k):
            c = rest.copy()
            c[:, a] += 1
            joint[:, a] = pz[a] * (rest_w @ learner.pmf(c))
        single = _mi_from_joint(joint)
        per_sample = [single] * n
        detail = {"enumerated": "types", "cells": cells, "per_sample": per_sample}
    else:
        cells = k**n
        if cells * m > EXACT_BUDGET:
            raise SizeError(f"{cells} datasets x {m} models exceeds the enumeration budget")
        seqs = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64).reshape(-1, n)
        weights = np.prod(pz[seqs], axis=1)
        post = np.vstack([learner.pmf(s) for s in seqs])
        pw = weights @ post
        total = float(np.sum(weights * np.sum(_xlogy_ratio(post, pw[None, :]), axis=1)))
        per_sample = []
        for i in range(n):
            joint = np.zeros((m, k))
            for a in range(k):
                sel = seqs[:, i] == a
                joint[:, a] = weights[sel] @ post[sel]
            per_sample.append(_mi_from_joint(joint))
        detail = {"enumerated": "sequences", "cells": cells, "per_sample": per_sample}
    return MIEstimate(max(0.0, total), "exact_enumeration", detail)


def plugin_mutual_information(x: np.ndarray, y: np.ndarray, bins: int | None = None) -> MIEstimate:
    """Binned plug-in estimate of I(X;Y) with equal-width bins, ceil(N^(1/3)) per axis."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if bins is None:
        bins = math.ceil(x.size ** (1.0 / 3.0))
    hist, _, _ = np.histogram2d(x, y, bins=bins)
    joint = hist / hist.sum()
    return MIEstimate(_mi_from_joint(joint), "plug_in", {"bins": bins, "samples": int(x.size),
                                                          "label": "estimate, not oracle"})


def mi_gen_bound(sigma2: float, n: int, source: str, value) -> GenBoundReport:
    """MI generalization bounds.

    source ``mi``: sqrt(2 sigma2 I / n); ``finite_class``: sqrt(2 sigma2 ln|W| / n);
    ``individual``: (1/n) sum sqrt(2 sigma2 I_i); ``stability``: sqrt(2 sigma2 eps)
    with I <= n eps recorded.
    """
    if sigma2 <= 0 or n < 1:
        raise DomainError("need sigma2 > 0 and n >= 1")
    params = {"sigma2": sigma2, "n": n, "source": source}
    if source == "mi":
        if value < 0:
            raise DomainError("mutual information must be >= 0")
        v = math.sqrt(2.0 * sigma2 * value / n)
    elif source == "finite_class":
        if value < 1:
            raise DomainError("class size must be >= 1")
        v = math.sqrt(2.0 * sigma2 * math.log(value) / n)
    elif source == "individual":
        vals = np.asarray(value, dtype=float)
        if np.any(vals < 0):
            raise DomainError("mutual information must be >= 0")
        v = float(np.sum(np.sqrt(2.0 * sigma2 * vals)) / n)
    elif source == "stability":
        if value < 0:
            raise DomainError("epsilon must be >= 0")
        v = math.sqrt(2.0 * sigma2 * value)
        params["mi_upper"] = n * value
    else:
        raise DomainError(f"unknown source {source!r}")
    return GenBoundReport(f"mi_gen_{source}", v, params)


def gaussian_mean_individual_mi(n: int, sigma2: float = 1.0) -> tuple[float, float]:
    """I(W; Z_i) for W the sample mean of n Gaussians, and sqrt(2 sigma2 I).

    (W, Z_i) is bivariate Gaussian with squared correlation 1/n, so the
    individual information is -ln(1 - 1/n)/2.  The full I(W; Z^n) is infinite.
    """
    if n < 2:
        raise DomainError("n must be >= 2; the information diverges at n = 1")
    info = -0.5 * math.log1p(-1.0 / n)
    return info, math.sqrt(2.0 * sigma2 * info)


def sample_mean_pairs(n: int, sigma2: float, trials: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw (W, Z_1) pairs with W the mean of n i.i.d. N(0, sigma2)."""
    w = np.empty(trials)
    z1 = np.empty(trials)
    pos = 0
    for idx, size in blocks(trials):
        z = substream(seed, tag("mean-pairs"), idx).normal(0.0, math.sqrt(sigma2), size=(size, n))
        w[pos:pos + size] = z.mean(axis=1)
        z1[pos:pos + size] = z[:, 0]
        pos += size
    return w, z1


def generalization_mc(instance: FiniteInstance, learner: FiniteLearner, n: int, draws: int,
                      seed: int) -> McEstimate:
    """Monte Carlo E(L(W) - L_n(W)); the W-average given the data is exact."""
    if not learner.exchangeable:
        raise CapabilityError("Monte Carlo generalization needs an exchangeable learner")
    risk = instance.risk()
    vals = np.empty(draws)
    pos = 0
    for idx, size in blocks(draws):
        counts = instance.sample_counts(substream(seed, tag("gen-mc"), n, idx), n, size)
        post = learner.pmf(counts)
        vals[pos:pos + size] = np.sum(post * (risk[None, :] - instance.empirical_risk(counts)), axis=1)
        pos += size
    return _estimate(vals, seed)


def mi_decomposition(learner: FiniteLearner, prior: np.ndarray, pz, n: int) -> dict:
    """I(W;Z^n), E D(f(.|Z^n) || prior) and D(f_W || prior) by type enumeration."""
    pz = _check_pmf(pz)
    counts = compositions(n, pz.size)
    weights = np.exp(type_log_probs(counts, pz))
    post = learner.pmf(counts)
    pw = weights @ post
    mi = float(np.sum(weights * np.sum(_xlogy_ratio(post, pw[None, :]), axis=1)))
    mean_kl = float(np.sum(weights * np.sum(_xlogy_ratio(post, prior[None, :]), axis=1)))
    marginal_kl = float(np.sum(_xlogy_ratio(pw, prior)))
    return {"mi": mi, "mean_kl": mean_kl, "marginal_kl": marginal_kl}


# ---------------------------------------------------------------------------
# Gibbs algorithm
# ---------------------------------------------------------------------------


@dataclass
class GibbsConfig:
    """Inverse temperature, prior and loss for the Gibbs algorithm.

    prior ``finite``: ``prior_pmf`` over models and ``loss_table`` (|W|, |Z|);
    data are count vectors.  prior ``grid``: ``grid`` points in R, density
    ``prior_density`` on the grid and ``risk_fn(grid, data)``.  prior
    ``normal``: N(0, I_d); ``loss`` is ``"squared_mean"`` for the closed form
    (loss(z, w) = ||w - z||^2 / 2) or a callable ``risk_fn(w, data)`` for MCMC.
    """

    beta: float
    prior: str = "finite"
    dim: int = 1
    prior_pmf: np.ndarray | None = None
    loss_table: np.ndarray | None = None
    grid: np.ndarray | None = None
    prior_density: np.ndarray | None = None
    loss: str | None = None
    risk_fn: Callable | None = None

    def __post_init__(self):
        if self.beta < 0 or not math.isfinite(self.beta):
            raise DomainError("beta must be finite and >= 0")
        if self.prior not in ("finite", "grid", "normal"):
            raise DomainError(f"unknown prior {self.prior!r}")
        if self.prior == "grid":
            mass = integrate.trapezoid(self.prior_density, self.grid)
            if not abs(mass - 1.0) <= 1e-6:
                raise DomainError(f"grid prior integrates to {mass}, not 1")


@dataclass
class RandomizedLearner:
    kind: str
    description: str
    pmf: np.ndarray | None = None
    grid: np.ndarray | None = None
    density: np.ndarray | None = None
    mean: np.ndarray | None = None
    var: np.ndarray | None = None
    samples: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)


def _scores(config: GibbsConfig, data) -> tuple[np.ndarray, np.ndarray]:
    """(-beta * empirical risk, log prior weight) on the finite support or grid."""
    if config.prior == "finite":
        table = np.asarray(config.loss_table, dtype=float)
        counts = np.asarray(data, dtype=float)
        risk = table @ counts / counts.sum()
        prior = _uniform(table.shape[0]) if config.prior_pmf is None else _check_pmf(config.prior_pmf)
        return -config.beta * risk, _safe_log(prior)
    if config.prior == "grid":
        risk = np.asarray(config.risk_fn(config.grid, data), dtype=float)
        return -config.beta * risk, _safe_log(np.asarray(config.prior_density, dtype=float))
    raise CapabilityError("scores are defined for finite and grid priors")


def log_partition(config: GibbsConfig, data) -> float:
    """ln of the normalizer of exp(-beta L_n(w)) prior(w)."""
    s, lp = _scores(config, data)
    if config.prior == "finite":
        return float(special.logsumexp(s + lp))
    top = float(np.max(s + lp))
    return top + math.log(integrate.trapezoid(np.exp(s + lp - top), config.grid))


def gibbs_posterior(config: GibbsConfig, data, seed: int = 0, steps: int = 20_000) -> RandomizedLearner:
    if config.prior == "finite":
        s, lp = _scores(config, data)
        return RandomizedLearner("finite_exact", f"gibbs(beta={config.beta})", pmf=_softmax(s + lp))
    if config.prior == "grid":
        s, lp = _scores(config, data)
        a = s + lp
        dens = np.exp(a - np.max(a))
        dens /= integrate.trapezoid(dens, config.grid)
        return RandomizedLearner("grid", f"gibbs(beta={config.beta})", grid=config.grid, density=dens)
    if config.loss == "squared_mean":
        zbar = np.atleast_2d(np.asarray(data, dtype=float)).reshape(-1, config.dim).mean(axis=0)
        prec = 1.0 + config.beta
        return RandomizedLearner("gaussian_closed_form", f"gibbs(beta={config.beta})",
                                 mean=config.beta * zbar / prec, var=np.full(config.dim, 1.0 / prec))
    if config.risk_fn is None:
        raise CapabilityError("MCMC needs a risk function")
    return metropolis(lambda w: -config.beta * config.risk_fn(w, data) - 0.5 * float(w @ w),
                      config.dim, steps, seed, config.beta)


def metropolis(log_target: Callable[[np.ndarray], float], dim: int, steps: int, seed: int,
               beta: float = 1.0, thin: int = 1) -> RandomizedLearner:
    """Random-walk Metropolis with proposal scale tuned toward acceptance 0.3-0.5 during burn-in."""
    rng = substream(seed, tag("mcmc"))
    burn = max(10 * dim * math.ceil(max(beta, 1.0)), 2000)
    w = np.zeros(dim)
    lt = log_target(w)
    scale = 2.4 / math.sqrt(dim)
    accepted = 0
    window = 0
    for t in range(burn):
        prop = w + scale * rng.standard_normal(dim)
        lp = log_target(prop)
        if math.log(rng.random()) < lp - lt:
            w, lt = prop, lp
            accepted += 1
        window += 1
        if window == 100:
            rate = accepted / window
            if rate < 0.3:
                scale *= 0.8
            elif rate > 0.5:
                scale *= 1.25
            accepted = window = 0
    out = np.empty((steps // thin, dim))
    acc = 0
    for t in range(steps):
        prop = w + scale * rng.standard_normal(dim)
        lp = log_target(prop)
        if math.log(rng.random()) < lp - lt:
            w, lt = prop, lp
            acc += 1
        if t % thin == 0 and t // thin < out.shape[0]:
            out[t // thin] = w
    diag = {"acceptance": acc / steps, "scale": scale, "burn_in": burn, "thin": thin}
    diag.update(batch_means(out))
    return RandomizedLearner("mcmc_sampler", "random-walk Metropolis", samples=out,
                             mean=out.mean(axis=0), var=out.var(axis=0, ddof=1), diagnostics=diag)


def batch_means(samples: np.ndarray, n_batches: int = 50) -> dict:
    """Batch-means standard errors of the mean and of the second central moment."""
    b = samples.shape[0] // n_batches
    x = samples[: b * n_batches]
    mu = x.mean(axis=0)
    means = x.reshape(n_batches, b, -1).mean(axis=1)
    sq = ((x - mu) ** 2).reshape(n_batches, b, -1).mean(axis=1)
    return {
        "se_mean": (means.std(axis=0, ddof=1) / math.sqrt(n_batches)).tolist(),
        "se_var": (sq.std(axis=0, ddof=1) / math.sqrt(n_batches)).tolist(),
        "ess_proxy": float(np.mean(samples.var(axis=0) / np.maximum(
            (means.std(axis=0, ddof=1) ** 2) * b, 1e-300)) * samples.shape[0]),
    }


def neighbor_kl_max(instance: FiniteInstance, beta: float, n: int, prior: np.ndarray | None = None) -> dict:
    """Largest exact D(f(.|z^n) || f(.|z'^n)) over all types and single-symbol swaps."""
    learner = gibbs_learner(instance, beta, prior)
    counts = compositions(n, instance.n_symbols)
    post = learner.pmf(counts)
    worst, pairs = 0.0, 0
    for a in range(instance.n_symbols):
        has = counts[:, a] > 0
        for b in range(instance.n_symbols):
            if a == b:
                continue
            c = counts[has].copy()
            c[:, a] -= 1
            c[:, b] += 1
            kl = np.sum(_xlogy_ratio(post[has], learner.pmf(c)), axis=1)
            worst = max(worst, float(kl.max()))
            pairs += int(has.sum())
    return {"max_kl": worst, "pairs": pairs, "bound": beta**2 / (2.0 * n * n)}


def gibbs_objective(g: np.ndarray, emp_risk: np.ndarray, prior: np.ndarray, beta: float) -> float:
    """E_g L_n + D(g || prior) / beta."""
    return float(g @ emp_risk + np.sum(_xlogy_ratio(g, prior)) / beta)


def gibbs_bounds(beta: float, n: int, request: str, sigma2: float | None = None, d: int | None = None,
                 A: float | None = None, instance: FiniteInstance | None = None,
                 prior: np.ndarray | None = None, draws: int = 200, seed: int = 0) -> GenBoundReport:
    """Gibbs generalization and risk bounds.

    ``gen``: beta / (2n) for losses in [0, 1].  ``risk``: the additive overhead
    (d/beta) ln(A beta / d) + beta sigma2 / (2n); A is user supplied.
    ``risk_exact``: Monte Carlo estimate of -(1/beta) E ln E_prior exp(-beta L_n) +
    beta sigma2 / (2n) on a finite instance.
    """
    if beta <= 0 or n < 1:
        raise DomainError("need beta > 0 and n >= 1")
    if request == "gen":
        return GenBoundReport("gibbs_gen", beta / (2.0 * n), {"beta": beta, "n": n})
    if request == "risk":
        if A is None or A <= 0 or d is None or d < 1 or sigma2 is None:
            raise DomainError("risk needs sigma2, d >= 1 and a user-supplied A > 0")
        ratio = A * beta / d
        value = d / beta * math.log(ratio) + beta * sigma2 / (2.0 * n)
        params = {"beta": beta, "n": n, "sigma2": sigma2, "d": d, "A": A, "log_term_negative": ratio <= 1}
        return GenBoundReport("gibbs_risk_overhead", value, params)
    if request == "risk_exact":
        if instance is None or sigma2 is None:
            raise DomainError("risk_exact needs a finite instance and sigma2")
        if draws < 200:
            raise DomainError("risk_exact averages over at least 200 dataset draws")
        prior = _uniform(instance.n_models) if prior is None else _check_pmf(prior)
        counts = instance.sample_counts(substream(seed, tag("risk-exact"), n), n, draws)
        emp = instance.empirical_risk(counts)
        first = -special.logsumexp(-beta * emp + _safe_log(prior)[None, :], axis=1) / beta
        est = _estimate(first, seed)
        value = est.mean + beta * sigma2 / (2.0 * n)
        return GenBoundReport("gibbs_risk_exact", value, {"beta": beta, "n": n, "sigma2": sigma2,
                                                           "se": est.se, "draws": draws})
    raise DomainError(f"unknown request {request!r}")


# ---------------------------------------------------------------------------
# relative entropy and PAC-Bayes
# ---------------------------------------------------------------------------


def kl_finite(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(np.sum(_xlogy_ratio(p, q)))


def kl_gaussian(mean1, var1, mean0, var0) -> float:
    """D(N(mean1, diag var1) || N(mean0, diag var0)) in nats."""
    m1, v1, m0, v0 = (np.atleast_1d(np.asarray(a, dtype=float)) for a in (mean1, var1, mean0, var0))
    return float(0.5 * np.sum(v1 / v0 + (m1 - m0) ** 2 / v0 - 1.0 - np.log(v1 / v0)))


def kl_posterior_prior(learner: RandomizedLearner, prior=None) -> float:
    """D(posterior || prior); infinite when the posterior charges a prior-null set."""
    if learner.kind == "finite_exact":
        q = _uniform(learner.pmf.size) if prior is None else np.asarray(prior, dtype=float)
        return kl_finite(learner.pmf, q)
    if learner.kind == "gaussian_closed_form":
        d = learner.mean.size
        return kl_gaussian(learner.mean, learner.var, np.zeros(d), np.ones(d))
    raise CapabilityError(f"KL is computed for finite and closed-form posteriors, not {learner.kind}")


@dataclass(frozen=True)
class DvReport:
    kl: float
    max_lhs: float
    equality_gap: float
    violations: int
    samples: int

    def as_dict(self) -> dict:
        return {"kl": self.kl, "max_lhs": self.max_lhs, "equality_gap": self.equality_gap,
                "violations": self.violations, "samples": self.samples}


def dv_objective(p: np.ndarray, q: np.ndarray, psi: np.ndarray) -> float:
    return float(p @ psi - special.logsumexp(psi, b=q))


def dv_variational_check(p, q, psi_samples: int, seed: int, scale: float = 3.0) -> DvReport:
    """Check E_p psi - ln E_q e^psi <= D(p||q), with equality at psi = ln(p/q)."""
    p = _check_pmf(p)
    q = _check_pmf(q)
    if np.any((q == 0) & (p > 0)):
        raise DomainError("q must be positive on the support of p")
    kl = kl_finite(p, q)
    rng = substream(seed, tag("dv-check"))
    psis = scale * rng.standard_normal((psi_samples, p.size))
    vals = np.array([dv_objective(p, q, s) for s in psis])
    with np.errstate(divide="ignore"):
        opt = np.where(p > 0, np.log(p / q), -1e300)
    gap = abs(dv_objective(p, q, opt) - kl)
    return DvReport(kl, float(vals.max()), gap, int(np.sum(vals > kl + 1e-12)), psi_samples)


def pac_bayes_bound(sigma2: float, n: int, kl: float, delta: float) -> float:
    """sqrt((2 sigma2 / (n-1)) (KL + ln(n)/2 + ln(1/delta)))."""
    if n < 2:
        raise DomainError("PAC-Bayes needs n >= 2")
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    if kl < 0:
        raise DomainError("KL must be >= 0")
    return math.sqrt(2.0 * sigma2 / (n - 1) * (kl + 0.5 * math.log(n) + math.log(1.0 / delta)))


@dataclass(frozen=True)
class CoverageReport:
    draws: int
    holds: int
    frequency: float
    delta: float
    target: float

    def as_dict(self) -> dict:
        return {"draws": self.draws, "holds": self.holds, "frequency": self.frequency,
                "delta": self.delta, "target": self.target}


def pac_bayes_coverage(instance: FiniteInstance, beta: float, n: int, delta: float, draws: int,
                       seed: int, sigma2: float = 0.25, prior: np.ndarray | None = None) -> CoverageReport:
    """Frequency over dataset draws that E_posterior |L(W) - L_n(W)| obeys the PAC-Bayes bound."""
    prior = _uniform(instance.n_models) if prior is None else _check_pmf(prior)
    learner = gibbs_learner(instance, beta, prior)
    risk = instance.risk()
    counts = instance.sample_counts(substream(seed, tag("pac-bayes"), n), n, draws)
    post = learner.pmf(counts)
    gap = np.sum(post * np.abs(risk[None, :] - instance.empirical_risk(counts)), axis=1)
    kls = np.sum(_xlogy_ratio(post, prior[None, :]), axis=1)
    bounds = np.array([pac_bayes_bound(sigma2, n, k, delta) for k in kls])
    holds = int(np.sum(gap <= bounds))
    return CoverageReport(draws, holds, holds / draws, delta, 1.0 - delta - 0.02)
