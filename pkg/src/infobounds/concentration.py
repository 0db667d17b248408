"""Subgaussian calculus: variance proxies, tail bounds, maximal inequalities.

All logarithms are natural.  Probabilities are clamped to [0, 1]; the
unclamped value is kept on ``TailBound.raw`` for composing bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .errors import ConfigurationError, DomainError
from .rng import blocks, substream, tag

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class SubgaussianSpec:
    """Mean and variance proxy of a subgaussian random variable.

    ``mean`` may be ``None`` when only the proxy is known (as returned by
    :func:`hoeffding_proxy`).
    """

    variance_proxy: float
    mean: float | None = 0.0

    def __post_init__(self):
        if not (self.variance_proxy > 0) or not math.isfinite(self.variance_proxy):
            raise DomainError(f"variance proxy must be positive and finite, got {self.variance_proxy}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance_proxy)


@dataclass(frozen=True)
class DegenerateConstant:
    """Marker for a point mass; it has no positive variance proxy."""

    value: float


@dataclass(frozen=True)
class TailBound:
    epsilon: float
    value: float
    raw: float
    sided: str
    variant: str


@dataclass(frozen=True)
class McTailReport:
    trials: int
    hits: int
    frequency: float
    hoeffding_halfwidth: float
    seed: int
    alpha: float
    threshold: float
    statistic: str

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "hits": self.hits,
            "frequency": self.frequency,
            "hoeffding_halfwidth": self.hoeffding_halfwidth,
            "seed": self.seed,
            "alpha": self.alpha,
            "threshold": self.threshold,
            "statistic": self.statistic,
        }


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def subgaussian_tail_bound(spec: SubgaussianSpec, epsilon: float, variant: str = "chernoff",
                           n: int = 1) -> TailBound:
    """Tail bound for X (n=1) or for the mean of n i.i.d. copies.

    ``chernoff`` is the one-sided bound exp(-n eps^2 / 2 sigma^2);
    ``two_sided`` doubles it; ``sharp_gaussian`` multiplies the two-sided
    exponent by 2 sigma / (eps sqrt(2 pi n)) and is only valid for Gaussians.
    """
    if epsilon < 0:
        raise DomainError("epsilon must be >= 0")
    if n < 1:
        raise DomainError("n must be >= 1")
    s2 = spec.variance_proxy
    expo = math.exp(-n * epsilon**2 / (2.0 * s2))
    if variant == "chernoff":
        raw, sided = expo, "one_sided_upper"
    elif variant == "two_sided":
        raw, sided = 2.0 * expo, "two_sided"
    elif variant == "sharp_gaussian":
        if epsilon == 0:
            raise ZeroDivisionError("the Mills-ratio form is undefined at epsilon = 0")
        raw = 2.0 * math.sqrt(s2) / (epsilon * math.sqrt(2.0 * math.pi * n)) * expo
        sided = "two_sided"
    else:
        raise DomainError(f"unknown variant {variant!r}")
    return TailBound(epsilon=float(epsilon), value=_clamp01(raw), raw=raw, sided=sided, variant=variant)


def gaussian_tail_sandwich(sigma2: float, a: float) -> tuple[float, float]:
    """Lower and upper bounds on Pr{Z >= a} for Z ~ N(0, sigma2).

    The threshold is first expressed in units of sigma (x = a / sigma) and the
    unit-variance inequality is applied to x.
    """
    if not a > 0:
        raise DomainError("a must be positive")
    if not sigma2 > 0:
        raise DomainError("sigma2 must be positive")
    x = a / math.sqrt(sigma2)
    dens = math.exp(-x * x / 2.0) / SQRT_2PI
    upper = dens / x
    lower = dens / (x * (1.0 + 1.0 / (x * x)))
    return lower, upper


def gaussian_tail_quadrature(sigma2: float, a: float) -> float:
    """Pr{Z >= a} by adaptive quadrature of the density (independent oracle)."""
    from scipy.integrate import quad

    s = math.sqrt(sigma2)
    x = a / s
    val, _ = quad(lambda t: math.exp(-t * t / 2.0) / SQRT_2PI, x, np.inf, epsabs=1e-14, epsrel=1e-12)
    return val


def hoeffding_proxy(a: float, b: float) -> SubgaussianSpec | DegenerateConstant:
    """Variance proxy (b - a)^2 / 4 of a random variable supported on [a, b]."""
    if a > b:
        raise DomainError("need a <= b")
    if a == b:
        return DegenerateConstant(float(a))
    return SubgaussianSpec(variance_proxy=(b - a) ** 2 / 4.0, mean=None)


def proxy_algebra(specs: Sequence[SubgaussianSpec], weights: Sequence[float],
                  independent: bool) -> SubgaussianSpec:
    """Proxy of sum_i a_i X_i.

    Independent summands add proxies; otherwise the standard deviations add
    (Hoelder), giving (sum |a_i| sigma_i)^2.
    """
    if len(specs) == 0:
        raise DomainError("need at least one summand")
    if len(specs) != len(weights):
        raise DomainError("specs and weights must have equal length")
    if independent:
        proxy = sum(w * w * s.variance_proxy for s, w in zip(specs, weights))
    else:
        proxy = sum(abs(w) * s.sigma for s, w in zip(specs, weights)) ** 2
    if any(s.mean is None for s in specs):
        mean = None
    else:
        mean = float(sum(w * s.mean for s, w in zip(specs, weights)))
    return SubgaussianSpec(variance_proxy=proxy, mean=mean)


def square_mgf_bound(sigma2: float, lam: float) -> float:
    """Bound 1/sqrt(1 - 2 lam sigma2) on E exp(lam X^2)."""
    if sigma2 <= 0:
        raise DomainError("sigma2 must be positive")
    if lam < 0 or lam >= 1.0 / (2.0 * sigma2):
        raise DomainError("need 0 <= lambda < 1/(2 sigma2); the MGF of the square diverges")
    return 1.0 / math.sqrt(1.0 - 2.0 * lam * sigma2)


def maximal_bounds(sigma2: float, n: int, epsilon: float = 0.0, kind: str = "expectation") -> float:
    """Maximal inequalities for n (possibly dependent) sigma2-subgaussian variables."""
    if n < 2:
        raise DomainError("maximal inequalities need n >= 2")
    if sigma2 <= 0:
        raise DomainError("sigma2 must be positive")
    if kind == "expectation":
        return math.sqrt(2.0 * sigma2 * math.log(n))
    if kind == "expectation_abs":
        return math.sqrt(2.0 * sigma2 * math.log(2 * n))
    if kind == "tail":
        if epsilon < 0:
            raise DomainError("epsilon must be >= 0")
        return _clamp01(math.exp(-epsilon**2 / (2.0 * sigma2)))
    raise DomainError(f"unknown kind {kind!r}")


def hoeffding_inequality(ranges: Sequence[tuple[float, float]], epsilon: float) -> float:
    """min(1, 2 exp(-2 n^2 eps^2 / sum (b_i - a_i)^2)) for the sample mean."""
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    widths = []
    for a, b in ranges:
        if a > b:
            raise DomainError("each range needs a <= b")
        widths.append(b - a)
    total = sum(w * w for w in widths)
    if total == 0:
        raise DomainError("all ranges are degenerate")
    n = len(widths)
    return _clamp01(2.0 * math.exp(-2.0 * n * n * epsilon**2 / total))


def hoeffding_halfwidth(trials: int, alpha: float = 1e-3) -> float:
    """Confidence radius for a frequency of [0, 1] indicators."""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * trials))


# ---------------------------------------------------------------------------
# scalar sources with known proxies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarSource:
    """A seeded scalar sampler together with its mean and variance proxy."""

    name: str
    mean: float
    variance_proxy: float
    draw: Callable[[np.random.Generator, tuple], np.ndarray] = field(repr=False, compare=False)

    @property
    def spec(self) -> SubgaussianSpec:
        return SubgaussianSpec(self.variance_proxy, self.mean)


def gaussian_source(mean: float = 0.0, sigma2: float = 1.0) -> ScalarSource:
    s = math.sqrt(sigma2)
    return ScalarSource("gaussian", mean, sigma2, lambda rng, shape: rng.normal(mean, s, size=shape))


def rademacher_source() -> ScalarSource:
    return ScalarSource("rademacher", 0.0, 1.0,
                        lambda rng, shape: rng.integers(0, 2, size=shape, dtype=np.int8) * 2.0 - 1.0)


def uniform_source(a: float = 0.0, b: float = 1.0) -> ScalarSource:
    return ScalarSource("uniform", (a + b) / 2.0, (b - a) ** 2 / 4.0,
                        lambda rng, shape: rng.uniform(a, b, size=shape))


SOURCES = {
    "gaussian": gaussian_source,
    "rademacher": rademacher_source,
    "uniform": uniform_source,
}


def empirical_tail_check(source: ScalarSource, epsilon: float, trials: int, seed: int,
                         sample_size: int | None = None, alpha: float = 1e-3) -> McTailReport:
    """Monte Carlo frequency of {statistic >= mean + epsilon}.

    The statistic is a raw draw when ``sample_size`` is None, otherwise the
    mean of ``sample_size`` draws.  Trials are drawn in fixed blocks, each from
    its own counter-derived substream.
    """
    if trials < 1000:
        raise ConfigurationError("trials must be >= 1000 for a meaningful confidence radius")
    threshold = source.mean + epsilon
    hits = 0
    stream = tag("tail-check")
    for idx, size in blocks(trials):
        rng = substream(seed, stream, idx)
        if sample_size is None:
            x = source.draw(rng, (size,))
        else:
            x = source.draw(rng, (size, sample_size)).mean(axis=1)
        hits += int(np.count_nonzero(x >= threshold))
    statistic = "raw" if sample_size is None else f"sample_mean({sample_size})"
    return McTailReport(trials=trials, hits=hits, frequency=hits / trials,
                        hoeffding_halfwidth=hoeffding_halfwidth(trials, alpha), seed=int(seed),
                        alpha=alpha, threshold=threshold, statistic=statistic)


def gaussian_sf(sigma2: float, a: float) -> float:
    """Exact Gaussian tail via scipy's survival function."""
    return float(stats.norm.sf(a / math.sqrt(sigma2)))
