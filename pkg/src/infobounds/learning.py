"""Learning framework: empirical risk, ERM, generalization gaps, Rademacher
complexity, data-dependent entropy bounds, shatter coefficients and VC tools.

Models of a finite class are referred to by index.  Linear classifiers are
``1{w^T x >= 0}`` on feature vectors x in R^K; a bias is handled by appending a
constant coordinate to x (:func:`with_bias`), so every half-space is
homogeneous.  The weight vector w = 0 belongs to the class and labels every
point 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy import optimize

from .errors import CapabilityError, ConfigurationError, DomainError, SizeError
from .rng import blocks, substream, tag

EXACT_RADEMACHER_MAX_N = 20
CLASSIFIER_MAX_N = 20
CLASSIFIER_MAX_K = 4
BOUNDARY_TOL = 1e-12


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass
class Dataset:
    """n samples: features ``x`` (n, ...) and optional targets ``y`` (n,)."""

    x: np.ndarray
    y: np.ndarray | None = None
    seed: int | None = None
    index: int | None = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        if self.x.ndim == 1:
            self.x = self.x[:, None]
        if self.y is not None:
            self.y = np.asarray(self.y, dtype=float)
            if self.y.shape[0] != self.x.shape[0]:
                raise DomainError("x and y must have the same number of samples")

    @property
    def n(self) -> int:
        return int(self.x.shape[0])


@dataclass
class ModelClass:
    """A model class.

    kind is one of ``finite`` (``models`` is a list), ``linear_classifier``
    (``dim``), ``linear_regressor`` (``dim``, ``radius``) or
    ``lipschitz_param`` (``constant`` c of the empirical Lipschitz condition).
    """

    kind: str
    models: list | None = None
    dim: int | None = None
    radius: float | None = None
    constant: float | None = None

    def __post_init__(self):
        if self.kind not in ("finite", "linear_classifier", "linear_regressor", "lipschitz_param"):
            raise DomainError(f"unknown model class kind {self.kind!r}")
        if self.kind == "finite" and not self.models:
            raise DomainError("a finite class needs at least one model")
        if self.kind in ("linear_classifier", "linear_regressor") and (self.dim is None or self.dim < 1):
            raise DomainError("linear classes need dim >= 1")
        if self.kind == "linear_regressor" and not (self.radius is not None and self.radius > 0):
            raise DomainError("linear_regressor needs a positive radius")

    @property
    def size(self) -> int | None:
        return len(self.models) if self.kind == "finite" else None


Loss = Callable[[Dataset, Any], np.ndarray]


@dataclass
class LearningProblem:
    """Data sampler, model class and per-sample loss, plus optional oracles.

    ``loss(data, w)`` returns the vector of per-sample losses.
    ``risk_sampler(rng, trials, n)``, when present, draws the (trials, |W|)
    matrix of empirical risks directly; it must match the law of
    ``loss`` applied to ``sampler`` datasets and is used only for speed.
    """

    name: str
    sampler: Callable[[np.random.Generator, int], Dataset]
    model_class: ModelClass
    loss: Loss
    true_risk: Callable[[Any], float] | None = None
    loss_range: tuple[float, float] | None = None
    risk_sampler: Callable[[np.random.Generator, int, int], np.ndarray] | None = field(default=None, repr=False)

    def draw(self, seed: int, index: int, n: int) -> Dataset:
        data = self.sampler(substream(seed, tag("dataset"), index), n)
        data.seed, data.index = int(seed), int(index)
        return data


@dataclass(frozen=True)
class GenBoundReport:
    bound_name: str
    value: float
    parameters: dict
    log_base: str = "e"

    def as_dict(self) -> dict:
        return {"bound_name": self.bound_name, "value": self.value,
                "parameters": dict(self.parameters), "log_base": self.log_base}


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its standard error."""

    mean: float
    se: float
    trials: int
    seed: int | None = None

    def as_dict(self) -> dict:
        return {"mean": self.mean, "se": self.se, "trials": self.trials, "seed": self.seed}


def _estimate(values: np.ndarray, seed: int | None) -> McEstimate:
    values = np.asarray(values, dtype=float)
    t = values.size
    se = float(values.std(ddof=1) / math.sqrt(t)) if t > 1 else float("inf")
    return McEstimate(float(values.mean()), se, int(t), seed)


# ---------------------------------------------------------------------------
# losses and risks
# ---------------------------------------------------------------------------


def zero_one_loss(data: Dataset, w) -> np.ndarray:
    """0-1 loss of the linear classifier 1{w^T x >= 0} against labels y."""
    return (classify(w, data.x) != data.y).astype(float)


def squared_loss(data: Dataset, w) -> np.ndarray:
    return (data.y - data.x @ np.asarray(w, dtype=float)) ** 2


def _nonneg(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    # boundary points count as 0 up to a relative rounding tolerance
    tol = BOUNDARY_TOL * np.linalg.norm(x, axis=1) * np.linalg.norm(w)
    return x @ w >= -tol


def classify(w, x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return _nonneg(x, np.asarray(w, dtype=float)).astype(float)


def with_bias(x: np.ndarray) -> np.ndarray:
    """Append a constant 1 coordinate so affine half-spaces become homogeneous."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return np.hstack([x, np.ones((x.shape[0], 1))])


def empirical_risk(w, data: Dataset, loss: Loss) -> float:
    if data.n == 0:
        raise DomainError("empirical risk of an empty dataset is undefined")
    return float(np.mean(loss(data, w)))


def loss_matrix(model_class: ModelClass, data: Dataset, loss: Loss) -> np.ndarray:
    """(|W|, n) per-sample losses of every model of a finite class."""
    if model_class.kind != "finite":
        raise CapabilityError("loss_matrix needs a finite class")
    return np.vstack([np.asarray(loss(data, w), dtype=float) for w in model_class.models])


# ---------------------------------------------------------------------------
# ERM
# ---------------------------------------------------------------------------


def erm(model_class: ModelClass, data: Dataset, loss: Loss):
    """Empirical risk minimizer and its empirical risk.

    Finite classes return the lowest index among minimizers.  Linear
    classifiers are searched exhaustively over realizable labelings; among
    minimizers the lexicographically smallest unit representative is kept.
    Linear regressors solve the radius-constrained least squares problem.
    """
    if data.n == 0:
        raise DomainError("ERM on an empty dataset is undefined")
    if model_class.kind == "finite":
        risks = loss_matrix(model_class, data, loss).mean(axis=1)
        j = int(np.argmin(risks))
        return j, float(risks[j])
    if model_class.kind == "linear_classifier":
        _check_classifier(model_class, data.n)
        best_w, best = None, math.inf
        for w in sorted(labelings(data.x).values(), key=tuple):
            r = empirical_risk(w, data, loss)
            if r < best - 1e-15:
                best_w, best = w, r
        return best_w, float(best)
    if model_class.kind == "linear_regressor":
        w = constrained_least_squares(data.x, data.y, model_class.radius)
        return w, empirical_risk(w, data, loss)
    raise CapabilityError(f"ERM is not supported for {model_class.kind}")


def constrained_least_squares(x: np.ndarray, y: np.ndarray, radius: float) -> np.ndarray:
    """argmin ||y - x w||^2 subject to ||w|| <= radius.

    Interior solutions are plain least squares; otherwise the multiplier of the
    ball constraint is found by root finding on ||w(lam)|| = radius.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w, *_ = np.linalg.lstsq(x, y, rcond=None)
    if np.linalg.norm(w) <= radius:
        return w
    u, s, vt = np.linalg.svd(x, full_matrices=False)
    c = s * (u.T @ y)

    def norm_gap(lam):
        return float(np.linalg.norm(c / (s**2 + lam))) - radius

    hi = 1.0
    while norm_gap(hi) > 0:
        hi *= 2.0
    lam = optimize.brentq(norm_gap, 0.0, hi, xtol=1e-14, rtol=1e-14)
    return vt.T @ (c / (s**2 + lam))


# ---------------------------------------------------------------------------
# realizable labelings of homogeneous half-spaces
# ---------------------------------------------------------------------------


def _check_classifier(model_class: ModelClass, n: int):
    if model_class.dim > CLASSIFIER_MAX_K or n > CLASSIFIER_MAX_N:
        raise CapabilityError(
            f"exhaustive half-space enumeration supports K <= {CLASSIFIER_MAX_K} and n <= {CLASSIFIER_MAX_N}")


def _pattern(w: np.ndarray, x: np.ndarray) -> int:
    bits = _nonneg(x, w)
    return int(np.sum(np.left_shift(1, np.nonzero(bits)[0]))) if bits.any() else 0


def _sub_labelings(x: np.ndarray) -> list[np.ndarray]:
    """Weight vectors realizing every labeling of the rows of x (including w = 0)."""
    n, d = x.shape
    out = [np.zeros(d)]
    if n == 0 or d == 0:
        return out
    scale = max(1.0, float(np.abs(x).max()))
    u, s, vt = np.linalg.svd(x, full_matrices=False)
    rank = int(np.sum(s > 1e-10 * scale))
    if rank == 0:
        return out
    basis = vt[:rank]
    z = x @ basis.T
    if n <= rank:
        # independent points: solve for every sign pattern directly
        for signs in itertools.product((-1.0, 1.0), repeat=n):
            v, *_ = np.linalg.lstsq(z, np.array(signs), rcond=None)
            out.append(basis.T @ v)
        return out
    for subset in itertools.combinations(range(n), rank - 1):
        if subset:
            _, ss, vv = np.linalg.svd(z[list(subset)])
            if np.sum(ss > 1e-10 * scale) < rank - 1:
                continue
            normal = vv[-1]
        else:
            normal = np.ones(1)
        for sign in (1.0, -1.0):
            ray = sign * normal
            proj = z @ ray
            on = np.abs(proj) <= 1e-9 * scale
            off = np.abs(proj[~on])
            margin = float(off.min()) if off.size else 1.0
            for sub in _sub_labelings(z[on]):
                reach = float(np.abs(z[on] @ sub).max()) if on.any() else 0.0
                eta = 0.25 * margin / reach if reach > 0 else 0.0
                out.append(basis.T @ (ray + eta * sub))
    return out


def labelings(x: np.ndarray) -> dict[int, np.ndarray]:
    """Map from realized label pattern (bitmask) to a weight vector realizing it.

    Every pattern is obtained by evaluating its representative, so the map is
    sound by construction.  Completeness follows because each realizable
    labeling is attained next to an extreme ray of its closed cone, and each
    ray is spanned by the normal of rank - 1 points; points lying on the ray's
    hyperplane are labeled recursively in the subspace they span.
    """
    x = np.asarray(x, dtype=float)
    out: dict[int, np.ndarray] = {}
    for w in _sub_labelings(x):
        norm = np.linalg.norm(w)
        w = w / norm if norm > 0 else w
        p = _pattern(w, x)
        if p not in out or tuple(w) < tuple(out[p]):
            out[p] = w
    return out


# ---------------------------------------------------------------------------
# worst-case generalization gap
# ---------------------------------------------------------------------------


def worst_case_gap_mc(problem: LearningProblem, n: int, trials: int, seed: int) -> McEstimate:
    """Monte Carlo estimate of E sup_w |L(w) - L_n(w)| over a finite class."""
    if problem.true_risk is None:
        raise CapabilityError("worst-case gap needs the exact risk L(w)")
    if problem.model_class.kind != "finite":
        raise CapabilityError("worst-case gap is computed for finite classes")
    risks = np.array([problem.true_risk(w) for w in problem.model_class.models])
    gaps = np.empty(trials)
    if problem.risk_sampler is not None:
        stream = tag("gap-fast")
        pos = 0
        for idx, size in blocks(trials):
            emp = problem.risk_sampler(substream(seed, stream, n, idx), size, n)
            gaps[pos:pos + size] = np.abs(emp - risks).max(axis=1)
            pos += size
    else:
        for t in range(trials):
            data = problem.draw(seed, t, n)
            emp = loss_matrix(problem.model_class, data, problem.loss).mean(axis=1)
            gaps[t] = np.abs(emp - risks).max()
    return _estimate(gaps, seed)


def excess_risk_decomposition(problem: LearningProblem, data: Dataset, w_index: int) -> dict:
    """Three-term split of L(W) - L(w*) for a finite class with exact risks."""
    if problem.true_risk is None or problem.model_class.kind != "finite":
        raise CapabilityError("decomposition needs a finite class with exact risks")
    models = problem.model_class.models
    risks = np.array([problem.true_risk(w) for w in models])
    emp = loss_matrix(problem.model_class, data, problem.loss).mean(axis=1)
    star = int(np.argmin(risks))
    terms = {
        "generalization": float(risks[w_index] - emp[w_index]),
        "optimization": float(emp[w_index] - emp[star]),
        "estimation": float(emp[star] - risks[star]),
    }
    terms["excess"] = float(risks[w_index] - risks[star])
    terms["w_star"] = star
    return terms


def finite_class_bound(sigma2: float, class_size: int, n: int) -> GenBoundReport:
    """2 sigma sqrt(ln|W| / n) on the expected worst-case gap."""
    if class_size < 2:
        raise DomainError("the finite-class bound needs |W| >= 2")
    if n < 1 or sigma2 <= 0:
        raise DomainError("need n >= 1 and sigma2 > 0")
    value = 2.0 * math.sqrt(sigma2) * math.sqrt(math.log(class_size) / n)
    return GenBoundReport("finite_class", value, {"sigma2": sigma2, "class_size": class_size, "n": n})


# ---------------------------------------------------------------------------
# Rademacher complexity
# ---------------------------------------------------------------------------


def _class_losses(model_class: ModelClass, data: Dataset, loss: Loss) -> np.ndarray:
    if model_class.kind == "finite":
        return loss_matrix(model_class, data, loss)
    if model_class.kind == "linear_classifier":
        _check_classifier(model_class, data.n)
        rows = {tuple(np.asarray(loss(data, w), dtype=float)) for w in labelings(data.x).values()}
        return np.array(sorted(rows))
    raise CapabilityError(f"Rademacher complexity is not available for {model_class.kind}")


def _sup_corr(signs: np.ndarray, losses: np.ndarray) -> np.ndarray:
    return np.abs(signs @ losses.T).max(axis=1) / losses.shape[1]


def rademacher(model_class: ModelClass, data: Dataset, loss: Loss, method: str = "exact",
               trials: int = 100_000, seed: int = 0):
    """Empirical Rademacher complexity E_eps sup_w |(1/n) sum eps_i l(z_i, w)|.

    ``exact`` enumerates all 2^n sign vectors and returns a float; ``mc``
    returns an :class:`McEstimate`.
    """
    losses = _class_losses(model_class, data, loss)
    n = data.n
    if method == "exact":
        if n > EXACT_RADEMACHER_MAX_N:
            raise SizeError(f"exact Rademacher enumeration needs n <= {EXACT_RADEMACHER_MAX_N}")
        total = 0.0
        chunk = 1 << min(n, 14)
        bits = np.arange(n)
        for start in range(0, 1 << n, chunk):
            codes = np.arange(start, min(start + chunk, 1 << n))
            signs = ((codes[:, None] >> bits) & 1) * 2.0 - 1.0
            total += float(_sup_corr(signs, losses).sum())
        return total / (1 << n)
    if method == "mc":
        if trials < 100:
            raise ConfigurationError("Monte Carlo Rademacher needs trials >= 100")
        vals = np.empty(trials)
        pos = 0
        for idx, size in blocks(trials):
            rng = substream(seed, tag("rademacher"), idx)
            signs = rng.integers(0, 2, size=(size, n), dtype=np.int8) * 2.0 - 1.0
            vals[pos:pos + size] = _sup_corr(signs, losses)
            pos += size
        return _estimate(vals, seed)
    raise DomainError(f"unknown method {method!r}")


def linreg_rademacher_bound(data: Dataset, r: float, b: float) -> GenBoundReport:
    """(4b/n)(sqrt(sum y^2) + r sqrt(sum ||x||^2)) for squared loss on a radius-r ball."""
    if data.n == 0:
        raise DomainError("empty dataset")
    x, y = data.x, data.y
    need = float(np.abs(y).max() + r * np.linalg.norm(x, axis=1).max())
    if b < need - 1e-12:
        raise DomainError(f"b must be at least max|y| + r max||x|| = {need}")
    value = 4.0 * b / data.n * (math.sqrt(float(np.sum(y**2))) + r * math.sqrt(float(np.sum(x**2))))
    return GenBoundReport("linreg_rademacher", value, {"r": r, "b": b, "n": data.n})


# ---------------------------------------------------------------------------
# data-dependent entropy bounds
# ---------------------------------------------------------------------------


def empirical_pseudometric(w, w_prime, data: Dataset, loss: Loss) -> float:
    diff = np.asarray(loss(data, w), dtype=float) - np.asarray(loss(data, w_prime), dtype=float)
    return float(np.sqrt(np.mean(diff**2)))


def _grid_min(values: np.ndarray, grid: np.ndarray):
    j = int(np.argmin(values))
    return float(values[j]), float(grid[j])


def _check_grid(delta_grid) -> np.ndarray:
    grid = np.asarray(delta_grid, dtype=float)
    if grid.size == 0:
        raise DomainError("the delta grid is empty")
    if np.any(grid <= 0):
        raise DomainError("every delta must be positive")
    return grid


def entropy_gen_bound(b: float, n: int, entropy_curve: Callable[[float], float],
                      delta_grid: Sequence[float]) -> GenBoundReport:
    """min over the grid of 2 delta + 6 b sqrt(H(delta) / n)."""
    if b <= 0:
        raise DomainError("b must be positive")
    grid = _check_grid(delta_grid)
    vals = np.array([2.0 * d + 6.0 * b * math.sqrt(max(entropy_curve(d), 0.0) / n) for d in grid])
    value, arg = _grid_min(vals, grid)
    return GenBoundReport("entropy_gen", value, {"b": b, "n": n, "delta": arg})


def lipschitz_class_bound(sigma: float, c: float, n: int, entropy_curve: Callable[[float], float],
                          delta_grid: Sequence[float]) -> GenBoundReport:
    """min over the grid of 2 delta + 2 sigma sqrt(H(delta / c) / n)."""
    if c <= 0 or sigma <= 0:
        raise DomainError("sigma and c must be positive")
    grid = _check_grid(delta_grid)
    vals = np.array([2.0 * d + 2.0 * sigma * math.sqrt(max(entropy_curve(d / c), 0.0) / n) for d in grid])
    value, arg = _grid_min(vals, grid)
    return GenBoundReport("lipschitz_class", value, {"sigma": sigma, "c": c, "n": n, "delta": arg})


# ---------------------------------------------------------------------------
# shatter coefficients and VC dimension
# ---------------------------------------------------------------------------


def shatter_coefficient(model_class: ModelClass, points, cap: int | None = None) -> tuple[int, bool]:
    """Number of distinct labelings of ``points`` realized by the class.

    Finite classes hold callables ``model(points) -> 0/1 array``.  The count is
    truncated at ``cap`` when given.
    """
    pts = np.asarray(points, dtype=float)
    m = 0 if pts.size == 0 else pts.shape[0]
    if m > CLASSIFIER_MAX_N:
        raise CapabilityError(f"shatter enumeration supports at most {CLASSIFIER_MAX_N} points")
    if m == 0:
        return 1, True
    if pts.ndim == 1:
        pts = pts[:, None]
    if model_class.kind == "finite":
        patterns = {tuple(np.asarray(f(pts)).astype(int)) for f in model_class.models}
        count = len(patterns)
    elif model_class.kind == "linear_classifier":
        if model_class.dim > CLASSIFIER_MAX_K or pts.shape[1] != model_class.dim:
            raise CapabilityError("points must match the classifier dimension K <= 4")
        count = len(labelings(pts))
    else:
        raise CapabilityError(f"shatter coefficients need classifiers, got {model_class.kind}")
    if cap is not None:
        count = min(count, cap)
    return count, count == 2**m


@dataclass(frozen=True)
class VcCertificate:
    lower: int
    witness: np.ndarray | None
    attempts: int
    seed: int


def vc_dimension_search(model_class: ModelClass, point_sampler: Callable[[np.random.Generator, int], np.ndarray],
                        max_n: int, attempts: int, seed: int) -> VcCertificate:
    """Largest m <= max_n for which a sampled m-point set is shattered.

    This is a certified lower bound on the VC dimension; shattering is
    hereditary, so the search stops at the first size with no shattered sample.
    """
    if max_n > 12:
        raise DomainError("max_n must be <= 12")
    best, witness = 0, None
    for m in range(1, max_n + 1):
        found = None
        for a in range(attempts):
            pts = np.asarray(point_sampler(substream(seed, tag("vc-search"), m, a), m), dtype=float)
            if shatter_coefficient(model_class, pts)[1]:
                found = pts
                break
        if found is None:
            break
        best, witness = m, found
    return VcCertificate(best, witness, attempts, int(seed))


def vc_tools(D: int, n: int, request: str, delta: float | None = None, c: float = 1.0) -> float:
    """Sauer bound (ne/D)^D, VC risk bound c sqrt(D/n), or entropy c D ln(1/delta).

    The constant c is left unspecified by the theory and defaults to 1.
    """
    if D < 1:
        raise DomainError("D must be >= 1")
    if request == "sauer":
        if n < D:
            raise DomainError("the Sauer bound needs n >= D")
        return (n * math.e / D) ** D
    if c <= 0:
        raise DomainError("c must be positive")
    if request == "vc_gen_bound":
        if n < 1:
            raise DomainError("n must be >= 1")
        return c * math.sqrt(D / n)
    if request == "vc_entropy":
        if delta is None or not 0 < delta < 1:
            raise DomainError("delta must lie in (0, 1)")
        return c * D * math.log(1.0 / delta)
    raise DomainError(f"unknown request {request!r}")


# ---------------------------------------------------------------------------
# built-in problems
# ---------------------------------------------------------------------------


def finite_bernoulli(k: int, means: Sequence[float] | None = None) -> LearningProblem:
    """k models whose losses are independent Bernoulli(p_j) coordinates of Z."""
    if k < 1:
        raise DomainError("k must be >= 1")
    p = np.linspace(0.1, 0.9, k) if means is None else np.asarray(means, dtype=float)
    if p.shape != (k,) or np.any((p < 0) | (p > 1)):
        raise DomainError("need k means in [0, 1]")

    def sampler(rng, n):
        return Dataset((rng.random((n, k)) < p).astype(float))

    def loss(data, j):
        return data.x[:, j]

    def risk_sampler(rng, trials, n):
        return rng.binomial(n, p, size=(trials, k)) / n

    return LearningProblem(f"finite-bernoulli:{k}", sampler, ModelClass("finite", models=list(range(k))),
                           loss, true_risk=lambda j: float(p[j]), loss_range=(0.0, 1.0),
                           risk_sampler=risk_sampler)


def halfspace2d(flip: float = 0.1, separation: float = 1.5) -> LearningProblem:
    """Two-component Gaussian mixture in R^2 labeled by a homogeneous half-space with flip noise."""
    w_star = np.array([1.0, -0.5])
    mu = separation * np.array([1.0, 1.0]) / math.sqrt(2.0)

    def sampler(rng, n):
        comp = rng.integers(0, 2, size=n) * 2.0 - 1.0
        x = comp[:, None] * mu + rng.standard_normal((n, 2))
        y = classify(w_star, x)
        flips = rng.random(n) < flip
        return Dataset(x, np.where(flips, 1.0 - y, y))

    return LearningProblem("halfspace2d", sampler, ModelClass("linear_classifier", dim=2),
                           zero_one_loss, loss_range=(0.0, 1.0))


def linreg_bounded(dim: int = 3, radius: float = 1.0, noise: float = 0.5) -> LearningProblem:
    """Features uniform in the unit ball, y = w*^T x + bounded uniform noise, ||w*|| = radius / 2."""
    w_star = np.full(dim, radius / (2.0 * math.sqrt(dim)))

    def sampler(rng, n):
        g = rng.standard_normal((n, dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        x = g * rng.random(n)[:, None] ** (1.0 / dim)
        y = x @ w_star + rng.uniform(-noise, noise, size=n)
        return Dataset(x, y)

    b = (np.linalg.norm(w_star) + noise) + radius
    return LearningProblem("linreg-bounded", sampler, ModelClass("linear_regressor", dim=dim, radius=radius),
                           squared_loss, loss_range=(0.0, b * b))


def problem_from_name(name: str, **params) -> LearningProblem:
    head, _, arg = name.partition(":")
    if head == "finite-bernoulli":
        if not arg:
            raise DomainError("finite-bernoulli needs a size, e.g. finite-bernoulli:16")
        return finite_bernoulli(int(arg), **params)
    if head == "halfspace2d" and not arg:
        return halfspace2d(**params)
    if head == "linreg-bounded" and not arg:
        return linreg_bounded(**params)
    raise DomainError(f"unknown problem {name!r}")
