"""Minimax lower bounds: divergences, the estimation-to-testing reduction,
Fano's inequality, local and global Fano pipelines, and exact reference cases.

Here ``log`` is base 2 and
``log e`` factors appear explicitly.  Divergences are computed in nats and
converted at the formula boundary; every report records the base.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import CertificationError, DomainError, SizeError
from .info_gen import kl_finite
from .metric_entropy import analytic_entropy_bounds, code_to_signs, gv_hypercube_packing
from .rng import blocks, substream, tag

LOG2E = math.log2(math.e)
GRID_INTERVALS = 4096
PACKING_CAP = 1 << 14
BINARY_BUDGET = 10**6


@dataclass(frozen=True)
class LossShape:
    name: str
    phi: Callable[[float], float]

    def __call__(self, a: float) -> float:
        return self.phi(a)

    def check(self, grid: Sequence[float] = tuple(np.linspace(0.0, 10.0, 101))) -> bool:
        vals = [self.phi(a) for a in grid]
        return self.phi(0.0) == 0 and all(b >= a for a, b in zip(vals, vals[1:]))


SQUARE = LossShape("square", lambda a: a * a)
ABSOLUTE = LossShape("absolute", abs)


@dataclass
class MinimaxReport:
    lower_bound: float
    phi_delta: float
    error_prob_lower: float
    mi_upper: float
    parameters: dict = field(default_factory=dict)
    base: str = "bits"

    def as_dict(self) -> dict:
        return {"lower_bound": self.lower_bound, "phi_delta": self.phi_delta,
                "error_prob_lower": self.error_prob_lower, "mi_upper": self.mi_upper,
                "parameters": dict(self.parameters), "base": self.base}


# ---------------------------------------------------------------------------
# divergence kernels
# ---------------------------------------------------------------------------


def _to_base(nats: float, base: str) -> float:
    if base == "nats":
        return nats
    if base == "bits":
        return nats * LOG2E
    raise DomainError(f"unknown base {base!r}")


def kl_gaussian_location(theta, theta_prime, sigma2: float, base: str = "nats") -> float:
    """D(N(theta, sigma2 I) || N(theta', sigma2 I)) = ||theta - theta'||^2 / (2 sigma2)."""
    d = np.asarray(theta, dtype=float) - np.asarray(theta_prime, dtype=float)
    return _to_base(float(d @ d) / (2.0 * sigma2) if d.ndim else float(d * d) / (2.0 * sigma2), base)


def grid_points(intervals: int = GRID_INTERVALS) -> np.ndarray:
    return np.linspace(0.0, 1.0, intervals + 1)


def kl_grid(f: np.ndarray, g: np.ndarray, grid: np.ndarray, base: str = "nats") -> float:
    """Trapezoid quadrature of f ln(f/g); infinite when g vanishes where f > 0."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if np.any((g <= 0) & (f > 0)):
        return math.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(f > 0, f * np.log(np.where(f > 0, f, 1.0) / np.where(g > 0, g, 1.0)), 0.0)
    return _to_base(float(integrate.trapezoid(integrand, grid)), base)


def kl_divergence(p, q, kind: str, base: str = "nats", **params) -> float:
    """Relative entropy for ``gaussian_location`` (sigma2), ``finite`` or ``grid`` (grid) members."""
    if kind == "gaussian_location":
        return kl_gaussian_location(p, q, params["sigma2"], base)
    if kind == "finite":
        return _to_base(kl_finite(p, q), base)
    if kind == "grid":
        return kl_grid(p, q, params["grid"], base)
    raise DomainError(f"unknown family kind {kind!r}")


def hellinger_sq(f: np.ndarray, g: np.ndarray, grid: np.ndarray) -> float:
    """D_H^2 = (1/2) int (sqrt f - sqrt g)^2 by trapezoid quadrature."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if np.any(f < 0) or np.any(g < 0):
        raise DomainError("densities must be nonnegative")
    return float(0.5 * integrate.trapezoid((np.sqrt(f) - np.sqrt(g)) ** 2, grid))


def total_variation(p, q) -> float:
    return float(0.5 * np.sum(np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))))


def hellinger_sq_finite(p, q) -> float:
    return float(0.5 * np.sum((np.sqrt(np.asarray(p, dtype=float)) - np.sqrt(np.asarray(q, dtype=float))) ** 2))


@dataclass(frozen=True)
class HellingerKlCheck:
    kl_bits: float
    hellinger_sq: float
    bound_bits: float
    holds: bool
    ratio: float
    c1: float

    def as_dict(self) -> dict:
        return {"kl_bits": self.kl_bits, "hellinger_sq": self.hellinger_sq, "bound_bits": self.bound_bits,
                "holds": self.holds, "ratio": self.ratio, "c1": self.c1}


def hellinger_kl_inequality_check(f: np.ndarray, g: np.ndarray, c1: float, grid: np.ndarray | None = None,
                                  tol: float = 1e-12, constant: float | None = None) -> HellingerKlCheck:
    """Compare D(f||g) in bits against D_H^2(f, g) / (c1 ln 2) for densities >= c1.

    ``constant`` replaces 1 / (c1 ln 2), e.g. 4 / ln 2.  ``ratio`` is
    D / bound; values above 1 mean the inequality fails on this pair.
    """
    grid = grid_points(len(f) - 1) if grid is None else grid
    if c1 <= 0:
        raise DomainError("c1 must be positive")
    if min(np.min(f), np.min(g)) < c1 - 1e-12:
        raise DomainError("both densities must be bounded below by c1")
    kl = kl_grid(f, g, grid, "bits")
    h2 = hellinger_sq(f, g, grid)
    bound = h2 / (c1 * math.log(2.0)) if constant is None else constant * h2
    ratio = kl / bound if bound > 0 else (0.0 if kl == 0 else math.inf)
    return HellingerKlCheck(kl, h2, bound, kl <= bound + tol, ratio, c1)


# ---------------------------------------------------------------------------
# Fano
# ---------------------------------------------------------------------------


def fano_error_lower(I: float, m: int, base: str = "two") -> float:
    """max(0, 1 - (I + 1) / log m), with I and log in the same base."""
    if m < 2:
        raise DomainError("Fano's bound needs m >= 2")
    if I < 0:
        raise DomainError("mutual information must be >= 0")
    if base == "two":
        logm = math.log2(m)
    elif base == "e":
        logm = math.log(m)
    else:
        raise DomainError(f"unknown base {base!r}")
    return max(0.0, 1.0 - (I + 1.0) / logm)


@dataclass
class FanoInstance:
    """A certified packing, its pairwise divergences and the sample size.

    ``divergences`` are per-observation D(p_j || p_j') in the tagged base.
    """

    packing: np.ndarray
    separation: float
    divergences: np.ndarray
    n: int
    base: str = "bits"
    metric: Callable[[np.ndarray, np.ndarray], float] | None = None
    sampler: Callable[[np.random.Generator, int, int, int], np.ndarray] | None = None
    label: str = ""

    def __post_init__(self):
        d = np.asarray(self.divergences, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] != len(self.packing):
            raise DomainError("divergences must be an m x m matrix matching the packing")
        if np.any(d < -1e-15) or np.any(np.abs(np.diag(d)) > 1e-15):
            raise DomainError("divergences must be nonnegative with zero diagonal")
        self.divergences = d

    @property
    def m(self) -> int:
        return len(self.packing)


def local_fano_bound(instance: FanoInstance, phi: LossShape, delta: float) -> MinimaxReport:
    """Phi(delta) * max(0, 1 - ((n/m^2) sum D + 1) / log m)."""
    if instance.separation < 2.0 * delta - 1e-12:
        raise CertificationError(f"packing separation {instance.separation} is below 2 delta = {2 * delta}")
    m = instance.m
    mi = instance.n / (m * m) * float(instance.divergences.sum())
    pe = fano_error_lower(mi, m, "two" if instance.base == "bits" else "e")
    phi_d = phi(delta)
    return MinimaxReport(phi_d * pe, phi_d, pe, mi, {"m": m, "n": instance.n, "delta": delta,
                                                       "separation": instance.separation,
                                                       "loss": phi.name}, instance.base)


def global_fano_bound(logK: float, logM: float, n: int, epsilon: float, phi: LossShape,
                      delta: float) -> MinimaxReport:
    """Phi(delta) * max(0, 1 - (log K + n eps^2 + 1) / log M), all in bits."""
    if logM <= 0:
        raise DomainError("log M must be positive")
    mi = logK + n * epsilon**2
    pe = max(0.0, 1.0 - (mi + 1.0) / logM)
    phi_d = phi(delta)
    return MinimaxReport(phi_d * pe, phi_d, pe, mi, {"logK": logK, "logM": logM, "n": n,
                                                       "epsilon": epsilon, "delta": delta, "loss": phi.name})


# ---------------------------------------------------------------------------
# Gaussian mean (local Fano)
# ---------------------------------------------------------------------------


def ball_packing(k: int, radius: float, separation: float, target: int, seed: int,
                 max_candidates: int = 1 << 18) -> np.ndarray:
    """Greedy packing of points drawn uniformly in the k-ball, pairwise distance > separation.

    Stops once ``target`` members are found.  Candidates arrive in fixed
    blocks from counter-derived substreams.
    """
    chosen = np.empty((0, k))
    stream = tag("ball-packing")
    sep2 = separation * separation
    for idx, size in blocks(max_candidates, 4096):
        rng = substream(seed, stream, k, idx)
        g = rng.standard_normal((size, k))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        cand = radius * g * rng.random(size)[:, None] ** (1.0 / k)
        if chosen.shape[0]:
            d2 = (cand**2).sum(1)[:, None] + (chosen**2).sum(1)[None, :] - 2.0 * cand @ chosen.T
            cand = cand[d2.min(axis=1) > sep2 * (1 + 1e-9)]
        sq = (cand**2).sum(1)
        conflict = sq[:, None] + sq[None, :] - 2.0 * cand @ cand.T <= sep2 * (1 + 1e-9)
        blocked = np.zeros(len(cand), dtype=bool)
        keep = []
        for i in range(len(cand)):
            if not blocked[i]:
                keep.append(i)
                blocked |= conflict[i]
                if chosen.shape[0] + len(keep) >= target:
                    break
        if keep:
            chosen = np.vstack([chosen, cand[keep]])
        if chosen.shape[0] >= target:
            break
    return chosen


def min_pairwise_distance(points: np.ndarray) -> float:
    p = np.asarray(points, dtype=float)
    d2 = (p**2).sum(1)[:, None] + (p**2).sum(1)[None, :] - 2.0 * p @ p.T
    np.fill_diagonal(d2, np.inf)
    return float(math.sqrt(max(d2.min(), 0.0)))


def gaussian_fano_instance(packing: np.ndarray, separation: float, sigma2: float, n: int) -> FanoInstance:
    p = np.asarray(packing, dtype=float)
    sq = (p**2).sum(1)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * p @ p.T, 0.0)
    np.fill_diagonal(d2, 0.0)
    div = d2 / (2.0 * sigma2) * LOG2E

    def sampler(rng, j, size, nobs):
        return p[j] + math.sqrt(sigma2) * rng.standard_normal((size, nobs, p.shape[1]))

    return FanoInstance(p, separation, div, n, "bits",
                        metric=lambda a, b: float(np.linalg.norm(np.asarray(a) - np.asarray(b))),
                        sampler=sampler, label=f"gauss-mean:{p.shape[1]}:{sigma2}")


def bayes_reference(sigma2: float, n: int, gamma2: float) -> float:
    """Bayes risk sigma2 / (n + sigma2 / gamma2) under the N(0, gamma2) prior."""
    return sigma2 / (n + sigma2 / gamma2)


def gaussian_mean_pipeline(k: int, n: int, sigma2: float = 1.0, seed: int = 0,
                           gamma2_grid: Sequence[float] = (1.0, 10.0, 100.0, 1e4, 1e6)) -> MinimaxReport:
    """Local Fano lower bound sigma2 k / (384 n log e) for the k-variate Gaussian mean.

    The packing scale is delta^2 = sigma2 k / (64 n log e).  A 2 delta-packing of
    B(4 delta) with log2 m >= k is constructed greedily when 2^k <= PACKING_CAP;
    otherwise the report relies on the volume argument and is flagged.
    """
    if k < 3:
        raise DomainError("the Gaussian-mean chain needs k >= 3")
    if n < 1 or sigma2 <= 0:
        raise DomainError("need n >= 1 and sigma2 > 0")
    delta2 = sigma2 * k / (64.0 * n * LOG2E)
    delta = math.sqrt(delta2)
    div_max = 32.0 * delta2 * LOG2E / sigma2
    mi_upper = n * div_max
    chain_value = delta2 * (1.0 - (mi_upper + 1.0) / k)
    lower = sigma2 * k / (384.0 * n * LOG2E)
    params = {"k": k, "n": n, "sigma2": sigma2, "delta": delta, "delta2": delta2,
              "divergence_max_bits": div_max, "chain_value": chain_value, "base_note": "log is base 2",
              "reference_sample_mean": sigma2 * k / n,
              "reference_bayes": {str(g): k * bayes_reference(sigma2, n, g) for g in gamma2_grid}}
    cert = packing_certificate(k, seed)
    params["packing"] = {key: v for key, v in cert.items() if key != "points"}
    if cert["certified"]:
        inst = gaussian_fano_instance(cert["points"] * delta, 2.0 * delta, sigma2, n)
        params["certified_local_fano"] = local_fano_bound(inst, SQUARE, delta).lower_bound
    return MinimaxReport(lower, delta2, 1.0 / 6.0, mi_upper, params)


def packing_certificate(k: int, seed: int = 0) -> dict:
    """Greedy 2-packing of B(4) in R^k (unit delta) with log2 m >= k, when affordable."""
    target = 1 << k
    if target > PACKING_CAP:
        return {"certified": False, "status": "not constructively certified", "m": 0, "log2_m": 0.0}
    pts = ball_packing(k, 4.0, 2.0, target, seed)
    m = pts.shape[0]
    ok = m >= target and min_pairwise_distance(pts) > 2.0 and bool(np.all(np.linalg.norm(pts, axis=1) <= 4.0))
    return {"certified": ok, "status": "certified" if ok else "not constructively certified",
            "m": int(m), "log2_m": math.log2(m) if m else 0.0, "points": pts}


# ---------------------------------------------------------------------------
# density estimation (local Fano on a bump family)
# ---------------------------------------------------------------------------


BUMPS = {
    "sine": (lambda t: 0.5 * np.sin(2.0 * np.pi * t), lambda t: -2.0 * np.pi**2 * np.sin(2.0 * np.pi * t)),
}


@dataclass(frozen=True)
class DensityClass:
    c_l: float = 0.5
    c_u: float = 1.5
    c_d: float = 10.0


def bump_density(signs: np.ndarray, c1: float, grid: np.ndarray, bump: str = "sine") -> np.ndarray:
    """f_b(t) = 1 + C1 sum_j b_j phi(k t - (j-1)) / k^2 on [(j-1)/k, j/k]."""
    phi, _ = BUMPS[bump]
    k = len(signs)
    j = np.minimum((grid * k).astype(int), k - 1)
    return 1.0 + c1 * np.asarray(signs, dtype=float)[j] * phi(k * grid - j) / k**2


def _audit_membership(k: int, c1: float, cls: DensityClass, bump: str) -> dict:
    """Worst-case bounds over every sign vector: the pieces are independent."""
    phi, phi2 = BUMPS[bump]
    t = np.linspace(0.0, 1.0, 20001)
    amp = c1 * float(np.abs(phi(t)).max()) / k**2
    curv = c1 * float(np.abs(phi2(t)).max())
    return {"min": 1.0 - amp, "max": 1.0 + amp, "max_abs_f2": curv,
            "in_range": 1.0 - amp >= max(cls.c_l, 0.5) and 1.0 + amp <= cls.c_u,
            "curvature_ok": curv <= cls.c_d}


def density_packing_pipeline(k: int, n: int, c1: float | None = None, bump: str = "sine",
                             cls: DensityClass = DensityClass(), seed: int = 0,
                             intervals: int = GRID_INTERVALS) -> MinimaxReport:
    """Local Fano bound for Hellinger density estimation on the bump family.

    C1 is halved from 1 until membership passes (unless given).  The packing
    is a greedy (k/4)-packing of the hypercube.  Pairwise divergences are
    computed by quadrature piece by piece; the pieces of f_b and f_b' differ
    only where the signs differ.
    """
    if k < 4 or k > 24:
        raise DomainError("need 4 <= k <= 24 for a certified hypercube packing")
    intervals = k * math.ceil(intervals / k)
    if c1 is None:
        c1 = 1.0
        while not all(_audit_membership(k, c1, cls, bump)[key] for key in ("in_range", "curvature_ok")):
            c1 /= 2.0
            if c1 < 1e-12:
                raise CertificationError("no C1 passes the membership audit")
    member = _audit_membership(k, c1, cls, bump)
    if not (member["in_range"] and member["curvature_ok"]):
        raise CertificationError(f"membership audit failed: {member}")
    grid = grid_points(intervals)
    phi, _ = BUMPS[bump]
    int_phi2 = float(integrate.trapezoid(phi(grid) ** 2, grid))
    delta2 = c1**2 * int_phi2 / (8.0 * k**4)

    packing = gv_hypercube_packing(k, k // 4, seed)
    codes = packing.members
    signs = np.array([code_to_signs(c, k) for c in codes], dtype=np.int8)
    m = len(codes)

    # integrals over one piece for each (b_j, b'_j), identical across pieces by translation
    piece = grid[: intervals // k + 1]
    bumps = {s: 1.0 + c1 * s * phi(k * piece) / k**2 for s in (-1, 1)}
    h_tab = {(a, b): 0.5 * float(integrate.trapezoid((np.sqrt(bumps[a]) - np.sqrt(bumps[b])) ** 2, piece))
             for a in (-1, 1) for b in (-1, 1)}
    kl_tab = {(a, b): kl_grid(bumps[a], bumps[b], piece, "bits") for a in (-1, 1) for b in (-1, 1)}
    diff = (signs[:, None, :] != signs[None, :, :]).sum(axis=2)
    hell = diff * h_tab[(1, -1)]
    kl = diff * 0.5 * (kl_tab[(1, -1)] + kl_tab[(-1, 1)])
    # the two orientations of a differing piece have equal KL for an odd-symmetric bump
    mass = np.array([float(integrate.trapezoid(bump_density(s, c1, grid, bump), grid)) for s in signs])

    off = ~np.eye(m, dtype=bool)
    min_sep = int(diff[off].min()) if m > 1 else k
    per_piece_floor = 0.5 * c1**2 * diff * int_phi2 / k**5
    kl_cap = 4.0 * int_phi2 / (k**4 * math.log(2.0))
    audits = {
        "membership": bool(member["in_range"] and member["curvature_ok"]),
        "normalized": bool(np.all(np.abs(mass - 1.0) <= 1e-6)),
        "separation_gt_k_over_4": bool(min_sep > k / 4),
        "hellinger_per_piece": bool(np.all(hell[off] >= per_piece_floor[off] - 1e-15)),
        "hellinger_ge_delta2": bool(np.all(hell[off] >= delta2 - 1e-15)),
        "kl_cap": bool(np.all(kl[off] <= kl_cap + 1e-15)),
    }
    failed = [key for key, ok in audits.items() if not ok]
    if failed:
        raise CertificationError(f"construction audit failed: {', '.join(failed)}")

    if m < 8:
        raise CertificationError(f"packing has {m} < 8 members; the bound would be vacuous")
    log_m = math.log2(m)
    mi = n / (m * m) * float(kl.sum())
    ratio = (mi + 1.0) / log_m
    ratio_relaxed = (16.0 * n * delta2 + 1.0) / (k / 10.0)
    params = {"k": k, "n": n, "C1": c1, "C2_implied": k / n ** 0.2, "delta2": delta2, "int_phi2": int_phi2,
              "m": m, "log2_m": log_m, "ratio_actual": ratio, "ratio_relaxed": ratio_relaxed,
              "mi_relaxed": 16.0 * n * delta2, "audits": audits, "membership": member,
              "packing_certified": packing.certified, "ratio_condition_met": ratio <= 0.5}
    if ratio <= 0.5:
        lower, pe = 0.5 * delta2, 0.5
    else:
        pe = max(0.0, 1.0 - ratio)
        lower = delta2 * pe
    return MinimaxReport(lower, delta2, pe, mi, params)


# ---------------------------------------------------------------------------
# nonlinear regression (global Fano)
# ---------------------------------------------------------------------------


def lipschitz_constants() -> tuple[float, float]:
    """(c1, c2) of the sup-norm entropy of 1-Lipschitz functions, in bits.

    Read off the analytic bounds floor(1/delta) <= H(delta) <= ceil(2/delta) log2 3.
    """
    delta = 2.0**-20
    b = analytic_entropy_bounds("lipschitz", delta, L=1.0)
    return b.lower * delta, b.upper * delta


def nonlinear_regression_pipeline(sigma: float, n: int, c1: float | None = None, c2: float | None = None,
                                  phi: LossShape = SQUARE) -> MinimaxReport:
    """Global Fano bound (1/2) Phi(c (sigma^2/n)^(1/3)) for 1-Lipschitz regression."""
    if sigma <= 0 or n < 1:
        raise DomainError("need sigma > 0 and n >= 1")
    d1, d2 = lipschitz_constants()
    c1 = d1 if c1 is None else c1
    c2 = d2 if c2 is None else c2
    if c1 <= 0 or c2 <= 0:
        raise DomainError("c1 and c2 must be positive")
    c3 = c2 / math.sqrt(LOG2E / 2.0)
    c = c1 / (4.0 * (c3 + 2.0))
    eps = (1.0 / (sigma * n)) ** (1.0 / 3.0)
    delta = c * (sigma**2 / n) ** (1.0 / 3.0)
    logK = c3 / (sigma * eps)
    logM = c1 / (2.0 * delta)
    report = global_fano_bound(logK, logM, n, eps, phi, delta)
    ratio = (logK + n * eps**2 + 1.0) / logM
    met = ratio <= 0.5 + 1e-12
    lower = 0.5 * phi(delta) if met else report.lower_bound
    delta_prime = sigma * eps * math.sqrt(LOG2E / 2.0)
    params = dict(report.parameters)
    params.update({"sigma": sigma, "c1": c1, "c2": c2, "c3": c3, "c": c, "ratio": ratio,
                   "ratio_closed_form": (c3 + 1.0 + sigma ** (2.0 / 3.0) * n ** (-1.0 / 3.0)) / (2.0 * (c3 + 2.0)),
                   "ratio_condition_met": met, "global_fano_value": report.lower_bound,
                   "audited_logM": math.floor(1.0 / (2.0 * delta)),
                   "audited_logK": math.ceil(2.0 / delta_prime) * math.log2(3.0)})
    return MinimaxReport(lower, phi(delta), 0.5 if met else report.error_prob_lower, report.mi_upper, params)


# ---------------------------------------------------------------------------
# estimation-to-testing reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionReport:
    trials: int
    test_error: float
    test_error_se: float
    miss_probability: float
    miss_probability_se: float
    combined_se: float
    direction_holds: bool

    def as_dict(self) -> dict:
        return {"trials": self.trials, "test_error": self.test_error, "test_error_se": self.test_error_se,
                "miss_probability": self.miss_probability, "miss_probability_se": self.miss_probability_se,
                "combined_se": self.combined_se, "direction_holds": self.direction_holds}


def testing_reduction_sim(instance: FanoInstance, estimator: Callable[[np.ndarray], np.ndarray], trials: int,
                          seed: int, n: int | None = None, delta: float | None = None) -> ReductionReport:
    """Simulate J uniform, data from P_J^n, the estimator and the nearest-neighbor test.

    ``estimator`` maps a batch of datasets (size, n, k) to a batch of estimates.
    Ties in the test go to the lowest index.
    """
    n = instance.n if n is None else n
    delta = instance.separation / 2.0 if delta is None else delta
    if instance.sampler is None:
        raise DomainError("the instance has no sampler")
    if trials < 2:
        raise DomainError("need at least 2 trials")
    pack = np.asarray(instance.packing, dtype=float)
    m = pack.shape[0]
    errors = np.empty(trials)
    misses = np.empty(trials)
    pos = 0
    for idx, size in blocks(trials, 8192):
        rng = substream(seed, tag("reduction"), n, idx)
        j = rng.integers(0, m, size=size)
        data = np.empty((size, n, pack.shape[1]))
        for jj in range(m):
            sel = np.nonzero(j == jj)[0]
            if sel.size:
                data[sel] = instance.sampler(rng, jj, sel.size, n)
        est = np.asarray(estimator(data), dtype=float)
        dist = np.linalg.norm(est[:, None, :] - pack[None, :, :], axis=2)
        psi = np.argmin(dist, axis=1)
        errors[pos:pos + size] = psi != j
        misses[pos:pos + size] = dist[np.arange(size), j] >= delta
        pos += size
    pe, pm = float(errors.mean()), float(misses.mean())
    se_e = float(errors.std(ddof=1) / math.sqrt(trials))
    se_m = float(misses.std(ddof=1) / math.sqrt(trials))
    comb = math.sqrt(se_e**2 + se_m**2)
    return ReductionReport(trials, pe, se_e, pm, se_m, comb, pe <= pm + 3.0 * comb)


# ---------------------------------------------------------------------------
# binary minimax test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinaryTestResult:
    value: float
    threshold_class: int
    gamma: float
    alpha: float
    beta: float
    deterministic_value: float | None
    outcomes: int

    def as_dict(self) -> dict:
        return {"value": self.value, "threshold_class": self.threshold_class, "gamma": self.gamma,
                "alpha": self.alpha, "beta": self.beta, "deterministic_value": self.deterministic_value,
                "outcomes": self.outcomes}


def binary_test_minimax(p0, p1, n: int, exhaustive_max: int = 16) -> BinaryTestResult:
    """Minimax max(alpha, beta) over tests between p0^n and p1^n.

    Outcomes are grouped into likelihood-ratio classes and sorted from most
    p1-like; deciding 1 on a prefix of classes and randomizing on the boundary
    class equalizes the two errors.  When there are at most ``exhaustive_max``
    outcomes, every deterministic test is also enumerated.
    """
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    if p0.shape != p1.shape:
        raise DomainError("p0 and p1 need the same alphabet")
    size = p0.size**n
    if size > BINARY_BUDGET:
        raise SizeError(f"{size} outcomes exceed the enumeration budget")
    q0 = np.ones(1)
    q1 = np.ones(1)
    for _ in range(n):
        q0 = np.outer(q0, p0).ravel()
        q1 = np.outer(q1, p1).ravel()
    live = (q0 > 0) | (q1 > 0)
    a, b = q0[live], q1[live]
    with np.errstate(divide="ignore"):
        llr = np.where(b > 0, np.log(np.where(a > 0, a, 1.0)) - np.log(np.where(b > 0, b, 1.0)), np.inf)
    llr = np.where(a == 0, -np.inf, llr)
    keys = np.round(llr, 10)
    classes = np.unique(keys)
    A = np.array([a[keys == c].sum() for c in classes])
    B = np.array([b[keys == c].sum() for c in classes])
    alpha = np.concatenate([[0.0], np.cumsum(A)])
    beta = 1.0 - np.concatenate([[0.0], np.cumsum(B)])
    t = int(np.nonzero(alpha <= beta + 1e-15)[0].max())
    if t == len(classes):
        gamma, value, al, be = 0.0, float(max(alpha[t], beta[t])), float(alpha[t]), float(beta[t])
    else:
        gap = beta[t] - alpha[t]
        gamma = float(np.clip(gap / (A[t] + B[t]), 0.0, 1.0)) if A[t] + B[t] > 0 else 0.0
        al = float(alpha[t] + gamma * A[t])
        be = float(beta[t] - gamma * B[t])
        value = max(al, be)
    det = None
    if a.size <= exhaustive_max:
        det = 1.0
        for mask in itertools.product((0, 1), repeat=a.size):
            d = np.array(mask, dtype=bool)
            det = min(det, max(float(a[d].sum()), float(b[~d].sum())))
    return BinaryTestResult(value, t, gamma, al, be, det, int(size))


def sample_mean_estimator(data: np.ndarray) -> np.ndarray:
    return np.asarray(data).mean(axis=1)


def constant_estimator(theta) -> Callable[[np.ndarray], np.ndarray]:
    theta = np.asarray(theta, dtype=float)
    return lambda data: np.broadcast_to(theta, (data.shape[0], theta.size))


def family_from_name(name: str) -> dict:
    """Parse "gauss-mean:k:sigma2", "bump-densities:k:C1" or "lipschitz-regression:sigma"."""
    parts = name.split(":")
    try:
        if parts[0] == "gauss-mean" and len(parts) <= 3:
            return {"family": "gauss-mean", "k": int(parts[1]) if len(parts) > 1 else 3,
                    "sigma2": float(parts[2]) if len(parts) > 2 else 1.0}
        if parts[0] == "bump-densities" and len(parts) <= 3:
            return {"family": "bump-densities", "k": int(parts[1]) if len(parts) > 1 else 8,
                    "c1": float(parts[2]) if len(parts) > 2 else None}
        if parts[0] == "lipschitz-regression" and len(parts) <= 2:
            return {"family": "lipschitz-regression", "sigma": float(parts[1]) if len(parts) > 1 else 1.0}
    except ValueError as exc:
        raise DomainError(f"bad family parameters in {name!r}") from exc
    raise DomainError(f"unknown family {name!r}")
