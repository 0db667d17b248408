"""Covering and packing numbers, greedy constructions, and analytic bounds.

Metric entropy is reported in bits.  A *net* at resolution delta covers every
point within distance <= delta; a *packing* has pairwise distances strictly
greater than delta.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import _search
from .errors import CertificationError, DomainError, SizeError
from .rng import derive_seed, substream, tag

DEFAULT_LIMIT = 24
# exhaustive search on spaces that carry a transitive symmetry group
SYMMETRIC_LIMIT = 256


def popcount_table(nbits: int) -> np.ndarray:
    table = np.zeros(1 << nbits, dtype=np.int64)
    for b in range(nbits):
        table[1 << b:1 << (b + 1)] = table[: 1 << b] + 1
    return table


def hamming_volume(n: int, r: int) -> int:
    """Number of points in a Hamming ball of radius r in {0,1}^n."""
    if not (0 <= r <= n):
        raise DomainError(f"need 0 <= r <= n, got n={n}, r={r}")
    if n > 128:
        raise DomainError("n must be <= 128")
    return sum(math.comb(n, i) for i in range(r + 1))


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------


@dataclass
class Symmetry:
    """Automorphisms used to prune exhaustive searches.

    ``stabilizer`` holds point permutations (rows) that preserve distances
    and fix point 0.  ``transitive`` records that the full automorphism group
    moves point 0 to every other point.
    """

    stabilizer: np.ndarray
    transitive: bool


@dataclass
class FiniteMetricSpace:
    points: list
    dist: np.ndarray
    label: str
    builtin: bool = False
    symmetry: Symmetry | None = field(default=None, repr=False)

    def __post_init__(self):
        self.dist = np.asarray(self.dist, dtype=float)
        n = len(self.points)
        if self.dist.shape != (n, n):
            raise DomainError("distance matrix shape does not match the point list")

    def __len__(self):
        return len(self.points)

    def distance(self, i: int, j: int) -> float:
        return float(self.dist[i, j])

    @classmethod
    def from_function(cls, points: Sequence[Any], distance: Callable[[Any, Any], float],
                      label: str = "custom") -> "FiniteMetricSpace":
        n = len(points)
        d = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                d[i, j] = d[j, i] = float(distance(points[i], points[j]))
        return cls(list(points), d, label)

    def check_metric(self, samples: int = 20000, seed: int = 0, tol: float = 1e-12) -> bool:
        """Pseudometric axioms; exhaustive for built-ins, sampled triples otherwise."""
        d = self.dist
        if np.any(d < 0) or np.any(np.abs(np.diag(d)) > tol) or not np.allclose(d, d.T, atol=tol):
            return False
        n = len(self)
        if self.builtin or n ** 3 <= samples:
            for k in range(n):
                if np.any(d > d[:, [k]] + d[[k], :] + tol):
                    return False
            return True
        rng = substream(seed, tag("metric-check"))
        i, j, k = rng.integers(0, n, size=(3, samples))
        return bool(np.all(d[i, j] <= d[i, k] + d[k, j] + tol))


def _coordinate_permutations(n: int) -> np.ndarray:
    """Point permutations of {0,1}^n induced by permuting coordinates."""
    xs = np.arange(1 << n, dtype=np.int64)
    bits = (xs[:, None] >> np.arange(n)) & 1
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    weights = np.left_shift(1, perms)  # weights[p, i] = 2**perm_p(i)
    return (bits @ weights.T).T.astype(np.int32)


def hamming_cube(n: int, as_strings: bool = False) -> FiniteMetricSpace:
    """{0,1}^n with the Hamming distance; point i is the bit pattern of i."""
    if n < 1 or n > 12:
        raise DomainError("hamming_cube supports 1 <= n <= 12")
    xs = np.arange(1 << n)
    pc = popcount_table(n)
    dist = pc[xs[:, None] ^ xs[None, :]]
    pts = [format(int(x), f"0{n}b")[::-1] for x in xs] if as_strings else [int(x) for x in xs]
    sym = Symmetry(_coordinate_permutations(n), transitive=True) if n <= 8 else None
    return FiniteMetricSpace(pts, dist, f"hamming:{n}", builtin=True, symmetry=sym)


def euclid_grid(d: int, side: int) -> FiniteMetricSpace:
    """Lattice points of a ``side``-per-axis grid on [-1,1]^d inside the unit ball."""
    if d < 1 or side < 2:
        raise DomainError("need d >= 1 and side >= 2")
    axis = np.linspace(-1.0, 1.0, side)
    grid = np.array(list(itertools.product(axis, repeat=d)))
    grid = grid[np.linalg.norm(grid, axis=1) <= 1.0 + 1e-12]
    dist = np.linalg.norm(grid[:, None, :] - grid[None, :, :], axis=2)
    return FiniteMetricSpace([tuple(p) for p in grid], dist, f"euclid-grid:{d}:{side}", builtin=True)


def space_from_name(name: str) -> FiniteMetricSpace:
    """Built-in spaces: ``hamming:n``, ``cube2:n`` and ``euclid-grid:d:side``."""
    parts = name.split(":")
    try:
        if parts[0] == "hamming" and len(parts) == 2:
            return hamming_cube(int(parts[1]))
        if parts[0] == "cube2" and len(parts) == 2:
            sp = hamming_cube(int(parts[1]), as_strings=True)
            sp.label = name
            return sp
        if parts[0] == "euclid-grid" and len(parts) == 3:
            return euclid_grid(int(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise DomainError(f"bad space name {name!r}") from exc
    raise DomainError(f"unknown space {name!r}")


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------


@dataclass
class NetResult:
    centers: list[int]
    radius: float
    certified_cover: bool
    label: str = ""
    attempts: int = 1

    def as_dict(self) -> dict:
        return {"centers": list(map(int, self.centers)), "size": len(self.centers), "radius": self.radius,
                "certified_cover": self.certified_cover, "space": self.label, "attempts": self.attempts}


@dataclass
class PackingResult:
    members: list
    separation: float
    certified: bool = True
    label: str = ""

    def as_dict(self) -> dict:
        return {"size": len(self.members), "separation": self.separation, "certified": self.certified,
                "space": self.label}


@dataclass(frozen=True)
class EntropyBounds:
    lower: float
    upper: float
    log_base: str
    resolution: float

    def contains(self, value: float, tol: float = 1e-12) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "base": self.log_base, "resolution": self.resolution}


# ---------------------------------------------------------------------------
# greedy and exact numbers
# ---------------------------------------------------------------------------


def is_cover(space: FiniteMetricSpace, centers: Sequence[int], delta: float) -> bool:
    if len(centers) == 0:
        return len(space) == 0
    return bool(np.all(space.dist[:, list(centers)].min(axis=1) <= delta))


def is_packing(space: FiniteMetricSpace, members: Sequence[int], delta: float) -> bool:
    idx = list(members)
    sub = space.dist[np.ix_(idx, idx)]
    off = ~np.eye(len(idx), dtype=bool)
    return bool(np.all(sub[off] > delta))


def greedy_net(space: FiniteMetricSpace, delta: float, order: str = "index") -> NetResult:
    """Maximal greedy packing at separation delta, which is also a delta-net.

    ``order="index"`` scans points in index order and keeps any point farther
    than delta from every kept point; ``order="farthest"`` repeatedly adds the
    point farthest from the current centers.
    """
    n = len(space)
    if n == 0:
        raise DomainError("empty space")
    if delta < 0:
        raise DomainError("delta must be >= 0")
    d = space.dist
    centers: list[int] = []
    if order == "index":
        nearest = np.full(n, np.inf)
        for i in range(n):
            if nearest[i] > delta:
                centers.append(i)
                nearest = np.minimum(nearest, d[i])
    elif order == "farthest":
        centers = [0]
        nearest = d[0].copy()
        while nearest.max() > delta:
            i = int(np.argmax(nearest))
            centers.append(i)
            nearest = np.minimum(nearest, d[i])
    else:
        raise DomainError(f"unknown order {order!r}")
    return NetResult(centers, float(delta), is_cover(space, centers, delta), space.label)


def _effective_limit(space: FiniteMetricSpace, limit: int | None) -> int:
    if limit is not None:
        return limit
    if space.symmetry is not None and space.symmetry.transitive:
        return SYMMETRIC_LIMIT
    return DEFAULT_LIMIT


def exact_covering_number(space: FiniteMetricSpace, delta: float, limit: int | None = None) -> int:
    """Smallest delta-net, by branch-and-bound seeded with ``greedy_net``.

    The default limit is 24 points, raised to 256 for spaces that carry a
    transitive symmetry group (the built-in Hamming cubes up to n = 8).
    """
    lim = _effective_limit(space, limit)
    if len(space) > lim:
        raise SizeError(f"{len(space)} points exceed the exhaustive limit {lim}; use greedy_net for a bound")
    if delta < 0:
        raise DomainError("delta must be >= 0")
    seed = greedy_net(space, delta)
    ball = space.dist <= delta
    sym = space.symmetry
    perms = sym.stabilizer if sym is not None else None
    value, _ = _search.cover_search(ball, perms, bool(sym and sym.transitive), len(seed.centers))
    return value


def exact_packing_number(space: FiniteMetricSpace, delta: float, limit: int | None = None) -> int:
    """Largest delta-packing (maximum independent set of the graph of pairs at distance <= delta)."""
    lim = _effective_limit(space, limit)
    if len(space) > lim:
        raise SizeError(f"{len(space)} points exceed the exhaustive limit {lim}; use greedy_net for a bound")
    if delta < 0:
        raise DomainError("delta must be >= 0")
    seed = greedy_net(space, delta)
    far = space.dist > delta
    sym = space.symmetry
    perms = sym.stabilizer if sym is not None else None
    value, _ = _search.pack_search(far, perms, bool(sym and sym.transitive), len(seed.centers))
    return value


# ---------------------------------------------------------------------------
# analytic bounds
# ---------------------------------------------------------------------------


def analytic_entropy_bounds(family: str, delta: float, **params) -> EntropyBounds:
    """Closed-form (lower, upper) bounds on H(delta) in bits.

    Families: ``euclidean_ball`` (n, r), ``hamming_cube`` (n), ``lipschitz``
    (L) and ``sup_cube`` (d).
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    if family == "euclidean_ball":
        n, r = params["n"], params["r"]
        lower = max(0.0, n * math.log2(r / delta))
        upper = n * math.log2(1.0 + 2.0 * r / delta)
    elif family == "hamming_cube":
        n = int(params["n"])
        if delta != int(delta):
            raise DomainError("Hamming resolution must be an integer")
        d = int(delta)
        if not (0 < d < n / 2):
            raise DomainError("need 0 < delta < n/2 for the Hamming cube bounds")
        lower = n - math.log2(hamming_volume(n, d))
        up_packing = n - math.log2(hamming_volume(n, d // 2))
        up_random = n + math.log2(n * math.log(2) + 1) - math.log2(hamming_volume(n, d))
        upper = min(up_packing, up_random)
    elif family == "lipschitz":
        L = params["L"]
        lower = float(math.floor(L / delta))
        upper = math.ceil(2 * L / delta) * math.log2(3)
    elif family == "sup_cube":
        d = params["d"]
        lower = 0.0
        upper = d * math.log2(1.0 + 1.0 / delta)
    else:
        raise DomainError(f"unknown family {family!r}")
    return EntropyBounds(lower=lower, upper=upper, log_base="two", resolution=float(delta))


# ---------------------------------------------------------------------------
# randomized net on the Hamming cube
# ---------------------------------------------------------------------------


def _ball_masks(n: int, r: int) -> np.ndarray:
    masks = [0]
    for w in range(1, r + 1):
        for comb in itertools.combinations(range(n), w):
            masks.append(sum(1 << i for i in comb))
    return np.array(masks, dtype=np.int64)


def hamming_cover_check(n: int, centers: np.ndarray, delta: int) -> bool:
    """Exact coverage check of {0,1}^n by radius-delta balls around ``centers``."""
    covered = np.zeros(1 << n, dtype=bool)
    masks = _ball_masks(n, delta)
    centers = np.asarray(centers, dtype=np.int64)
    chunk = max(1, (1 << 22) // len(masks))
    for s in range(0, len(centers), chunk):
        covered[(centers[s:s + chunk, None] ^ masks[None, :]).ravel()] = True
    return bool(covered.all())


def random_net_size(n: int, delta: int) -> int:
    return math.ceil((2**n / hamming_volume(n, delta)) * n * math.log(2))


def random_net_hamming(n: int, delta: int, seed: int, max_attempts: int = 64) -> NetResult:
    """Uniform random centers, k = ceil((2^n / V(n, delta)) ln 2^n), until certified."""
    if n > 20:
        raise SizeError("certification enumerates 2^n points; n must be <= 20")
    if not (0 < delta < n / 2):
        raise DomainError("need 0 < delta < n/2")
    k = random_net_size(n, delta)
    stream = tag("random-net")
    for attempt in range(max_attempts):
        rng = substream(seed, stream, attempt)
        centers = rng.integers(0, 1 << n, size=k)
        if hamming_cover_check(n, centers, delta):
            return NetResult([int(c) for c in centers], float(delta), True, f"hamming:{n}", attempt + 1)
    raise CertificationError(f"no certified cover after {max_attempts} attempts")


# ---------------------------------------------------------------------------
# Lipschitz packing family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """phi(0) = 0 with slope slopes[j] on [j/m, (j+1)/m]."""

    slopes: tuple

    @property
    def m(self) -> int:
        return len(self.slopes)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.m + 1)

    def knot_values(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(np.asarray(self.slopes, float) / self.m)])

    def __call__(self, t):
        return np.interp(t, self.breakpoints, self.knot_values())

    def lipschitz_constant(self) -> float:
        v = self.knot_values()
        return float(np.max(np.abs(np.diff(v)) * self.m))


def sup_distance(f: PiecewiseLinearFn, g: PiecewiseLinearFn) -> float:
    """Exact sup-distance; a difference of piecewise-linear functions peaks at a knot."""
    if f.m != g.m:
        raise DomainError("functions must share the breakpoint grid")
    return float(np.max(np.abs(f.knot_values() - g.knot_values())))


def lipschitz_packing_family(L: float, delta: float, seed: int = 0,
                             max_patterns: int = 1 << 16) -> list[PiecewiseLinearFn]:
    """The 2^m functions phi_beta with m = floor(L / delta) and slopes +-L.

    For m > 16 a seeded random subset of ``max_patterns`` distinct sign patterns
    is returned instead of all 2^m.
    """
    if not (0 < delta < L):
        raise DomainError("need 0 < delta < L")
    m = math.floor(L / delta)
    if m <= 16:
        patterns = itertools.product((-1, 1), repeat=m)
        return [PiecewiseLinearFn(tuple(float(b * L) for b in beta)) for beta in patterns]
    rng = substream(seed, tag("lipschitz-family"))
    seen: set = set()
    while len(seen) < max_patterns:
        beta = tuple(int(b) for b in rng.integers(0, 2, size=m) * 2 - 1)
        seen.add(beta)
    return [PiecewiseLinearFn(tuple(float(b * L) for b in beta)) for beta in sorted(seen)]


def family_min_separation(family: Sequence[PiecewiseLinearFn]) -> float:
    """Minimum pairwise sup-distance, vectorized over knot values."""
    vals = np.array([f.knot_values() for f in family])
    best = np.inf
    for i in range(len(vals) - 1):
        d = np.max(np.abs(vals[i + 1:] - vals[i]), axis=1)
        best = min(best, float(d.min()))
    return best


# ---------------------------------------------------------------------------
# rate-distortion comparison
# ---------------------------------------------------------------------------


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@dataclass(frozen=True)
class RdComparison:
    rd_value: float
    per_dim_entropy_lower: float
    per_dim_entropy_upper: float
    source: str
    D: float
    n: int
    delta: float
    note: str = ""

    @property
    def width(self) -> float:
        return self.per_dim_entropy_upper - self.per_dim_entropy_lower

    def as_dict(self) -> dict:
        return {"rd": self.rd_value, "lower": self.per_dim_entropy_lower, "upper": self.per_dim_entropy_upper,
                "width": self.width, "source": self.source, "D": self.D, "n": self.n, "delta": self.delta,
                "note": self.note, "base": "bits"}


def rd_compare(source: str, D: float, n: int, P: float = 1.0) -> RdComparison:
    """Rate-distortion value against the per-dimension metric-entropy sandwich (bits)."""
    if source == "gaussian":
        if not (0 < D <= P):
            raise DomainError("need 0 < D <= P")
        rd = 0.5 * math.log2(P / D)
        upper = math.log2(1.0 + 2.0 * math.sqrt(P / D))
        return RdComparison(rd, rd, upper, "gaussian", D, n, math.sqrt(n * D))
    if source == "binary_symmetric":
        if not (0 < D < 0.5):
            raise DomainError("need 0 < D < 1/2")
        raw = n * D
        delta = int(math.floor(raw + 0.5))
        note = "" if abs(raw - delta) < 1e-12 else f"nD={raw:.6g} rounded to {delta}"
        if delta < 1:
            raise DomainError("nD rounds to 0; increase n")
        logv = math.log2(hamming_volume(n, delta))
        lower = (n - logv) / n
        upper = (n + math.log2(n * math.log(2) + 1) - logv) / n
        return RdComparison(1.0 - binary_entropy(D), lower, upper, "binary_symmetric", D, n, float(delta), note)
    raise DomainError(f"unknown source {source!r}")


# ---------------------------------------------------------------------------
# Gilbert-Varshamov style packing of the hypercube
# ---------------------------------------------------------------------------


def kl_bernoulli_bits(p: float, q: float) -> float:
    def term(a, b):
        return 0.0 if a == 0 else a * math.log2(a / b)
    return term(p, q) + term(1 - p, 1 - q)


def gv_hypercube_packing(k: int, min_separation: int, seed: int = 0, max_attempts: int = 8) -> PackingResult:
    """Greedy packing of {-1,+1}^k at Hamming separation > ``min_separation``.

    Members are integer codes (bit i set means coordinate i is +1).  The first
    pass scans codes in index order and later passes in seeded random orders;
    the result is certified once log2 |members| >= k D(Bern(s/k) || Bern(1/2)).
    """
    if not (0 <= min_separation <= k):
        raise DomainError("need 0 <= min_separation <= k")
    if k > 24:
        raise SizeError("exhaustive greedy needs k <= 24")
    # the volume bound is vacuous once the separation reaches k/2
    target = k * kl_bernoulli_bits(min_separation / k, 0.5) if 2 * min_separation < k else 0.0
    masks = _ball_masks(k, min_separation)
    best: list[int] = []
    stream = tag("gv-packing")
    for attempt in range(max_attempts):
        order = np.arange(1 << k) if attempt == 0 else substream(seed, stream, attempt).permutation(1 << k)
        blocked = np.zeros(1 << k, dtype=bool)
        chosen: list[int] = []
        for x in order:
            if not blocked[x]:
                chosen.append(int(x))
                blocked[masks ^ x] = True
        if len(chosen) > len(best):
            best = chosen
        if math.log2(len(best)) >= target - 1e-12:
            break
    certified = math.log2(len(best)) >= target - 1e-12
    return PackingResult(best, float(min_separation), certified, f"hypercube:{k}")


def code_to_signs(code: int, k: int) -> np.ndarray:
    return np.array([1 if (code >> i) & 1 else -1 for i in range(k)], dtype=np.int8)


def sandwich_row(n: int, delta: int, cache: dict | None = None) -> dict:
    """Exact N(delta), M(delta), M(2 delta) on {0,1}^n with the sandwich verdict."""
    cache = {} if cache is None else cache
    space = cache.setdefault(("space", n), hamming_cube(n))

    def packing(d):
        key = ("M", n, d)
        if key not in cache:
            cache[key] = exact_packing_number(space, d)
        return cache[key]

    N = exact_covering_number(space, delta)
    M1, M2 = packing(delta), packing(2 * delta)
    row = {"n": n, "delta": delta, "N": N, "M_delta": M1, "M_2delta": M2,
           "sandwich": bool(M2 <= N <= M1)}
    if 0 < delta < n / 2:
        b = analytic_entropy_bounds("hamming_cube", delta, n=n)
        row.update(H=math.log2(N), lower=b.lower, upper=b.upper, within_bounds=b.contains(math.log2(N)))
    else:
        row.update(within_bounds=None)
    return row
