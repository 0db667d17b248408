"""Branch-and-bound kernels for exact covering and packing numbers.

Point sets are bitsets stored as uint64 words.  Symmetry is supplied as a
table ``perms`` of point permutations (one row per automorphism); a search
node carries the indices of the rows that fix every point chosen so far.
At such a node the candidate/excluded sets are unions of orbits, so after a
candidate has been explored its whole orbit can be discarded.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ONE = np.uint64(1)


def to_bitsets(mask: np.ndarray) -> np.ndarray:
    """Pack a boolean (rows, N) matrix into (rows, W) uint64 words."""
    mask = np.atleast_2d(np.asarray(mask, dtype=bool))
    rows, n = mask.shape
    words = (n + 63) // 64
    padded = np.zeros((rows, words * 64), dtype=bool)
    padded[:, :n] = mask
    weights = (np.uint64(1) << np.arange(64, dtype=np.uint64))
    chunks = padded.reshape(rows, words, 64).astype(np.uint64)
    return (chunks * weights).sum(axis=2, dtype=np.uint64)


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _has(bits, i):
    return (bits[i >> 6] >> np.uint64(i & 63)) & ONE


@njit(cache=True)
def _set(bits, i):
    bits[i >> 6] |= ONE << np.uint64(i & 63)


@njit(cache=True)
def _clear(bits, i):
    bits[i >> 6] &= ~(ONE << np.uint64(i & 63))


@njit(cache=True)
def _count(bits):
    s = 0
    for w in range(bits.shape[0]):
        s += _popcount(bits[w])
    return s


@njit(cache=True)
def _first(bits):
    for w in range(bits.shape[0]):
        x = bits[w]
        if x:
            b = 0
            while not (x >> np.uint64(b)) & ONE:
                b += 1
            return w * 64 + b
    return -1


@njit(cache=True)
def _stabilizer(group, perms, v):
    keep = 0
    for i in range(group.shape[0]):
        if perms[group[i], v] == v:
            keep += 1
    out = np.empty(keep, np.int64)
    k = 0
    for i in range(group.shape[0]):
        if perms[group[i], v] == v:
            out[k] = group[i]
            k += 1
    return out


# ---------------------------------------------------------------------------
# covering: smallest set of centers whose balls cover every point
# ---------------------------------------------------------------------------


@njit(cache=True)
def _cut_bound(need, excluded, cnbr, ccoef, ccount):
    """Lower bound on further centers from the rounded ball-sum inequalities."""
    n = need.shape[0]
    gain = np.zeros(n, np.int64)
    for c in range(n):
        if _has(excluded, c):
            continue
        g = 0
        for j in range(ccount[c]):
            x = cnbr[c, j]
            a = ccoef[c, j]
            g += a if a < need[x] else need[x]
        gain[c] = g
    frac = 0.0
    for x in range(n):
        if need[x] == 0:
            continue
        m = 0
        for j in range(ccount[x]):
            g = gain[cnbr[x, j]]
            if g > m:
                m = g
        if m == 0:
            return 1e18
        frac += need[x] / m
    return np.ceil(frac - 1e-9)


@njit(cache=True)
def _cover(size, uncovered, excluded, group, perms, ball, nbr, nbr_count, best, nodes,
           need, cnbr, ccoef, ccount):
    nodes[0] += 1
    if _count(uncovered) == 0:
        return size
    if size + 1 >= best:
        return best
    n = ball.shape[0]
    words = uncovered.shape[0]
    if ccount.shape[0] > 0:
        if size + _cut_bound(need, excluded, cnbr, ccoef, ccount) >= best:
            return best
    gain = np.zeros(n, np.int64)
    for c in range(n):
        if _has(excluded, c):
            continue
        g = 0
        for w in range(words):
            g += _popcount(uncovered[w] & ball[c, w])
        gain[c] = g
    # fractional bound: a center c contributes sum_{p in B(c)} 1/m(p) <= 1
    # where m(p) is the largest gain among centers covering p
    frac = 0.0
    pick = -1
    pick_k = n + 1
    for p in range(n):
        if not _has(uncovered, p):
            continue
        m = 0
        k = 0
        for j in range(nbr_count[p]):
            c = nbr[p, j]
            if gain[c] > 0:
                k += 1
                if gain[c] > m:
                    m = gain[c]
        if m == 0:
            return best
        frac += 1.0 / m
        if k < pick_k:
            pick_k = k
            pick = p
    if size + np.ceil(frac - 1e-9) >= best:
        return best
    cands = np.empty(pick_k, np.int64)
    keys = np.empty(pick_k, np.int64)
    k = 0
    for j in range(nbr_count[pick]):
        c = nbr[pick, j]
        if gain[c] > 0:
            cands[k] = c
            keys[k] = -gain[c] * (n + 1) + c
            k += 1
    order = np.argsort(keys)
    excl = excluded.copy()
    child = np.empty(words, np.uint64)
    for i in range(pick_k):
        c = cands[order[i]]
        if _has(excl, c):
            continue
        for w in range(words):
            child[w] = uncovered[w] & ~ball[c, w]
        if group.shape[0] > 1:
            sub = _stabilizer(group, perms, c)
        else:
            sub = group
        child_need = need.copy()
        if ccount.shape[0] > 0:
            for j in range(ccount[c]):
                x = cnbr[c, j]
                child_need[x] = max(0, child_need[x] - ccoef[c, j])
        r = _cover(size + 1, child.copy(), excl.copy(), sub, perms, ball, nbr, nbr_count, best, nodes,
                   child_need, cnbr, ccoef, ccount)
        if r < best:
            best = r
        if group.shape[0] > 1:
            for g in range(group.shape[0]):
                _set(excl, perms[group[g], c])
        else:
            _set(excl, c)
        if size + 1 >= best:
            break
    return best


def _rounded_cut(ball_mask: np.ndarray):
    """Best Chvatal-Gomory rounding of the ball-summed covering constraints.

    Summing the constraints of the points in B(x) gives
    sum_c |B(x) & B(c)| y_c >= |B(x)|; dividing by k and rounding up gives a
    valid inequality for 0/1 vectors y.  Returns (coef, rhs, root bound) for
    the divisor k with the largest root bound.
    """
    b = ball_mask.astype(np.int64)
    overlap = b @ b.T
    size = np.diag(overlap)
    best = None
    for k in np.unique(overlap[overlap > 0]):
        coef = -(-overlap // k)
        rhs = -(-size // k)
        gain = np.minimum(coef, rhs[:, None]).sum(axis=0)
        m = np.where(coef > 0, gain[None, :], 0).max(axis=1)
        bound = float((rhs / m).sum())
        if best is None or bound > best[2] + 1e-9:
            best = (coef, rhs, bound)
    return best


def cover_search(ball_mask: np.ndarray, perms: np.ndarray | None, transitive: bool,
                 upper: int, use_cut: bool = True) -> tuple[int, int]:
    """Exact covering number given the boolean ball matrix.

    ``ball_mask[c, p]`` is true when p lies within delta of center c.  When
    ``transitive`` is set, ``perms`` must be the stabilizer of point 0 and
    point 0 is forced into the cover.  ``upper`` is a known cover size (the
    greedy seed).  Returns (number, nodes visited).
    """
    n = ball_mask.shape[0]
    ball = to_bitsets(ball_mask)
    counts = ball_mask.sum(axis=1)
    nbr = np.full((n, int(counts.max())), -1, np.int64)
    for p in range(n):
        idx = np.flatnonzero(ball_mask[:, p])
        nbr[p, : len(idx)] = idx
    nbr_count = ball_mask.sum(axis=0).astype(np.int64)
    if perms is None:
        perms = np.arange(n, dtype=np.int32)[None, :]
    group = np.arange(perms.shape[0], dtype=np.int64)
    nodes = np.zeros(1, np.int64)
    words = ball.shape[1]
    full = to_bitsets(np.ones((1, n), dtype=bool))[0]
    excluded = np.zeros(words, np.uint64)

    cut = _rounded_cut(ball_mask) if use_cut and np.array_equal(ball_mask, ball_mask.T) else None
    if cut is not None:
        # the cut is costly per node; keep it only when it buys a whole center at the root
        sizes = ball_mask.sum(axis=1)
        plain = float((1.0 / np.where(ball_mask, sizes[:, None], 0).max(axis=0)).sum())
        if cut[2] < plain + 1.0:
            cut = None
    if cut is None:
        need = np.zeros(n, np.int64)
        cnbr = np.zeros((0, 1), np.int64)
        ccoef = np.zeros((0, 1), np.int64)
        ccount = np.zeros(0, np.int64)
    else:
        coef, rhs, _ = cut
        ccount = (coef > 0).sum(axis=1).astype(np.int64)
        cnbr = np.full((n, int(ccount.max())), -1, np.int64)
        ccoef = np.zeros((n, int(ccount.max())), np.int64)
        for c in range(n):
            idx = np.flatnonzero(coef[c] > 0)
            cnbr[c, : len(idx)] = idx
            ccoef[c, : len(idx)] = coef[c, idx]
        need = rhs.astype(np.int64).copy()

    # the search returns a size strictly below ``best`` if one exists
    best = int(upper) + 1
    if transitive:
        start = full & ~ball[0]
        if ccount.shape[0] > 0:
            need = np.maximum(0, need - coef[0])
        r = _cover(1, start, excluded, group, perms, ball, nbr, nbr_count, best, nodes,
                   need, cnbr, ccoef, ccount)
    else:
        r = _cover(0, full, excluded, group, perms, ball, nbr, nbr_count, best, nodes,
                   need, cnbr, ccoef, ccount)
    return int(min(r, upper)), int(nodes[0])


# ---------------------------------------------------------------------------
# packing: maximum clique in the graph joining points at distance > delta
# ---------------------------------------------------------------------------


@njit(cache=True)
def _colour_sort(cand, adj, order, colours):
    words = cand.shape[0]
    rest = cand.copy()
    queue = np.empty(words, np.uint64)
    k = 0
    col = 0
    while _count(rest) > 0:
        col += 1
        for w in range(words):
            queue[w] = rest[w]
        while True:
            v = _first(queue)
            if v < 0:
                break
            _clear(rest, v)
            _clear(queue, v)
            for w in range(words):
                queue[w] &= ~adj[v, w]
            order[k] = v
            colours[k] = col
            k += 1
    return k


@njit(cache=True)
def _expand(size, cand, adj, best, nodes):
    nodes[0] += 1
    n = adj.shape[0]
    words = cand.shape[0]
    order = np.empty(n, np.int64)
    colours = np.empty(n, np.int64)
    k = _colour_sort(cand, adj, order, colours)
    cand = cand.copy()
    child = np.empty(words, np.uint64)
    for i in range(k - 1, -1, -1):
        if size + colours[i] <= best:
            return best
        v = order[i]
        nonempty = False
        for w in range(words):
            child[w] = cand[w] & adj[v, w]
            if child[w]:
                nonempty = True
        if nonempty:
            r = _expand(size + 1, child.copy(), adj, best, nodes)
            if r > best:
                best = r
        elif size + 1 > best:
            best = size + 1
        _clear(cand, v)
    return best


@njit(cache=True)
def _pack(size, cand, group, perms, adj, best, nodes):
    if group.shape[0] <= 1:
        return _expand(size, cand, adj, best, nodes)
    nodes[0] += 1
    n = adj.shape[0]
    words = cand.shape[0]
    cand = cand.copy()
    order = np.empty(n, np.int64)
    colours = np.empty(n, np.int64)
    child = np.empty(words, np.uint64)
    while True:
        k = _colour_sort(cand, adj, order, colours)
        if k == 0:
            if size > best:
                best = size
            return best
        if size + colours[k - 1] <= best:
            return best
        v = _first(cand)
        nonempty = False
        for w in range(words):
            child[w] = cand[w] & adj[v, w]
            if child[w]:
                nonempty = True
        if nonempty:
            r = _pack(size + 1, child.copy(), _stabilizer(group, perms, v), perms, adj, best, nodes)
            if r > best:
                best = r
        elif size + 1 > best:
            best = size + 1
        for g in range(group.shape[0]):
            _clear(cand, perms[group[g], v])


def pack_search(far_mask: np.ndarray, perms: np.ndarray | None, transitive: bool,
                lower: int) -> tuple[int, int]:
    """Exact packing number given ``far_mask[u, v] = distance(u, v) > delta``.

    ``lower`` is the size of a known packing.  Returns (number, nodes).
    """
    n = far_mask.shape[0]
    adj = to_bitsets(far_mask)
    if perms is None:
        perms = np.arange(n, dtype=np.int32)[None, :]
    group = np.arange(perms.shape[0], dtype=np.int64)
    nodes = np.zeros(1, np.int64)
    best = int(lower)
    if transitive:
        r = _pack(1, adj[0].copy(), group, perms, adj, max(best, 1), nodes)
    else:
        full = to_bitsets(np.ones((1, n), dtype=bool))[0]
        r = _pack(0, full, group, perms, adj, best, nodes)
    return int(max(r, best)), int(nodes[0])
