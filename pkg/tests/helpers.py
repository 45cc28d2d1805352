"""Independent brute-force oracles used to cross-check the package.

Everything here recomputes results from definitions (exhaustive subset
scans, memoized matching recursion, full codeword enumeration), sharing
no algorithmic path with the implementations under test.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

from sparity.mask import Mask
from sparity.rng import SeededStream


def brute_tau(mask: Mask) -> tuple[int, tuple[int, ...] | None]:
    """tau by scanning all 2^n column subsets; returns a minimum violator."""
    sup = [0] * mask.n
    for j in range(mask.n):
        for i in range(mask.m):
            if mask.bits[i][j]:
                sup[j] |= 1 << i
    best_size = None
    best_set = None
    for r in range(1, 1 << mask.n):
        rows = 0
        cols = []
        rr = r
        while rr:
            low = rr & -rr
            j = low.bit_length() - 1
            rows |= sup[j]
            cols.append(j)
            rr ^= low
        if bin(rows).count("1") < len(cols) and (
            best_size is None or len(cols) < best_size
        ):
            best_size = len(cols)
            best_set = tuple(cols)
    if best_size is None:
        return mask.n, None
    return best_size - 1, best_set


def brute_matching(mask: Mask) -> int:
    """Maximum matching size by memoized recursion over column bitmasks."""
    adj = [
        [j for j in range(mask.n) if mask.bits[i][j]] for i in range(mask.m)
    ]

    @lru_cache(maxsize=None)
    def rec(i: int, used: int) -> int:
        if i == mask.m:
            return 0
        best = rec(i + 1, used)
        for j in adj[i]:
            bit = 1 << j
            if not used & bit:
                best = max(best, 1 + rec(i + 1, used | bit))
        return best

    out = rec(0, 0)
    rec.cache_clear()
    return out


def brute_min_weight(h) -> int:
    """Minimum codeword weight of ker(h) by full codeword enumeration.

    The kernel basis is certified before use (h Gᵀ = 0 plus the rank
    count proves rowspace(G) equals ker h exactly), then every one of the
    q^k coefficient vectors is evaluated.  Returns n + 1 for the zero
    code, matching the distance convention.
    """
    import numpy as np

    from sparity.codec import GFMatrix, gf_rank, kernel_basis

    f = h.field
    n = h.cols
    g = kernel_basis(h)
    assert not h.mul(GFMatrix(f, g.data.T)).data.any(), "basis not in kernel"
    k = g.rows
    assert gf_rank(g) == k == n - gf_rank(h), "basis does not span the kernel"
    if k == 0:
        return n + 1
    if f.q**k > 4_000_000:
        raise ValueError("instance too large for the enumeration oracle")
    if f.k == 1:
        coeffs = np.array(list(product(range(f.q), repeat=k)), dtype=np.int64)
        words = coeffs @ g.data % f.q
        weights = (words != 0).sum(axis=1)
        weights = weights[coeffs.any(axis=1)]
        return int(weights.min())
    best = None
    rows = g.to_rows()
    for cs in product(range(f.q), repeat=k):
        if not any(cs):
            continue
        word = [0] * n
        for c, vec in zip(cs, rows):
            if c:
                for j in range(n):
                    word[j] = f.add(word[j], f.mul(c, vec[j]))
        w = sum(1 for v in word if v)
        if best is None or w < best:
            best = w
    return best if best is not None else n + 1


def brute_spark(h) -> int:
    """Smallest dependent column-set size by rank over all subsets."""
    from sparity.codec import GFMatrix, gf_rank

    n = h.cols
    for t in range(1, n + 1):
        for cols in combinations(range(n), t):
            sub = GFMatrix(h.field, h.data[:, list(cols)])
            if gf_rank(sub) < t:
                return t
    return n + 1


def graph_incidence_expansion(mask: Mask) -> int:
    """eta(G) for the multigraph of a 2-regular mask, columns as vertices."""
    edges = []
    for i in range(mask.m):
        sup = [j for j in range(mask.n) if mask.bits[i][j]]
        assert len(sup) == 2 or len(sup) == 1, "mask is not 2-regular"
        edges.append(tuple(sup))
    n = mask.n
    eta = n
    for size in range(1, n + 1):
        ok_all = True
        for verts in combinations(range(n), size):
            vs = set(verts)
            incident = sum(1 for e in edges if vs & set(e))
            if incident < size:
                ok_all = False
                break
        if not ok_all:
            eta = size - 1
            break
    return eta


def random_mask(stream: SeededStream, m: int, n: int, density_pct: int) -> Mask:
    bits = tuple(
        tuple(1 if stream.below(100) < density_pct else 0 for _ in range(n))
        for _ in range(m)
    )
    return Mask(m, n, bits)
