"""MDS-regime constructions from generalized Reed-Solomon duals.

When a mask expands through size m (every column set R with |R| <= m has
|S(R)| >= |R|), the kernel can be an [n, n-m] MDS code at field sizes as
small as n + m - 1.  The parity check is built in polynomial form: row i
is the evaluation vector of p_i(x) = prod_{j in Z_i} (x - alpha_j),
where Z_i is the complement of the row's support.  Zeros of the mask are
then structural (p_i vanishes exactly on its zero set), and the whole
construction succeeds if and only if the m row polynomials are linearly
independent, which a seeded point search establishes quickly and an
exhaustive subset check verifies afterwards.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from math import perm

import numpy as np

from .codec import GFMatrix, gf_rank, kruskal_rank_verify
from .errors import (
    AttemptsExhaustedError,
    MaskFormatError,
    PreconditionFailedError,
    WidthTooSmallError,
)
from .gf import FieldSpec, parse_field_header
from .mask import Mask, structural_kruskal_rank
from .rng import SeededStream

EXHAUSTIVE_POINT_LIMIT = 200_000  # ordered point tuples tried by the fallback


@dataclass(frozen=True)
class GRSParityCheck:
    """Parity-check matrix H with H_ij = p_i(alpha_j); kernel is MDS."""

    mask: Mask
    H: GFMatrix
    points: tuple[int, ...]
    zero_sets: tuple[tuple[int, ...], ...]
    polys: tuple[tuple[int, ...], ...]  # ascending coefficients, length m each


def window_mask(n: int, m: int, w: int) -> Mask:
    """Cyclic w-regular mask whose rows are evenly spread width-w windows.

    Row i covers columns start_i .. start_i + w - 1 (mod n) with
    start_i = floor(i * n / m), so the windows wrap the cycle as evenly
    as possible; column weights then differ by at most one.  Requires
    w >= n - m + 1, below which no such mask can expand through size m.
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    if w > n:
        raise ValueError("window width cannot exceed n")
    if w < n - m + 1:
        raise WidthTooSmallError(f"width {w} < n - m + 1 = {n - m + 1}")
    bits = []
    for i in range(m):
        start = (i * n) // m
        row = [0] * n
        for off in range(w):
            row[(start + off) % n] = 1
        bits.append(tuple(row))
    return Mask(m, n, tuple(bits))


def _poly_from_roots(f: FieldSpec, roots: list[int]) -> list[int]:
    # prod (x - r), ascending coefficients
    coeffs = [1]
    for r in roots:
        nr = f.neg(r)
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] = f.add(nxt[i], f.mul(c, nr))
            nxt[i + 1] = f.add(nxt[i + 1], c)
        coeffs = nxt
    return coeffs


def _poly_eval(f: FieldSpec, coeffs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, x), c)
    return acc


def _poly_mul_trunc(f: FieldSpec, a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = f.add(out[i + j], f.mul(x, y))
    return out


def _try_points(
    mask: Mask, f: FieldSpec, points: list[int], stream: SeededStream
) -> GRSParityCheck | None:
    m, n = mask.m, mask.n
    zero_sets = [
        tuple(j for j in range(n) if not mask.bits[i][j]) for i in range(m)
    ]
    polys = []
    coeff_rows = []
    for zs in zero_sets:
        c = _poly_from_roots(f, [points[j] for j in zs])
        # rows whose zero set leaves degree slack get a random cofactor,
        # drawn until nonzero, so the family can reach full rank
        slack = (m - 1) - (len(c) - 1)
        if slack > 0:
            while True:
                g = [stream.below(f.q) for _ in range(slack + 1)]
                if any(g):
                    break
            c = _poly_mul_trunc(f, c, g)
            while len(c) > 1 and c[-1] == 0:
                c.pop()
        c = c + [0] * (m - len(c))
        polys.append(tuple(c))
        coeff_rows.append(c)
    if gf_rank(GFMatrix(f, coeff_rows)) != m:
        return None
    data = np.zeros((m, n), dtype=np.int64)
    for i in range(m):
        zs = set(zero_sets[i])
        for j in range(n):
            if j not in zs:
                data[i, j] = _poly_eval(f, list(polys[i]), points[j])
    h = GFMatrix(f, data)
    return GRSParityCheck(
        mask=mask,
        H=h,
        points=tuple(points),
        zero_sets=tuple(zero_sets),
        polys=tuple(polys),
    )


def grs_dual_construct(
    mask: Mask,
    f: FieldSpec,
    seed: int = 0,
    max_attempts: int = 200,
    multipliers=None,
) -> GRSParityCheck:
    """GRS parity check obeying the mask, with an MDS kernel, verified.

    Preconditions: the mask expands through size m, q >= n + m - 1, and
    every row has at least n - m + 1 ones.  Point selection is seeded
    random with retries; small fields fall back to deterministic
    exhaustive enumeration of ordered point tuples.  Existence at
    q >= n + m - 1 is guaranteed, so exhaustion indicates budget, not
    impossibility.

    Columns default to multiplier 1 (plain Vandermonde form); a nonzero
    multiplier vector is absorbed into H by column scaling, which changes
    neither the support nor the kernel's weight distribution.
    """
    m, n = mask.m, mask.n
    if multipliers is not None:
        mults = [f.check(int(c)) for c in multipliers]
        if len(mults) != n:
            raise ValueError("one multiplier per column required")
        if any(c == 0 for c in mults):
            raise ValueError("column multipliers must be nonzero")
    else:
        mults = None
    res = structural_kruskal_rank(mask, size_cap=min(m, n))
    if res.violator is not None:
        raise PreconditionFailedError(
            f"mask does not expand through size {m}: columns {res.violator} "
            f"span only {len(set().union(*(mask.col_support(j) for j in res.violator)))} rows",
            violator=res.violator,
        )
    if f.q < n + m - 1:
        raise PreconditionFailedError(f"field order {f.q} below n + m - 1 = {n + m - 1}")
    for i in range(m):
        if sum(mask.bits[i]) < n - m + 1:
            raise PreconditionFailedError(
                f"row {i} has fewer than n - m + 1 = {n - m + 1} ones"
            )
    def absorb(g: GRSParityCheck) -> GRSParityCheck:
        if mults is None:
            return g
        data = g.H.data.copy()
        for j, c in enumerate(mults):
            for i in range(m):
                data[i, j] = f.mul(int(data[i, j]), c)
        return GRSParityCheck(g.mask, GFMatrix(f, data), g.points, g.zero_sets, g.polys)

    stream = SeededStream(seed)
    for _ in range(max_attempts):
        points = stream.sample_distinct(f.q, n)
        got = _try_points(mask, f, points, stream)
        if got is not None:
            ok, counterexample = mds_verify(got.H)
            if not ok:
                raise AssertionError(f"independent row polynomials but dependent columns {counterexample}")
            return absorb(got)
    if perm(f.q, n) <= EXHAUSTIVE_POINT_LIMIT:
        for points in permutations(range(f.q), n):
            got = _try_points(mask, f, list(points), SeededStream(seed))
            if got is not None:
                ok, _ = mds_verify(got.H)
                if ok:
                    return absorb(got)
    raise AttemptsExhaustedError(
        f"no admissible point assignment within {max_attempts} seeded attempts",
        attempts=max_attempts,
        diagnostics={"q": f.q, "n": n, "m": m},
    )


def mds_verify(h: GFMatrix) -> tuple[bool, tuple[int, ...] | None]:
    """Whether rank(h) = m and every m-column subset is nonsingular."""
    m = h.rows
    if m > h.cols:
        raise PreconditionFailedError("mds_verify requires rows <= cols")
    if gf_rank(h) != m:
        return False, None
    return kruskal_rank_verify(h, m)


def grs_to_json(g: GRSParityCheck) -> str:
    obj = {
        "field": g.H.field.header(),
        "points": list(g.points),
        "zero_sets": [list(z) for z in g.zero_sets],
        "H": g.H.to_rows(),
    }
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def grs_from_json(text: str) -> tuple[GFMatrix, tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Read back (H, points, zero_sets); the mask and polys are derivable."""
    try:
        obj = json.loads(text)
        f = parse_field_header(obj["field"])
        h = GFMatrix(f, obj["H"])
        points = tuple(int(p) for p in obj["points"])
        zero_sets = tuple(tuple(int(j) for j in z) for z in obj["zero_sets"])
        return h, points, zero_sets
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
        raise MaskFormatError(f"bad GRS file: {e}") from e
