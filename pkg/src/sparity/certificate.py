"""Vandermonde certificates: ker(H) as a subcode of a GRS code.

A bundle (H, A, points, multipliers) certifies distance r + 1 for the
kernel of H when H obeys the mask, rank(H) = m, rank(A) = r, and
A H = V diag(multipliers) with V the r-row Vandermonde at the distinct
points.  Since full-row-rank factorization is equivalent to the kernel
inclusion ker(H) <= ker(V), a certificate exists if and only if some
(n-m)-dimensional subspace C of ker(V) arises as ker(H) for a mask-
obeying H.  The exhaustive search enumerates exactly those subspaces
(column multipliers are absorbed into H, and evaluation points are
normalized so the first two are 0 and 1, which an affine substitution
always permits without changing any rowspace), then decides
realizability of each C by a Rado-type transversal condition on the
per-row admissible subspaces of C-perp.  A negative exhaustive answer is
therefore a proof for that field; the heuristic mode never proves
anything and its misses are reported as budget exhaustion only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import perm

import numpy as np

from .codec import GFMatrix, gf_rank, kernel_basis, rref, solve_rows
from .errors import (
    DuplicatePointsError,
    MaskFormatError,
    PreconditionFailedError,
    RankDeficientError,
    SearchSpaceTooLargeError,
    ZeroMultiplierError,
)
from .gf import FieldSpec, parse_field_header
from .mask import Mask, structural_row_rank
from .rng import SeededStream

DEFAULT_EXHAUSTIVE_CEILING = 2_000_000


@dataclass(frozen=True)
class CertificateBundle:
    mask: Mask
    H: GFMatrix
    A: GFMatrix
    points: tuple[int, ...]
    multipliers: tuple[int, ...]
    r: int


@dataclass(frozen=True)
class SearchResult:
    status: str  # found | none_exhausted | none_budget
    bundle: CertificateBundle | None
    attempts: int
    notes: tuple[str, ...]
    empirical: bool


def vandermonde(
    points, r: int, f: FieldSpec, multipliers=None
) -> GFMatrix:
    """V with V[i][j] = mult_j * t_j^i for i in 0..r-1; points distinct."""
    pts = [f.check(int(t)) for t in points]
    if len(set(pts)) != len(pts):
        raise DuplicatePointsError(f"points {pts} are not pairwise distinct")
    if r < 0:
        raise ValueError("r must be nonnegative")
    mults = [1] * len(pts) if multipliers is None else [f.check(int(c)) for c in multipliers]
    if len(mults) != len(pts):
        raise ValueError("one multiplier per point required")
    if any(c == 0 for c in mults):
        raise ZeroMultiplierError("column multipliers must be nonzero")
    data = np.zeros((r, len(pts)), dtype=np.int64)
    for j, (t, c) in enumerate(zip(pts, mults)):
        v = c
        for i in range(r):
            data[i, j] = v
            v = f.mul(v, t)
    return GFMatrix(f, data)


def solve_factor(h: GFMatrix, v: GFMatrix) -> GFMatrix | None:
    """A with A h = v when every row of v lies in rowspace(h), else None.

    Requires h to have full row rank; this makes the factorization
    equivalent to ker(h) <= ker(v).
    """
    if h.field != v.field or h.cols != v.cols:
        raise ValueError("field or column-count mismatch")
    if gf_rank(h) != h.rows:
        raise RankDeficientError("H must have full row rank")
    return solve_rows(h, v)


def moment_rank(points, f: FieldSpec) -> int:
    """Rank of the 5 x s matrix with columns (1, t, t^2, t^3, t^4)."""
    return gf_rank(vandermonde(points, 5, f))


def verify_certificate(bundle: CertificateBundle) -> tuple[bool, list[str]]:
    """Run the five certificate checks; failures come back by name.

    Checks: mask_obedience, distinct_points, rank_H, rank_A and
    factorization (A H = V diag(multipliers); a zero multiplier fails
    here since no Vandermonde column can vanish).
    """
    failures: list[str] = []
    f = bundle.H.field
    n = bundle.mask.n
    if not bundle.H.obeys(bundle.mask):
        failures.append("mask_obedience")
    # with r = 0 the Vandermonde is empty and carries no evaluation points
    pts_ok = (bundle.r == 0 and len(bundle.points) == 0) or (
        len(bundle.points) == n
        and all(0 <= t < f.q for t in bundle.points)
        and len(set(bundle.points)) == n
    )
    if not pts_ok:
        failures.append("distinct_points")
    if gf_rank(bundle.H) != bundle.mask.m or bundle.H.rows != bundle.mask.m:
        failures.append("rank_H")
    if bundle.A.rows != bundle.r or gf_rank(bundle.A) != bundle.r:
        failures.append("rank_A")
    fact_ok = False
    if pts_ok and len(bundle.multipliers) == n and all(
        0 < c < f.q for c in bundle.multipliers
    ) and bundle.A.cols == bundle.H.rows and bundle.A.field == f:
        if len(bundle.points) == n:
            v = vandermonde(bundle.points, bundle.r, f, bundle.multipliers)
        else:
            v = GFMatrix.zeros(f, 0, n)
        fact_ok = bundle.A.mul(bundle.H) == v
    if not fact_ok:
        failures.append("factorization")
    return not failures, failures


# -- exhaustive search ---------------------------------------------------------


def _gaussian_binomial(d: int, c: int, q: int) -> int:
    if c < 0 or c > d:
        return 0
    num = den = 1
    for i in range(c):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _rref_subspace_bases(d: int, c: int, f: FieldSpec):
    """All c-dimensional subspaces of F^d, one canonical RREF basis each."""
    if c == 0:
        yield np.zeros((0, d), dtype=np.int64)
        return
    for pivots in combinations(range(d), c):
        free_slots = [
            (i, j)
            for i in range(c)
            for j in range(d)
            if j > pivots[i] and j not in pivots
        ]
        base = np.zeros((c, d), dtype=np.int64)
        for i, pc in enumerate(pivots):
            base[i, pc] = 1
        for values in product(range(f.q), repeat=len(free_slots)):
            x = base.copy()
            for (i, j), val in zip(free_slots, values):
                x[i, j] = val
            yield x


def _normalized_point_tuples(f: FieldSpec, n: int):
    """Ordered distinct tuples with the first points pinned to 0, 1.

    Any certificate's points map to this form by an affine substitution
    t -> (t - t1)/(t2 - t1), which multiplies V by an invertible matrix
    and so preserves every rank and rowspace condition.
    """
    if n == 1:
        yield (0,)
        return
    rest = [x for x in range(f.q) if x not in (0, 1)]
    for tail in permutations(rest, n - 2):
        yield (0, 1) + tail


def _matmul(f: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return GFMatrix(f, a).mul(GFMatrix(f, b)).data


def _row_space_dim(f: FieldSpec, rows: list[np.ndarray]) -> int:
    if not rows:
        return 0
    return gf_rank(GFMatrix(f, np.vstack(rows)))


def _rado_feasible(f: FieldSpec, bases: list[np.ndarray], fixed: list[np.ndarray]) -> bool:
    base_dim = _row_space_dim(f, fixed)
    idx = range(len(bases))
    for size in range(1, len(bases) + 1):
        for subset in combinations(idx, size):
            stack = fixed + [bases[i] for i in subset]
            if _row_space_dim(f, stack) - base_dim < size:
                return False
    return True


def _nonzero_vectors(f: FieldSpec, basis: np.ndarray):
    """Nonzero combinations of the basis rows, one per scalar class."""
    d = basis.shape[0]
    for lead in range(d):
        for tail in product(range(f.q), repeat=d - lead - 1):
            coeffs = [0] * lead + [1] + list(tail)
            vec = np.zeros(basis.shape[1], dtype=np.int64)
            for cf, row in zip(coeffs, basis):
                if cf:
                    vec = np.array(
                        [f.add(int(x), f.mul(cf, int(y))) for x, y in zip(vec, row)],
                        dtype=np.int64,
                    )
            yield vec


def _transversal(f: FieldSpec, bases: list[np.ndarray]) -> list[np.ndarray] | None:
    """Independent vectors, one from each subspace, via Rado-guided greedy.

    When the Rado condition holds a completion exists, so picking any
    candidate that keeps the residual system feasible never backtracks.
    """
    if not _rado_feasible(f, bases, []):
        return None
    order = sorted(range(len(bases)), key=lambda i: bases[i].shape[0])
    chosen: dict[int, np.ndarray] = {}
    fixed: list[np.ndarray] = []
    for pos, i in enumerate(order):
        remaining = [bases[j] for j in order[pos + 1 :]]
        picked = None
        for cand in _nonzero_vectors(f, bases[i]):
            stack_dim = _row_space_dim(f, fixed + [cand.reshape(1, -1)])
            if stack_dim != len(fixed) + 1:
                continue
            if _rado_feasible(f, remaining, fixed + [cand.reshape(1, -1)]):
                picked = cand
                break
        if picked is None:
            raise AssertionError("Rado condition held but no candidate extends")
        chosen[i] = picked
        fixed.append(picked.reshape(1, -1))
    return [chosen[i] for i in range(len(bases))]


def _matching_fill(mask: Mask, f: FieldSpec) -> GFMatrix:
    # rank-m filling from a maximum matching: a 1 on each matched position
    _, matching = structural_row_rank(mask)
    data = np.zeros((mask.m, mask.n), dtype=np.int64)
    for r, c in matching:
        data[r, c] = 1
    return GFMatrix(f, data)


def _exhaustive_search(
    mask: Mask, f: FieldSpec, r: int, max_work: int
) -> SearchResult:
    m, n = mask.m, mask.n
    rho, _ = structural_row_rank(mask)
    if rho < m:
        return SearchResult(
            "none_exhausted", None, 0,
            (f"structural row rank {rho} < m = {m}: no filling has full row rank",),
            False,
        )
    if r == 0:
        h = _matching_fill(mask, f)
        bundle = CertificateBundle(
            mask, h, GFMatrix.zeros(f, 0, m), (), tuple([1] * n), 0
        )
        ok, fails = verify_certificate(bundle)
        if not ok:
            raise AssertionError(f"trivial bundle failed checks {fails}")
        return SearchResult("found", bundle, 1, (), False)
    if f.q < n:
        return SearchResult(
            "none_exhausted", None, 0,
            (f"field order {f.q} < n = {n}: no distinct evaluation points exist",),
            False,
        )
    tuples = perm(f.q - 2, n - 2) if n >= 2 else 1
    subspaces = _gaussian_binomial(n - r, n - m, f.q)
    if tuples * subspaces > max_work:
        raise SearchSpaceTooLargeError(
            f"{tuples} point tuples x {subspaces} kernel subspaces exceeds the "
            f"ceiling {max_work}"
        )
    forbidden = [
        [j for j in range(n) if not mask.bits[i][j]] for i in range(m)
    ]
    attempts = 0
    for pts in _normalized_point_tuples(f, n):
        v = vandermonde(pts, r, f)
        kv = kernel_basis(v)  # (n - r) x n
        for x in _rref_subspace_bases(n - r, n - m, f):
            attempts += 1
            c_basis = _matmul(f, x, kv.data) if x.shape[0] else np.zeros((0, n), dtype=np.int64)
            w = kernel_basis(GFMatrix(f, c_basis))  # m x n, spans C-perp
            bases = []
            feasible = True
            for i in range(m):
                if forbidden[i]:
                    sub = w.data[:, forbidden[i]].T  # constraints on y
                    u = kernel_basis(GFMatrix(f, sub))
                else:
                    u = GFMatrix.identity(f, m)
                if u.rows == 0:
                    feasible = False
                    break
                bases.append(u.data)
            if not feasible:
                continue
            picks = _transversal(f, bases)
            if picks is None:
                continue
            h_rows = [_matmul(f, y.reshape(1, -1), w.data)[0] for y in picks]
            h = GFMatrix(f, np.vstack(h_rows))
            a = solve_factor(h, v)
            if a is None:
                raise AssertionError("rowspace inclusion guaranteed by construction")
            bundle = CertificateBundle(mask, h, a, tuple(pts), tuple([1] * n), r)
            ok, fails = verify_certificate(bundle)
            if not ok:
                raise AssertionError(f"constructed bundle failed checks {fails}")
            return SearchResult("found", bundle, attempts, (), False)
    return SearchResult(
        "none_exhausted", None, attempts,
        (f"no certificate of distance {r + 1} exists over {f.header()}",),
        False,
    )


# -- heuristic search -----------------------------------------------------------


def _two_class_split(mask: Mask) -> tuple[list[int], list[int]] | None:
    """2-color rows so every weight-2 column straddles classes, if possible."""
    if any(len(mask.col_support(j)) > 2 for j in range(mask.n)):
        return None
    adj: dict[int, set[int]] = {i: set() for i in range(mask.m)}
    for j in range(mask.n):
        sup = sorted(mask.col_support(j))
        if len(sup) == 2:
            adj[sup[0]].add(sup[1])
            adj[sup[1]].add(sup[0])
    color: dict[int, int] = {}
    for start in range(mask.m):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in adj[u]:
                if v not in color:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    x = [i for i in range(mask.m) if color[i] == 0]
    y = [i for i in range(mask.m) if color[i] == 1]
    return x, y


def _span_intersection(f: FieldSpec, b1: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """Basis of rowspace(b1) intersect rowspace(b2)."""
    if b1.shape[0] == 0 or b2.shape[0] == 0:
        return np.zeros((0, b1.shape[1]), dtype=np.int64)
    stacked = np.vstack([b1, b2])
    # y = (y1, -y2) with y @ stacked = 0 gives y1 @ b1 = y2 @ b2
    ker = kernel_basis(GFMatrix(f, stacked.T))
    vecs = []
    for row in ker.data:
        y1 = row[: b1.shape[0]]
        vec = _matmul(f, y1.reshape(1, -1), b1)[0]
        if vec.any():
            vecs.append(vec)
    if not vecs:
        return np.zeros((0, b1.shape[1]), dtype=np.int64)
    red, piv = rref(GFMatrix(f, np.vstack(vecs)))
    return red.data[: len(piv)]


def _random_vector_in(f: FieldSpec, basis: np.ndarray, stream: SeededStream) -> np.ndarray:
    while True:
        coeffs = [stream.below(f.q) for _ in range(basis.shape[0])]
        if any(coeffs):
            break
    vec = np.zeros(basis.shape[1], dtype=np.int64)
    for cf, row in zip(coeffs, basis):
        if cf:
            vec = np.array(
                [f.add(int(a), f.mul(cf, int(b))) for a, b in zip(vec, row)],
                dtype=np.int64,
            )
    return vec


def _solve_columns(
    mask: Mask, f: FieldSpec, a_cols: dict[int, np.ndarray], v: GFMatrix,
    stream: SeededStream,
) -> GFMatrix | None:
    """H obeying the mask with A H = V, given A's columns; None if stuck."""
    m, n = mask.m, mask.n
    r = v.rows
    data = np.zeros((m, n), dtype=np.int64)
    null_info = []
    for j in range(n):
        sup = sorted(mask.col_support(j))
        if not sup:
            if v.data[:, j].any():
                return None
            null_info.append((j, sup, None))
            continue
        a_sub = np.column_stack([a_cols[i] for i in sup])
        aug = np.column_stack([a_sub, v.data[:, j]])
        red, piv = rref(GFMatrix(f, aug))
        if any(pc == len(sup) for pc in piv):
            return None  # inconsistent column
        x = [0] * len(sup)
        for ri, pc in enumerate(piv):
            x[pc] = int(red.data[ri, len(sup)])
        for t, i in enumerate(sup):
            data[i, j] = x[t]
        nullb = kernel_basis(GFMatrix(f, a_sub))
        null_info.append((j, sup, nullb.data if nullb.rows else None))
    h = GFMatrix(f, data)
    for _ in range(6):
        if gf_rank(h) == m:
            return h
        bumped = False
        for j, sup, nullb in null_info:
            if nullb is None:
                continue
            extra = _random_vector_in(f, nullb, stream)
            for t, i in enumerate(sup):
                h.data[i, j] = f.add(int(h.data[i, j]), int(extra[t]))
            bumped = True
        if not bumped:
            return None
    return None


def _heuristic_search(
    mask: Mask, f: FieldSpec, r: int, budget: int, seed: int
) -> SearchResult:
    m, n = mask.m, mask.n
    stream = SeededStream(seed)
    notes: list[str] = []
    rho, _ = structural_row_rank(mask)
    if rho < m:
        notes.append(f"structural row rank {rho} < m: every candidate fails the rank check")
    if f.q < n:
        notes.append(f"field order {f.q} < n = {n}: distinct points cannot be sampled")
    zero_col = any(not mask.col_support(j) for j in range(n))
    if zero_col and r >= 1:
        notes.append("a zero column cannot match any Vandermonde column")
    if r == 0 and rho == m:
        h = _matching_fill(mask, f)
        bundle = CertificateBundle(mask, h, GFMatrix.zeros(f, 0, m), (), tuple([1] * n), 0)
        ok, _ = verify_certificate(bundle)
        if ok:
            return SearchResult("found", bundle, 1, tuple(notes), True)
    feasible = rho == m and f.q >= n and not (zero_col and r >= 1) and r >= 1
    split = _two_class_split(mask) if feasible else None
    attempts = 0
    while attempts < budget:
        attempts += 1
        if not feasible:
            continue  # each attempt fails at the sampling stage
        pts = stream.sample_distinct(f.q, n)
        v = vandermonde(pts, r, f)
        if split is not None:
            got = _alternating_attempt(mask, f, r, v, split, stream)
        else:
            got = _restart_attempt(mask, f, r, v, stream)
        if got is None:
            continue
        bundle = CertificateBundle(mask, got[0], got[1], tuple(pts), tuple([1] * n), r)
        ok, _ = verify_certificate(bundle)
        if ok:
            return SearchResult("found", bundle, attempts, tuple(notes), True)
    notes.append("heuristic budget exhausted; absence is NOT established (empirical result)")
    return SearchResult("none_budget", None, attempts, tuple(notes), True)


def _restart_attempt(mask, f, r, v, stream):
    m = mask.m
    for _ in range(4):
        a = GFMatrix(
            f,
            np.array(
                [[stream.below(f.q) for _ in range(m)] for _ in range(r)],
                dtype=np.int64,
            ),
        )
        if gf_rank(a) == r:
            break
    else:
        return None
    a_cols = {i: a.data[:, i] for i in range(m)}
    h = _solve_columns(mask, f, a_cols, v, stream)
    if h is None:
        return None
    return h, a


def _alternating_attempt(mask, f, r, v, split, stream, sweeps: int = 4):
    xs, ys = split
    n = mask.n
    cols_of = {i: [j for j in range(n) if mask.bits[i][j]] for i in range(mask.m)}
    vecs: dict[int, np.ndarray] = {}
    for i in xs:
        vecs[i] = np.array([stream.below(f.q) for _ in range(r)], dtype=np.int64)
        if not vecs[i].any():
            vecs[i][0] = 1
    eye = np.eye(r, dtype=np.int64)

    def refresh(side, other_set):
        for i in side:
            space = eye
            for j in cols_of[i]:
                sup = sorted(mask.col_support(j))
                others = [u for u in sup if u != i]
                col_v = v.data[:, j].reshape(1, -1)
                if others:
                    u = others[0]
                    if u in vecs:
                        cons = np.vstack([col_v, vecs[u].reshape(1, -1)])
                    else:
                        continue
                else:
                    cons = col_v
                space = _span_intersection(f, space, cons)
                if space.shape[0] == 0:
                    return False
            vecs[i] = _random_vector_in(f, space, stream)
        return True

    for _ in range(sweeps):
        if not refresh(ys, xs) or not refresh(xs, ys):
            return None
        a_cols = {i: vecs[i] for i in range(mask.m)}
        a = GFMatrix(f, np.column_stack([a_cols[i] for i in range(mask.m)]))
        if gf_rank(a) != r:
            continue
        h = _solve_columns(mask, f, a_cols, v, stream)
        if h is not None:
            return h, a
    return None


def certificate_search(
    mask: Mask,
    f: FieldSpec,
    r: int,
    budget: int = 10_000,
    seed: int = 0,
    mode: str = "heuristic",
    max_work: int = DEFAULT_EXHAUSTIVE_CEILING,
) -> SearchResult:
    """Search for a distance-(r+1) certificate on the mask over GF(q).

    Exhaustive mode decides existence for this specific field (subject to
    the work ceiling); heuristic mode is seeded sampling plus, on masks
    whose columns touch at most two rows, the alternating two-sided
    solver.  A heuristic miss means only that the budget ran out.
    """
    if not 0 <= r <= mask.m or mask.m > mask.n:
        raise PreconditionFailedError("need 0 <= r <= m <= n")
    if mode == "exhaustive":
        return _exhaustive_search(mask, f, r, max_work)
    if mode == "heuristic":
        return _heuristic_search(mask, f, r, budget, seed)
    raise ValueError(f"unknown mode {mode!r}")


# -- degree-two polynomial checks ------------------------------------------------


def _poly_trimmed(coeffs) -> list[int]:
    c = [int(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(f: FieldSpec, a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = f.add(out[i + j], f.mul(x, y))
    return out


def _poly_shift(f: FieldSpec, coeffs: list[int], a: int) -> list[int]:
    """Coefficients of p(t + a) for deg <= 2."""
    c = coeffs + [0] * (3 - len(coeffs))
    c0, c1, c2 = c[0], c[1], c[2]
    two = f.add(1, 1)
    out0 = f.add(f.add(c0, f.mul(c1, a)), f.mul(c2, f.mul(a, a)))
    out1 = f.add(c1, f.mul(f.mul(two, c2), a))
    return _poly_trimmed([out0, out1, c2])


def _coprime_deg2(f: FieldSpec, a: list[int], b: list[int]) -> bool:
    """Resultant test for polynomials of degree <= 2 over the field."""
    da, db = len(a) - 1, len(b) - 1
    if da == 0 or db == 0:
        return True  # a nonzero constant shares no root
    size = da + db
    rows = []
    ra = list(reversed(a))
    rb = list(reversed(b))
    for s in range(db):
        rows.append([0] * s + ra + [0] * (size - s - len(ra)))
    for s in range(da):
        rows.append([0] * s + rb + [0] * (size - s - len(rb)))
    return gf_rank(GFMatrix(f, rows)) == size


def shift_invariant_pair_check(
    rp, sp, a: int, f: FieldSpec
) -> tuple[bool, bool]:
    """For char-2 fields: is R(t+a)S(t) = R(t)S(t+a), and do both R, S lie
    in span{1, t^2 + a t}?

    Inputs are ascending coefficient sequences of degree at most 2; the
    pair must be coprime and a nonzero.  Invariance forces membership in
    the two-dimensional invariant space, which is what the returned pair
    lets callers confirm.
    """
    if f.p != 2:
        raise PreconditionFailedError("characteristic-2 field required")
    f.check(a)
    if a == 0:
        raise PreconditionFailedError("shift a must be nonzero")
    r = _poly_trimmed(rp)
    s = _poly_trimmed(sp)
    if not r or not s:
        raise PreconditionFailedError("polynomials must be nonzero")
    if len(r) > 3 or len(s) > 3:
        raise PreconditionFailedError("degree at most 2 required")
    for c in r + s:
        f.check(c)
    if not _coprime_deg2(f, r, s):
        raise PreconditionFailedError("polynomials must be coprime")
    lhs = _poly_mul(f, _poly_shift(f, r, a), s)
    rhs = _poly_mul(f, r, _poly_shift(f, s, a))
    ln = max(len(lhs), len(rhs))
    lhs += [0] * (ln - len(lhs))
    rhs += [0] * (ln - len(rhs))
    invariant = all(x == y for x, y in zip(lhs, rhs))

    def in_span(c: list[int]) -> bool:
        cc = c + [0] * (3 - len(c))
        return cc[1] == f.mul(cc[2], a)

    return invariant, in_span(r) and in_span(s)


# -- serialization ----------------------------------------------------------------


def bundle_to_json(b: CertificateBundle) -> str:
    obj = {
        "mask": b.mask.to_json_obj(),
        "field": b.H.field.header(),
        "points": list(b.points),
        "multipliers": list(b.multipliers),
        "H": b.H.to_rows(),
        "A": b.A.to_rows(),
        "r": b.r,
    }
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def bundle_from_json(text: str) -> CertificateBundle:
    try:
        obj = json.loads(text)
        mask = Mask.from_json_obj(obj["mask"])
        f = parse_field_header(obj["field"])
        h = GFMatrix(f, obj["H"])
        r = int(obj["r"])
        a_rows = obj["A"]
        a = GFMatrix(f, np.array(a_rows, dtype=np.int64).reshape(r, mask.m))
        return CertificateBundle(
            mask=mask,
            H=h,
            A=a,
            points=tuple(int(t) for t in obj["points"]),
            multipliers=tuple(int(c) for c in obj["multipliers"]),
            r=r,
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
        raise MaskFormatError(f"bad certificate file: {e}") from e
