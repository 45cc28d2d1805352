"""Exact linear algebra over GF(q) and randomized mask filling.

Matrices hold integer element encodings in a numpy int64 array.  Prime
fields get vectorized mod-p elimination (entries stay below 2^31, so
products fit int64); extension fields fall back to scalar arithmetic
through the FieldSpec, which is plenty at the small extension orders the
package uses.

The column-subset verifier enumerates partial independent sets
depth-first, keeping the remaining columns reduced against the partial
echelon basis.  A column that reduces to zero witnesses a dependent set
at the current size, so verification of all C(n, t) subsets costs one
vectorized reduction per independent partial set rather than a fresh
elimination per subset.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AttemptsExhaustedError, MaskFormatError
from .gf import FieldSpec, parse_field_header
from .mask import Mask, MaskAnalysis, analyze
from .rng import SeededStream


class GFMatrix:
    """Dense matrix over a FieldSpec; entries are element encodings."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries must lie in 0..{field.q - 1}")
        self.field = field
        self.data = arr

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "GFMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "GFMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    def copy(self) -> "GFMatrix":
        return GFMatrix(self.field, self.data.copy())

    def obeys(self, mask: Mask) -> bool:
        if (self.rows, self.cols) != (mask.m, mask.n):
            return False
        bits = np.array(mask.bits, dtype=np.int64)
        return bool(np.all(self.data[bits == 0] == 0))

    def to_rows(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GFMatrix)
            and other.field == self.field
            and other.data.shape == self.data.shape
            and bool(np.array_equal(other.data, self.data))
        )

    def __repr__(self) -> str:
        return f"GFMatrix({self.field.header()}, {self.rows}x{self.cols})"

    def mul(self, other: "GFMatrix") -> "GFMatrix":
        """Matrix product over the shared field."""
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        f = self.field
        if f.k == 1:
            # accumulate in python ints via object dtype only when needed;
            # int64 is safe while cols * q^2 < 2^63
            if self.cols * (f.q - 1) * (f.q - 1) < 2**62:
                return GFMatrix(f, (self.data @ other.data) % f.q)
            acc = (self.data.astype(object) @ other.data.astype(object)) % f.q
            return GFMatrix(f, acc.astype(np.int64))
        out = np.zeros((self.rows, other.cols), dtype=np.int64)
        a, b = self.data, other.data
        for i in range(self.rows):
            for j in range(other.cols):
                s = 0
                for t in range(self.cols):
                    s = f.add(s, f.mul(int(a[i, t]), int(b[t, j])))
                out[i, j] = s
        return GFMatrix(f, out)


# -- elimination ------------------------------------------------------------


def _rref_prime(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = a.copy() % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _rref_scalar(f: FieldSpec, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows = [[int(v) for v in row] for row in a]
    m = len(rows)
    n = a.shape[1]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        pr = next((i for i in range(r, m) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = [f.mul(inv, v) for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                coef = rows[i][c]
                rows[i] = [f.sub(v, f.mul(coef, w)) for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return np.array(rows, dtype=np.int64).reshape(m, n), pivots


def rref(a: GFMatrix) -> tuple[GFMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and pivot columns."""
    if a.field.k == 1:
        arr, piv = _rref_prime(a.data, a.field.q)
    else:
        arr, piv = _rref_scalar(a.field, a.data)
    return GFMatrix(a.field, arr), tuple(piv)


def gf_rank(a: GFMatrix) -> int:
    """Row rank by exact elimination; the input is not modified."""
    _, piv = rref(a)
    return len(piv)


def kernel_basis(h: GFMatrix) -> GFMatrix:
    """Deterministic generator matrix G of ker(h): h Gᵀ = 0, full row rank.

    Rows come from the reduced echelon form, one per free column in
    ascending order.
    """
    f = h.field
    R, pivots = rref(h)
    free = [c for c in range(h.cols) if c not in pivots]
    out = np.zeros((len(free), h.cols), dtype=np.int64)
    for gi, fc in enumerate(free):
        out[gi, fc] = 1
        for ri, pc in enumerate(pivots):
            out[gi, pc] = f.neg(int(R.data[ri, fc]))
    return GFMatrix(f, out)


def solve_rows(h: GFMatrix, v: GFMatrix) -> GFMatrix | None:
    """A with A h = v (free variables zero), or None when some row of v
    lies outside rowspace(h).

    Solves hᵀ x = vᵀ for all right-hand sides through one shared
    elimination.
    """
    if h.field != v.field or h.cols != v.cols:
        raise ValueError("shape or field mismatch")
    f = h.field
    aug = np.concatenate([h.data.T, v.data.T], axis=1)
    R, pivots = rref(GFMatrix(f, aug))
    for c in pivots:
        if c >= h.rows:
            return None  # inconsistent: pivot in the augmented block
    out = np.zeros((v.rows, h.rows), dtype=np.int64)
    for ri, pc in enumerate(pivots):
        for k in range(v.rows):
            out[k, pc] = int(R.data[ri, h.rows + k])
    return GFMatrix(f, out)


# -- column-subset verification ----------------------------------------------


def _dependent_subset_prime(
    arr: np.ndarray, p: int, target: int, first_block: tuple[int, int] | None = None
) -> list[int] | None:
    """First dependent column subset of size <= target, or None.

    `first_block` restricts the smallest chosen column to an index range,
    which is how work splits deterministically across workers.
    """
    m, n = arr.shape
    if target == 0 or n == 0:
        return None

    def rec(block: np.ndarray, idx: list[int], chosen: list[int]) -> list[int] | None:
        zero = np.nonzero(~block.any(axis=0))[0]
        if zero.size:
            return chosen + [idx[int(zero[0])]]
        depth = len(chosen)
        if depth + 1 == target:
            return None  # every completion is independent
        k = block.shape[1]
        need = target - depth - 1
        for i in range(k - need):
            col = block[:, i]
            r = int(np.nonzero(col)[0][0])
            inv = pow(int(col[r]), p - 2, p)
            trailing = block[:, i + 1:]
            reduced = (trailing - np.outer(col, trailing[r] * inv % p)) % p
            found = rec(reduced, idx[i + 1:], chosen + [idx[i]])
            if found:
                return found
        return None

    lo, hi = (0, n) if first_block is None else first_block
    base = arr % p
    for j0 in range(lo, min(hi, n)):
        col = base[:, j0]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            return [j0]
        if target == 1:
            continue
        r = int(nz[0])
        inv = pow(int(col[r]), p - 2, p)
        trailing = base[:, j0 + 1:]
        reduced = (trailing - np.outer(col, trailing[r] * inv % p)) % p
        found = rec(reduced, list(range(j0 + 1, n)), [j0])
        if found:
            return found
    return None


def _dependent_subset_scalar(
    f: FieldSpec, arr: np.ndarray, target: int, first_block: tuple[int, int] | None = None
) -> list[int] | None:
    m, n = arr.shape
    if target == 0 or n == 0:
        return None
    cols = [[int(arr[i, j]) for i in range(m)] for j in range(n)]

    def reduce_col(col: list[int], basis: list[tuple[int, list[int]]]) -> list[int]:
        col = list(col)
        for r, b in basis:
            c = col[r]
            if c:
                col = [f.sub(v, f.mul(c, w)) for v, w in zip(col, b)]
        return col

    def rec(basis, remaining: list[int], chosen: list[int]) -> list[int] | None:
        reduced = {}
        for j in remaining:
            col = reduce_col(cols[j], basis)
            if not any(col):
                return chosen + [j]
            reduced[j] = col
        depth = len(chosen)
        if depth + 1 == target:
            return None
        need = target - depth - 1
        for i, j in enumerate(remaining[: len(remaining) - need]):
            col = reduced[j]
            r = next(t for t, v in enumerate(col) if v)
            inv = f.inv(col[r])
            norm = [f.mul(inv, v) for v in col]
            found = rec(basis + [(r, norm)], remaining[i + 1:], chosen + [j])
            if found:
                return found
        return None

    lo, hi = (0, n) if first_block is None else first_block
    for j0 in range(lo, min(hi, n)):
        col = cols[j0]
        if not any(col):
            return [j0]
        if target == 1:
            continue
        r = next(t for t, v in enumerate(col) if v)
        inv = f.inv(col[r])
        norm = [f.mul(inv, v) for v in col]
        found = rec([(r, norm)], list(range(j0 + 1, n)), [j0])
        if found:
            return found
    return None


def _dependent_subset(
    h: GFMatrix, target: int, first_block: tuple[int, int] | None = None
) -> list[int] | None:
    if h.field.k == 1:
        return _dependent_subset_prime(h.data, h.field.q, target, first_block)
    return _dependent_subset_scalar(h.field, h.data, target, first_block)


def _verify_block(args):
    header, rows, cols, data, target, block = args
    f = parse_field_header(header)
    h = GFMatrix(f, np.array(data, dtype=np.int64).reshape(rows, cols))
    return _dependent_subset(h, target, block)


def kruskal_rank_verify(
    h: GFMatrix, target: int, workers: int = 1
) -> tuple[bool, tuple[int, ...] | None]:
    """Check that every column subset of size `target` is independent.

    Smaller subsets are covered automatically (a subset of an independent
    set is independent; a dependent small set extends to a dependent
    target-size set).  Returns a dependent subset as counterexample on
    failure.  `workers` > 1 splits the search by first-column blocks.
    """
    if not 0 <= target <= h.cols:
        raise ValueError("target out of range")
    if target == 0:
        return True, None
    if workers > 1 and h.cols >= 2 * workers:
        from concurrent.futures import ProcessPoolExecutor

        bounds = np.linspace(0, h.cols, workers + 1, dtype=int)
        jobs = [
            (
                h.field.header(),
                h.rows,
                h.cols,
                h.data.ravel().tolist(),
                target,
                (int(bounds[i]), int(bounds[i + 1])),
            )
            for i in range(workers)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_verify_block, jobs))
        hits = [tuple(r) for r in results if r]
        if hits:
            return False, min(hits)  # lexicographically first, deterministic
        return True, None
    dep = _dependent_subset(h, target)
    if dep is None:
        return True, None
    return False, tuple(dep)


class DistanceResult(NamedTuple):
    value: int
    truncated: bool


def min_distance_of_kernel(h: GFMatrix, cap: int | None = None) -> DistanceResult:
    """Minimum distance of ker(h): the smallest dependent column count.

    Equals 1 + Kruskal rank of h; when ker(h) = {0} the convention is
    n + 1.  With a cap the search stops at subset size cap and the result
    is a flagged lower bound (value cap + 1 means "at least").
    """
    n = h.cols
    r0 = gf_rank(h)
    if r0 == n:
        return DistanceResult(n + 1, False)
    limit = r0 + 1 if cap is None else min(cap, r0 + 1)
    for t in range(1, limit + 1):
        dep = _dependent_subset(h, t)
        if dep is not None:
            return DistanceResult(t, False)
    # any r0+1 columns are dependent, so only a cap can land here
    return DistanceResult(limit + 1, True)


# -- randomized filling -------------------------------------------------------


@dataclass(frozen=True)
class ConstructedCode:
    """A verified filling of a mask: rank rho(M), Kruskal rank tau(M)."""

    mask: Mask
    H: GFMatrix
    rank: int
    kruskal_rank: int
    d_min: int
    dimension: int
    seed: int
    attempts: int


def _draw_fill(mask: Mask, f: FieldSpec, stream: SeededStream) -> GFMatrix:
    # one uniform draw per allowed entry, row-major over the 1-positions
    data = np.zeros((mask.m, mask.n), dtype=np.int64)
    for i in range(mask.m):
        row = mask.bits[i]
        for j in range(mask.n):
            if row[j]:
                data[i, j] = stream.below(f.q)
    return GFMatrix(f, data)


def random_fill(
    mask: Mask,
    f: FieldSpec,
    seed: int,
    max_attempts: int,
    workers: int = 1,
    analysis: MaskAnalysis | None = None,
) -> ConstructedCode:
    """Uniform fillings of the mask until one is verified optimal.

    Each attempt draws every allowed entry uniformly from GF(q) with the
    seeded stream, then checks rank(H) = rho(M) and that all tau(M)-column
    subsets are independent (exhaustively).  The returned d_min = tau + 1
    is certified on both sides: the subset check gives the lower bound and
    the mask's Hall violator gives a concrete dependent set of size tau+1.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be at least 1")
    ana = analysis if analysis is not None else analyze(mask)
    if f.q <= ana.delta:
        warnings.warn(
            f"field order {f.q} is not above delta(M) = {ana.delta}; "
            "generic success is no longer guaranteed",
            stacklevel=2,
        )
    stream = SeededStream(seed)
    fail_rank = 0
    fail_kruskal = 0
    last_counterexample = None
    for attempt in range(1, max_attempts + 1):
        h = _draw_fill(mask, f, stream)
        if gf_rank(h) != ana.rho:
            fail_rank += 1
            continue
        ok, counterexample = kruskal_rank_verify(h, ana.tau, workers=workers)
        if not ok:
            fail_kruskal += 1
            last_counterexample = counterexample
            continue
        if ana.violator_witness is not None:
            sub = GFMatrix(f, h.data[:, list(ana.violator_witness)])
            if gf_rank(sub) >= len(ana.violator_witness):
                raise AssertionError("structural violator must be dependent")
        return ConstructedCode(
            mask=mask,
            H=h,
            rank=ana.rho,
            kruskal_rank=ana.tau,
            d_min=ana.tau + 1,
            dimension=mask.n - ana.rho,
            seed=seed,
            attempts=attempt,
        )
    raise AttemptsExhaustedError(
        f"no verified filling in {max_attempts} attempts over {f.header()}",
        attempts=max_attempts,
        diagnostics={
            "rank_failures": fail_rank,
            "kruskal_failures": fail_kruskal,
            "last_counterexample": last_counterexample,
            "delta": ana.delta,
            "q": f.q,
        },
    )


def verify_constructed(code: ConstructedCode, workers: int = 1) -> list[tuple[str, bool]]:
    """Re-run every check a ConstructedCode claims; list of (name, pass)."""
    checks: list[tuple[str, bool]] = []
    checks.append(("mask_obedience", code.H.obeys(code.mask)))
    checks.append(("rank", gf_rank(code.H) == code.rank))
    ok, _ = kruskal_rank_verify(code.H, code.kruskal_rank, workers=workers)
    checks.append(("kruskal_rank", ok))
    if code.kruskal_rank < code.mask.n:
        dep = _dependent_subset(code.H, code.kruskal_rank + 1)
        checks.append(("d_min", dep is not None and code.d_min == code.kruskal_rank + 1))
    else:
        checks.append(("d_min", code.d_min == code.mask.n + 1))
    checks.append(("dimension", code.dimension == code.mask.n - code.rank))
    return checks


# -- serialization -------------------------------------------------------------


def write_matrix_text(a: GFMatrix) -> str:
    lines = [f"{a.field.header()} {a.rows} {a.cols}"]
    lines += [" ".join(str(int(v)) for v in row) for row in a.data]
    return "\n".join(lines) + "\n"


def read_matrix_text(text: str) -> GFMatrix:
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise MaskFormatError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3:
        raise MaskFormatError(f"expected 'GF(...) rows cols', got {lines[0]!r}")
    f = parse_field_header(head[0])
    try:
        rows, cols = int(head[1]), int(head[2])
        data = [[int(v) for v in ln.split()] for ln in lines[1 : 1 + rows]]
    except ValueError as e:
        raise MaskFormatError(f"bad matrix data: {e}") from e
    if len(data) != rows or any(len(r) != cols for r in data):
        raise MaskFormatError("matrix data does not match declared shape")
    try:
        return GFMatrix(f, data)
    except ValueError as e:
        raise MaskFormatError(str(e)) from e


def constructed_to_json(code: ConstructedCode) -> str:
    obj = {
        "mask": code.mask.to_json_obj(),
        "field": code.H.field.header(),
        "H": code.H.to_rows(),
        "rank": code.rank,
        "kruskal_rank": code.kruskal_rank,
        "d_min": code.d_min,
        "dimension": code.dimension,
        "seed": code.seed,
        "attempts": code.attempts,
    }
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def constructed_from_json(text: str) -> ConstructedCode:
    try:
        obj = json.loads(text)
        mask = Mask.from_json_obj(obj["mask"])
        f = parse_field_header(obj["field"])
        h = GFMatrix(f, obj["H"])
        return ConstructedCode(
            mask=mask,
            H=h,
            rank=int(obj["rank"]),
            kruskal_rank=int(obj["kruskal_rank"]),
            d_min=int(obj["d_min"]),
            dimension=int(obj["dimension"]),
            seed=int(obj["seed"]),
            attempts=int(obj["attempts"]),
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
        raise MaskFormatError(f"bad code file: {e}") from e
