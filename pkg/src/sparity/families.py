"""Structured mask families: regular, cyclic, balanced-cyclic.

The regular family is enumerated with isomorph rejection: rows are kept
non-increasing as bit-vectors, and within every block of columns that
agree on all previous rows a new row's ones must occupy a prefix of the
block.  Every mask is row/column-permutation equivalent to at least one
such representative (order the rows greedily lex-max and sort columns),
and the quantities optimized here are invariant under those
permutations, so no optimum is lost while the stream shrinks by orders
of magnitude.  Canonicalization off falls back to plain sorted
row-multiset enumeration.

Cyclic masks are generated per first row; consecutive_shifts takes the
m successive rotations, all_shift_multisets ranges over shift multisets
containing 0.  Masks equal as row multisets are emitted once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterator

import numpy as np

from .errors import InfeasibleError
from .mask import Mask

FAMILIES = ("regular", "cyclic", "balanced_cyclic")
CYCLIC_MODES = ("consecutive_shifts", "all_shift_multisets")


@dataclass(frozen=True)
class FamilySpec:
    n: int
    m: int
    w: int
    family: str
    cyclic_mode: str = "consecutive_shifts"
    canonicalization: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.cyclic_mode not in CYCLIC_MODES:
            raise ValueError(f"unknown cyclic mode {self.cyclic_mode!r}")


@dataclass(frozen=True)
class CellResult:
    """One grid cell: best full-rank distance with witness and provenance."""

    D: int | None
    count_optimal: int
    argmax: Mask | None
    truncated: bool
    masks_examined: int = 0


@dataclass
class GridResult:
    n: int
    family: str
    cyclic_mode: str
    cells: dict = field(default_factory=dict)  # (m, w) -> CellResult
    provenance: str = ""


# -- fast structural helpers on raw row tuples --------------------------------


@lru_cache(maxsize=8)
def _popcount_table(bits: int) -> np.ndarray:
    n = 1 << bits
    t = np.zeros(n, dtype=np.int8)
    for i in range(1, n):
        t[i] = t[i >> 1] + (i & 1)
    return t


def _col_supports(rows: tuple[tuple[int, ...], ...], n: int) -> list[int]:
    sup = [0] * n
    for i, r in enumerate(rows):
        bit = 1 << i
        for j in range(n):
            if r[j]:
                sup[j] |= bit
    return sup


def tau_of_rows(rows: tuple[tuple[int, ...], ...], n: int) -> int:
    """Exact structural Kruskal rank by subset dynamic programming."""
    m = len(rows)
    sup = _col_supports(rows, n)
    if n <= 12:
        best = None
        table = [0] * (1 << n)
        for r in range(1, 1 << n):
            low = r & -r
            s = table[r ^ low] | sup[low.bit_length() - 1]
            table[r] = s
            if bin(s).count("1") < bin(r).count("1"):
                sz = bin(r).count("1")
                if best is None or sz < best:
                    best = sz
        return n if best is None else best - 1
    pc = _popcount_table(max(n, m))
    N = 1 << n
    t = np.zeros(N, dtype=np.int64)
    for b in range(n):
        lo = 1 << b
        t[lo : 2 * lo] = t[:lo] | sup[b]
    sizes = pc[np.arange(N)]
    deficient = pc[t] < sizes
    if not deficient.any():
        return n
    return int(sizes[deficient].min()) - 1


def rho_of_rows(rows: tuple[tuple[int, ...], ...], n: int) -> int:
    """Maximum row-column matching size (augmenting paths; small sizes)."""
    m = len(rows)
    adj = [[j for j in range(n) if rows[i][j]] for i in range(m)]
    match_col: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_col or augment(match_col[j], seen):
                match_col[j] = i
                return True
        return False

    size = 0
    for i in range(m):
        if augment(i, set()):
            size += 1
    return size


# -- streams -------------------------------------------------------------------


def _canonical_regular_rows(n: int, m: int, w: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    def rec(rows, blocks, prev_int):
        if len(rows) == m:
            yield tuple(rows)
            return
        sizes = [b[1] for b in blocks]
        tail = [0] * (len(blocks) + 1)
        for i in range(len(blocks) - 1, -1, -1):
            tail[i] = tail[i + 1] + sizes[i]

        def distribute(bi, remaining, acc):
            if remaining == 0:
                counts = acc + [0] * (len(blocks) - len(acc))
                row = [0] * n
                ri = 0
                for (start, size), c in zip(blocks, counts):
                    for t in range(c):
                        row[start + t] = 1
                    if c:
                        ri |= ((1 << c) - 1) << (n - start - c)
                if ri <= prev_int:
                    newblocks = []
                    for (start, size), c in zip(blocks, counts):
                        if c:
                            newblocks.append((start, c))
                        if size - c:
                            newblocks.append((start + c, size - c))
                    yield from rec(rows + [tuple(row)], newblocks, ri)
                return
            if bi == len(blocks):
                return
            hi = min(sizes[bi], remaining)
            lo = max(0, remaining - tail[bi + 1])
            for c in range(hi, lo - 1, -1):
                yield from distribute(bi + 1, remaining - c, acc + [c])

        yield from distribute(0, w, [])

    yield from rec([], [(0, n)], (1 << n) - 1)


def _all_regular_rows(n: int, m: int, w: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    all_rows = [
        tuple(1 if j in c else 0 for j in range(n)) for c in combinations(range(n), w)
    ]
    for rows in combinations_with_replacement(all_rows, m):
        yield rows


def _rot(row: tuple[int, ...], c: int, n: int) -> tuple[int, ...]:
    return tuple(row[(j - c) % n] for j in range(n))


def _cyclic_rows(
    n: int, m: int, w: int, mode: str
) -> Iterator[tuple[tuple[int, ...], ...]]:
    seen: set[tuple] = set()
    for comb in combinations(range(n), w):
        base = tuple(1 if j in comb else 0 for j in range(n))
        if mode == "consecutive_shifts":
            shift_sets = [tuple(range(m))]
        else:
            shift_sets = [
                (0,) + rest for rest in combinations_with_replacement(range(n), m - 1)
            ]
        for shifts in shift_sets:
            rows = tuple(sorted((_rot(base, c, n) for c in shifts), reverse=True))
            if rows in seen:
                continue
            seen.add(rows)
            yield rows


def _is_balanced(rows, n: int, m: int, w: int) -> bool:
    lo = (w * m) // n
    hi = -((-w * m) // n)
    for j in range(n):
        c = sum(r[j] for r in rows)
        if c != lo and c != hi:
            return False
    return True


def _raw_stream(spec: FamilySpec) -> Iterator[tuple[tuple[int, ...], ...]]:
    n, m, w = spec.n, spec.m, spec.w
    if n < 1 or m < 1:
        raise InfeasibleError("dimensions must be positive")
    if not 0 <= w <= n:
        raise InfeasibleError(f"row weight {w} impossible for n = {n}")
    if spec.family == "regular":
        if spec.canonicalization:
            yield from _canonical_regular_rows(n, m, w)
        else:
            yield from _all_regular_rows(n, m, w)
        return
    stream = _cyclic_rows(n, m, w, spec.cyclic_mode)
    if spec.family == "cyclic":
        yield from stream
    else:
        for rows in stream:
            if _is_balanced(rows, n, m, w):
                yield rows


def enumerate_family(spec: FamilySpec) -> Iterator[Mask]:
    """Stream the family's masks, one per representative."""
    for rows in _raw_stream(spec):
        yield Mask(spec.m, spec.n, rows)


def best_distance(
    spec: FamilySpec,
    max_masks: int | None = None,
    stop_at: int | None = None,
) -> CellResult:
    """Maximize tau(M) + 1 over in-family masks with rho(M) = m.

    `max_masks` is a work ceiling; hitting it (or `stop_at`, an early-exit
    target distance) flags the result truncated, so a truncated value is
    an exact lower bound, never silently presented as the optimum.
    """
    n, m = spec.n, spec.m
    best = -1
    count = 0
    argmax = None
    examined = 0
    truncated = False
    for rows in _raw_stream(spec):
        if max_masks is not None and examined >= max_masks:
            truncated = True
            break
        examined += 1
        t = tau_of_rows(rows, n)
        if t + 1 < best:
            continue  # cannot improve; skip the matching computation
        if rho_of_rows(rows, n) != m:
            continue
        if t + 1 > best:
            best = t + 1
            count = 1
            argmax = Mask(m, n, rows)
        else:
            count += 1
        if stop_at is not None and best >= stop_at:
            truncated = True
            break
    if best < 0:
        return CellResult(None, 0, None, truncated, examined)
    return CellResult(best, count, argmax, truncated, examined)


def grid(
    n: int,
    family: str,
    m_range=None,
    w_range=None,
    cyclic_mode: str = "consecutive_shifts",
    canonicalization: bool = True,
    max_masks_per_cell: int | None = None,
) -> GridResult:
    """Compute every (m, w) cell of the family's distance grid."""
    ms = list(m_range) if m_range is not None else list(range(1, n + 1))
    ws = list(w_range) if w_range is not None else list(range(1, n + 1))
    g = GridResult(
        n=n,
        family=family,
        cyclic_mode=cyclic_mode if family != "regular" else "-",
        provenance=f"canonicalization={'on' if canonicalization else 'off'}",
    )
    for m in ms:
        for w in ws:
            try:
                spec = FamilySpec(n, m, w, family, cyclic_mode, canonicalization)
                cell = best_distance(spec, max_masks=max_masks_per_cell)
            except InfeasibleError:
                cell = CellResult(None, 0, None, False, 0)
            g.cells[(m, w)] = cell
    return g


def grid_to_csv(g: GridResult) -> str:
    ms = sorted({k[0] for k in g.cells})
    ws = sorted({k[1] for k in g.cells})
    lines = ["n,family,cyclic_mode", f"{g.n},{g.family},{g.cyclic_mode}"]
    lines.append("m\\w," + ",".join(str(w) for w in ws))
    for m in ms:
        row = [str(m)]
        for w in ws:
            c = g.cells.get((m, w))
            if c is None or c.D is None:
                # '?' = ceiling hit before any in-family full-rank mask showed up
                row.append("?" if c is not None and c.truncated else "-")
            else:
                row.append(f"{c.D}+" if c.truncated else str(c.D))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def grid_to_svg(g: GridResult, cell_px: int = 34) -> str:
    """Plain SVG heatmap mirroring the CSV; no plotting dependency."""
    ms = sorted({k[0] for k in g.cells})
    ws = sorted({k[1] for k in g.cells})
    values = [c.D for c in g.cells.values() if c.D is not None]
    vmax = max(values) if values else 1
    width = (len(ws) + 1) * cell_px
    height = (len(ms) + 2) * cell_px
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="monospace" font-size="{cell_px // 2}">',
        f'<text x="4" y="{cell_px - 10}">{g.family} n={g.n} ({g.cyclic_mode})</text>',
    ]
    for wi, w in enumerate(ws):
        parts.append(
            f'<text x="{(wi + 1) * cell_px + 8}" y="{2 * cell_px - 12}">{w}</text>'
        )
    for mi, m in enumerate(ms):
        y = (mi + 2) * cell_px
        parts.append(f'<text x="4" y="{y + cell_px - 12}">{m}</text>')
        for wi, w in enumerate(ws):
            c = g.cells.get((m, w))
            x = (wi + 1) * cell_px
            if c is None or c.D is None:
                fill = "#dddddd"
                label = "-"
            else:
                frac = c.D / vmax
                shade = int(235 - 155 * frac)
                fill = f"rgb({shade},{shade},255)"
                label = f"{c.D}+" if c.truncated else str(c.D)
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell_px}" height="{cell_px}" '
                f'fill="{fill}" stroke="white"/>'
            )
            parts.append(f'<text x="{x + 6}" y="{y + cell_px - 12}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def two_regular_extremal(n: int, m: int) -> Mask:
    """Cyclic 2-regular mask meeting the floor(n / (n-m)) distance bound.

    Columns are the vertices of an n-cycle, rows the edges that remain
    after deleting n - m nearly evenly spaced edges, so the cycle splits
    into n - m paths whose lengths differ by at most one.
    """
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    drop = n - m
    deleted = {(j * n) // drop for j in range(drop)}
    bits = []
    for e in range(n):
        if e in deleted:
            continue
        row = [0] * n
        row[e] = 1
        row[(e + 1) % n] = 1
        bits.append(tuple(row))
    return Mask(m, n, tuple(bits))


def grid_result_to_json(g: GridResult) -> str:
    obj = {
        "n": g.n,
        "family": g.family,
        "cyclic_mode": g.cyclic_mode,
        "provenance": g.provenance,
        "cells": [
            {
                "m": m,
                "w": w,
                "D": c.D,
                "count_optimal": c.count_optimal,
                "truncated": c.truncated,
                "masks_examined": c.masks_examined,
                "argmax": c.argmax.to_json_obj() if c.argmax else None,
            }
            for (m, w), c in sorted(g.cells.items())
        ],
    }
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"
