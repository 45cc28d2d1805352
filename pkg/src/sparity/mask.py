"""Binary support masks and their structural analysis.

A mask M is an m-by-n 0/1 pattern.  Column j's support S_j is the set of
rows where the column is allowed to be nonzero; S(R) is the union over a
column set R.  Two integers drive everything downstream:

* the structural row rank rho(M): the maximum bipartite matching between
  rows and columns over the 1-entries, which equals the best achievable
  rank of any filling;
* the structural Kruskal rank tau(M): the largest s such that every
  column set R with |R| <= s satisfies |S(R)| >= |R|.  The optimal
  minimum distance of any kernel code obeying M is tau(M) + 1.

A set R with |S(R)| < |R| is a Hall violator; a minimum one has size
tau(M) + 1 and is connected in the graph where columns are adjacent when
their supports intersect, which is what makes the ascending-size search
here practical.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from math import comb

from .errors import MaskFormatError


@dataclass(frozen=True)
class Mask:
    """An m-by-n binary support pattern with optional column labels."""

    m: int
    n: int
    bits: tuple[tuple[int, ...], ...]
    column_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("mask dimensions must be at least 1x1")
        if len(self.bits) != self.m or any(len(r) != self.n for r in self.bits):
            raise ValueError("bit rows do not match the declared dimensions")
        if any(b not in (0, 1) for r in self.bits for b in r):
            raise ValueError("mask entries must be 0 or 1")
        if self.column_labels is not None and len(self.column_labels) != self.n:
            raise ValueError("one label per column required")

    @classmethod
    def from_rows(cls, rows, column_labels=None) -> "Mask":
        bits = tuple(tuple(int(b) for b in row) for row in rows)
        labels = tuple(column_labels) if column_labels is not None else None
        return cls(len(bits), len(bits[0]) if bits else 0, bits, labels)

    def col_support(self, j: int) -> frozenset[int]:
        if not 0 <= j < self.n:
            raise IndexError(f"column {j} out of range")
        return frozenset(i for i in range(self.m) if self.bits[i][j])

    def col_supports(self) -> list[frozenset[int]]:
        return [self.col_support(j) for j in range(self.n)]

    def row_support(self, i: int) -> frozenset[int]:
        if not 0 <= i < self.m:
            raise IndexError(f"row {i} out of range")
        return frozenset(j for j in range(self.n) if self.bits[i][j])

    def permuted(self, row_perm: list[int], col_perm: list[int]) -> "Mask":
        """Mask with row i <- row_perm[i] and column j <- col_perm[j]."""
        bits = tuple(
            tuple(self.bits[row_perm[i]][col_perm[j]] for j in range(self.n))
            for i in range(self.m)
        )
        return Mask(self.m, self.n, bits)

    # -- serialization -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.m} {self.n}"]
        lines += ["".join(str(b) for b in row) for row in self.bits]
        if self.column_labels is not None:
            lines.append("# columns: " + " ".join(self.column_labels))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Mask":
        labels = None
        data_lines = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("columns:"):
                    labels = tuple(body[len("columns:"):].split())
                continue
            data_lines.append(line)
        if not data_lines:
            raise MaskFormatError("empty mask file")
        head = data_lines[0].split()
        if len(head) != 2:
            raise MaskFormatError(f"expected 'm n' on the first line, got {data_lines[0]!r}")
        try:
            m, n = int(head[0]), int(head[1])
        except ValueError as e:
            raise MaskFormatError(f"bad dimensions line {data_lines[0]!r}") from e
        rows = data_lines[1:]
        if len(rows) != m:
            raise MaskFormatError(f"expected {m} bit rows, found {len(rows)}")
        bits = []
        for r in rows:
            if len(r) != n or set(r) - {"0", "1"}:
                raise MaskFormatError(f"bad bit row {r!r}")
            bits.append(tuple(int(c) for c in r))
        try:
            return cls(m, n, tuple(bits), labels)
        except ValueError as e:
            raise MaskFormatError(str(e)) from e

    def to_json_obj(self) -> dict:
        obj = {
            "m": self.m,
            "n": self.n,
            "rows": ["".join(str(b) for b in row) for row in self.bits],
        }
        if self.column_labels is not None:
            obj["column_labels"] = list(self.column_labels)
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Mask":
        try:
            m, n = int(obj["m"]), int(obj["n"])
            rows = obj["rows"]
        except (KeyError, TypeError, ValueError) as e:
            raise MaskFormatError(f"bad mask object: {e}") from e
        labels = obj.get("column_labels")
        text = f"{m} {n}\n" + "\n".join(rows)
        mask = cls.from_text(text)
        if labels is not None:
            mask = Mask(mask.m, mask.n, mask.bits, tuple(labels))
        return mask

    @classmethod
    def from_json(cls, text: str) -> "Mask":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise MaskFormatError(f"bad JSON: {e}") from e
        return cls.from_json_obj(obj)


@dataclass(frozen=True)
class KruskalResult:
    tau: int
    violator: tuple[int, ...] | None
    truncated: bool


@dataclass(frozen=True)
class MaskAnalysis:
    rho: int
    tau: int
    dmin_star: int
    delta: int
    matching_witness: tuple[tuple[int, int], ...]
    violator_witness: tuple[int, ...] | None


def union_support(mask: Mask, columns) -> set[int]:
    """S(R): the union of the column supports over the column set R."""
    out: set[int] = set()
    for j in columns:
        if not 0 <= j < mask.n:
            raise IndexError(f"column {j} out of range for a {mask.m}x{mask.n} mask")
        for i in range(mask.m):
            if mask.bits[i][j]:
                out.add(i)
    return out


def structural_row_rank(mask: Mask) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Maximum row-column matching over the 1-entries, with a witness.

    Hopcroft-Karp with deterministic vertex order, so the witness is
    reproducible.
    """
    adj = [sorted(mask.row_support(i)) for i in range(mask.m)]
    INF = -1
    pair_row: dict[int, int] = {}
    pair_col: dict[int, int] = {}
    dist: list[int] = [INF] * mask.m

    def bfs() -> bool:
        queue = deque()
        for r in range(mask.m):
            if r not in pair_row:
                dist[r] = 0
                queue.append(r)
            else:
                dist[r] = INF
        reachable_free = False
        while queue:
            r = queue.popleft()
            for c in adj[r]:
                if c not in pair_col:
                    reachable_free = True
                else:
                    nxt = pair_col[c]
                    if dist[nxt] == INF:
                        dist[nxt] = dist[r] + 1
                        queue.append(nxt)
        return reachable_free

    def dfs(r: int) -> bool:
        for c in adj[r]:
            if c not in pair_col:
                pair_row[r] = c
                pair_col[c] = r
                return True
            nxt = pair_col[c]
            if dist[nxt] == dist[r] + 1 and dfs(nxt):
                pair_row[r] = c
                pair_col[c] = r
                return True
        dist[r] = INF
        return False

    while bfs():
        for r in range(mask.m):
            if r not in pair_row and dist[r] == 0:
                dfs(r)
    matching = tuple(sorted(pair_row.items()))
    return len(matching), matching


def _column_adjacency(supports: list[frozenset[int]]) -> list[list[int]]:
    n = len(supports)
    by_row: dict[int, list[int]] = {}
    for j, s in enumerate(supports):
        for r in s:
            by_row.setdefault(r, []).append(j)
    neigh: list[set[int]] = [set() for _ in range(n)]
    for cols in by_row.values():
        for a in cols:
            neigh[a].update(cols)
    return [sorted(s - {j}) for j, s in enumerate(neigh)]


def _find_violator(
    supports: list[frozenset[int]], adjacency: list[list[int]], t: int
) -> tuple[int, ...] | None:
    """First size-t column set, connected through shared rows, with |S| <= t-1.

    Enumerates connected sets rooted at their minimum column; every prefix
    keeps |S| <= t-1, which is sound because supports only grow along a
    violator's ordering.
    """
    n = len(supports)

    def extend(chosen: list[int], rows: set[int], ext: list[int], seen: set[int]):
        if len(chosen) == t:
            return tuple(chosen)  # |rows| <= t-1 held throughout
        for idx, c in enumerate(ext):
            rows2 = rows | supports[c]
            if len(rows2) > t - 1:
                continue
            added = [u for u in adjacency[c] if u not in seen and u > chosen[0]]
            seen.update(added)
            found = extend(chosen + [c], rows2, ext[idx + 1:] + added, seen)
            if found:
                return found
            seen.difference_update(added)
        return None

    for root in range(n):
        rows0 = set(supports[root])
        if len(rows0) > t - 1:
            continue
        seen = {u for u in adjacency[root] if u > root}
        found = extend([root], rows0, sorted(seen), set(seen))
        if found:
            return found
    return None


def structural_kruskal_rank(mask: Mask, size_cap: int | None = None) -> KruskalResult:
    """tau(M) with a minimum Hall violator witness.

    Searches violators by ascending size; the first hit at size t fixes
    tau = t - 1.  When rho(M) = n no violator exists and tau = n.  With a
    size_cap the result may be a truncated lower bound (flagged, never
    silently exact).
    """
    if size_cap is not None and size_cap < 1:
        raise ValueError("size_cap must be at least 1")
    rho, _ = structural_row_rank(mask)
    if rho == mask.n:
        return KruskalResult(mask.n, None, False)
    supports = mask.col_supports()
    adjacency = _column_adjacency(supports)
    # a minimum violator has size tau+1 <= rho+1, so the search always ends
    exact_limit = rho + 1
    limit = exact_limit if size_cap is None else min(size_cap, exact_limit)
    for t in range(1, limit + 1):
        viol = _find_violator(supports, adjacency, t)
        if viol is not None:
            return KruskalResult(t - 1, viol, False)
    if size_cap is not None and size_cap < exact_limit:
        return KruskalResult(size_cap, None, True)
    raise AssertionError("violator guaranteed at size rho+1 when rho < n")


def analyze(mask: Mask) -> MaskAnalysis:
    """Full structural analysis: rho, tau, d*_min = tau+1 and delta.

    delta = rho + tau * C(n, tau) is exact (arbitrary-precision integer).
    """
    rho, matching = structural_row_rank(mask)
    kr = structural_kruskal_rank(mask)
    delta = rho + kr.tau * comb(mask.n, kr.tau)
    return MaskAnalysis(
        rho=rho,
        tau=kr.tau,
        dmin_star=kr.tau + 1,
        delta=delta,
        matching_witness=matching,
        violator_witness=kr.violator,
    )


def mds_condition(mask: Mask) -> bool:
    """Whether every column set R with |R| <= m satisfies |S(R)| >= |R|."""
    cap = min(mask.m, mask.n)
    res = structural_kruskal_rank(mask, size_cap=cap)
    return res.violator is None


def k66_mask() -> Mask:
    """The 12x36 vertex-edge incidence mask of K_{6,6}.

    Rows 0..5 are the left vertices L1..L6, rows 6..11 the right vertices
    R1..R6; column 6*(i-1)+(j-1) is the edge c_ij, allowed exactly in rows
    L_i and R_j.  Grouped by left vertex the top half is block-diagonal
    all-ones and the bottom half is six copies of the identity.
    """
    m, n = 12, 36
    bits = [[0] * n for _ in range(m)]
    labels = []
    for i in range(6):
        for j in range(6):
            col = 6 * i + j
            bits[i][col] = 1
            bits[6 + j][col] = 1
            labels.append(f"c{i + 1}{j + 1}")
    return Mask(m, n, tuple(tuple(r) for r in bits), tuple(labels))
