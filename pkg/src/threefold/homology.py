"""Integer homology through boundary matrices and Smith normal form.

Boundary matrices of combinatorial manifolds are sparse and almost all of
their pivots are units, so elimination runs in two phases: a sparse pass
that removes every +-1 pivot (Markowitz-style choice to limit fill-in),
then a dense Smith reduction of whatever is left.  All arithmetic is on
Python integers.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .complex import SimplicialComplex


@dataclass
class IntegerMatrix:
    """Sparse integer matrix stored column-wise: ``columns[j] = {row: value}``."""

    rows: int
    cols: int
    columns: list[dict[int, int]]

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> "IntegerMatrix":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        columns = [{i: int(data[i][j]) for i in range(nrows) if data[i][j]} for j in range(ncols)]
        return cls(nrows, ncols, columns)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        columns = []
        for col in other.columns:
            acc: dict[int, int] = {}
            for k, v in col.items():
                for i, w in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            columns.append({i: v for i, v in acc.items() if v})
        return IntegerMatrix(self.rows, other.cols, columns)

    def is_zero(self) -> bool:
        return not any(self.columns)


def boundary_matrix(K: SimplicialComplex, k: int) -> IntegerMatrix:
    """Matrix of the k-th simplicial boundary map on sorted-simplex bases."""
    if k < 1 or k > K.dim:
        raise ValueError(f"boundary index {k} out of range 1..{K.dim}")
    lower = {s: i for i, s in enumerate(K.faces(k - 1))}
    columns = []
    for s in K.faces(k):
        col = {}
        for i in range(len(s)):
            col[lower[s[:i] + s[i + 1:]]] = -1 if i % 2 else 1
        columns.append(col)
    return IntegerMatrix(len(lower), len(columns), columns)


def _unit_phase(columns: list[dict[int, int]]) -> int:
    """Eliminate unit pivots in place; returns how many were removed."""
    rows: dict[int, set[int]] = {}
    for j, col in enumerate(columns):
        for i in col:
            rows.setdefault(i, set()).add(j)
    alive = {j for j, col in enumerate(columns) if col}
    pivots = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(alive, key=lambda j: len(columns[j])):
            if j not in alive:
                continue
            col = columns[j]
            if not col:
                alive.discard(j)
                continue
            best = None
            best_cost = None
            for i, v in col.items():
                if v == 1 or v == -1:
                    cost = len(rows[i])
                    if best_cost is None or cost < best_cost:
                        best, best_cost = i, cost
                        if cost == 1:
                            break
            if best is None:
                continue
            r = best
            pv = col[r]
            for j2 in list(rows[r]):
                if j2 == j:
                    continue
                c2 = columns[j2]
                factor = c2[r] * pv
                for i, v in col.items():
                    nv = c2.get(i, 0) - factor * v
                    if nv:
                        if i not in c2:
                            rows[i].add(j2)
                        c2[i] = nv
                    else:
                        if i in c2:
                            del c2[i]
                            rows[i].discard(j2)
                if not c2:
                    alive.discard(j2)
            for i in col:
                rows[i].discard(j)
            del rows[r]
            columns[j] = {}
            alive.discard(j)
            pivots += 1
            progress = True
    return pivots


def _dense_snf(A: list[list[int]]) -> list[int]:
    """Diagonal of the Smith form of a dense matrix (positive entries only)."""
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero magnitude in the trailing block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        ri, rt = A[i], A[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for i in range(t, m):
                            if A[i][t]:
                                A[i][j] -= q * A[i][t]
                    if A[t][j]:
                        dirty = True
            if dirty:
                # bring the smallest leftover in row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    A[t], A[i] = A[i], A[t]
                else:
                    for row in A:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            ri = A[bad[0]]
            for j in range(t, n):
                A[t][j] += ri[j]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _divisibility_order(entries: Iterable[int]) -> list[int]:
    d = sorted(abs(x) for x in entries if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


def smith_normal_form(M: IntegerMatrix) -> tuple[list[int], int]:
    """Smith diagonal (d1 | d2 | ... | dr, all positive) and rank of M."""
    columns = [dict(c) for c in M.columns]
    units = _unit_phase(columns)
    live_cols = [j for j, c in enumerate(columns) if c]
    live_rows = sorted({i for j in live_cols for i in columns[j]})
    rest: list[int] = []
    if live_cols:
        ridx = {i: k for k, i in enumerate(live_rows)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for k, j in enumerate(live_cols):
            for i, v in columns[j].items():
                dense[ridx[i]][k] = v
        rest = _dense_snf(dense)
    diag = [1] * units + _divisibility_order(rest)
    return diag, len(diag)


def rank(M: IntegerMatrix) -> int:
    return smith_normal_form(M)[1]


@dataclass(frozen=True)
class HomologyGroups:
    """H_0..H_d as Betti numbers plus torsion coefficients in divisibility order."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.betti) != len(self.torsion):
            raise ValueError("betti and torsion lengths differ")

    @property
    def dim(self) -> int:
        return len(self.betti) - 1

    def group(self, k: int) -> str:
        return format_group(self.betti[k], self.torsion[k])

    def __str__(self) -> str:
        return ", ".join(self.group(k) for k in range(len(self.betti)))

    def as_record(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}


def format_group(betti: int, torsion: Sequence[int]) -> str:
    parts = []
    if betti == 1:
        parts.append("Z")
    elif betti > 1:
        parts.append(f"Z^{betti}")
    for d, mult in sorted(Counter(torsion).items()):
        parts.append(f"Z_{d}" if mult == 1 else f"Z_{d}^{mult}")
    return "+".join(parts) if parts else "0"


_TERM = re.compile(r"^Z(?:_(\d+))?(?:\^(\d+))?$")


def parse_group(text: str) -> tuple[int, tuple[int, ...]]:
    t = text.replace("ℤ", "Z").replace("⊕", "+").replace(" ", "")
    if t == "0":
        return 0, ()
    betti = 0
    elementary: list[int] = []
    for term in t.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse group term {term!r}")
        mult = int(m.group(2) or 1)
        if m.group(1) is None:
            betti += mult
        else:
            d = int(m.group(1))
            if d > 1:
                elementary += [d] * mult
    return betti, tuple(_divisibility_order(elementary))


def parse_homology(text: str) -> HomologyGroups:
    """Parse strings such as ``"Z, Z+Z_2, Z_2, 0"`` (outer parentheses allowed)."""
    body = text.strip().strip("()")
    groups = [parse_group(g) for g in body.split(",")]
    return HomologyGroups(tuple(b for b, _ in groups), tuple(t for _, t in groups))


def chain_homology(sizes: Sequence[int], boundaries: Sequence[IntegerMatrix]) -> HomologyGroups:
    """Homology of a chain complex C_0..C_d with ``boundaries[k-1] = d_k``."""
    d = len(sizes) - 1
    snf = [smith_normal_form(B) for B in boundaries]
    ranks = [0] + [r for _, r in snf] + [0]
    betti = []
    torsion = []
    for k in range(d + 1):
        betti.append(sizes[k] - ranks[k] - ranks[k + 1])
        torsion.append(tuple(x for x in snf[k][0] if x > 1) if k < d else ())
    return HomologyGroups(tuple(betti), tuple(torsion))


def homology(K: SimplicialComplex) -> HomologyGroups:
    sizes = [len(K.faces(k)) for k in range(K.dim + 1)]
    return chain_homology(sizes, [boundary_matrix(K, k) for k in range(1, K.dim + 1)])


def reduced_euler_check(K: SimplicialComplex, H: HomologyGroups) -> bool:
    """Alternating Betti sum equals the Euler characteristic from face counts."""
    chi = sum((-1) ** k * len(K.faces(k)) for k in range(K.dim + 1))
    return chi == sum((-1) ** k * b for k, b in enumerate(H.betti))
