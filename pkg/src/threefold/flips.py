"""Bistellar moves and a seeded reducer for 3-manifold triangulations.

A move (F, B) with |F| + |B| = d + 2 replaces the star F * dB by dF * B.
It is legal when the link of F is exactly the boundary of B and B is not
already a face (for |F| = d + 1, B is a single fresh vertex).
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .complex import ComplexError, SimplicialComplex, build_complex, f_vector, verify_closed_3_manifold


class IllegalMove(ComplexError):
    pass


@dataclass(frozen=True, order=True)
class BistellarMove:
    face: tuple[int, ...]
    coface: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "face", tuple(sorted(self.face)))
        object.__setattr__(self, "coface", tuple(sorted(self.coface)))

    @property
    def kind(self) -> str:
        """``"a-b"``: number of facets removed and added."""
        return f"{len(self.coface)}-{len(self.face)}"

    def inverse(self) -> "BistellarMove":
        return BistellarMove(self.coface, self.face)


def _star(K: SimplicialComplex, F: tuple[int, ...]) -> list[tuple[int, ...]]:
    s = set(F)
    return [f for f in K.facets if s.issubset(f)]


def move_for_face(K: SimplicialComplex, F: Iterable[int]) -> BistellarMove | None:
    """The legal move exchanging F, if any."""
    F = tuple(sorted(F))
    d = K.dim
    if len(F) == d + 1:
        if F not in K.facets:
            return None
        return BistellarMove(F, (max(K.vertices) + 1,))
    star = _star(K, F)
    if not star:
        return None
    B = tuple(sorted(set().union(*star) - set(F)))
    if len(B) != d + 2 - len(F) or len(star) != len(B):
        return None
    if K.has_face(B):
        return None
    return BistellarMove(F, B)


def valid_moves(K: SimplicialComplex, check: bool = True) -> set[BistellarMove]:
    if check and K.dim == 3:
        verify_closed_3_manifold(K).raise_if_failed()
    moves = set()
    for k in range(K.dim + 1):
        for F in K.faces(k):
            m = move_for_face(K, F)
            if m is not None:
                moves.add(m)
    return moves


def apply_move(K: SimplicialComplex, m: BistellarMove) -> SimplicialComplex:
    F, B = m.face, m.coface
    d = K.dim
    if len(F) + len(B) != d + 2:
        raise IllegalMove(f"|F| + |B| must be {d + 2}")
    if len(B) == 1:
        if len(F) != d + 1 or F not in K.facets:
            raise IllegalMove(f"insertion needs a facet, got {F}")
        if B[0] in K.vertices:
            raise IllegalMove(f"insertion vertex {B[0]} already present")
    else:
        star = set(_star(K, F))
        expected = {tuple(sorted(set(F) | (set(B) - {b}))) for b in B}
        if star != expected:
            raise IllegalMove(f"link of {F} is not the boundary of {B}")
        if K.has_face(B):
            raise IllegalMove(f"{B} is already a face")
    removed = {tuple(sorted(set(F) | (set(B) - {b}))) for b in B}
    added = {tuple(sorted((set(F) - {f}) | set(B))) for f in F}
    return build_complex((K.facets - removed) | added)


# ------------------------------------------------------- incremental state

class FlipState:
    """Mutable 3-dimensional triangulation supporting fast flip queries."""

    def __init__(self, K: SimplicialComplex):
        if K.dim != 3:
            raise ComplexError("FlipState handles 3-dimensional complexes")
        self.flist: list[tuple[int, ...]] = []
        self.fpos: dict[tuple[int, ...], int] = {}
        self.vstar: dict[int, set] = {}
        self.edeg: Counter = Counter()
        self.deg4: set[int] = set()
        self.edge3: set[tuple[int, int]] = set()
        self.next_label = max(K.vertices) + 1
        for f in sorted(K.facets):
            self._add(f)

    # bookkeeping
    def _touch_vertex(self, v):
        if len(self.vstar.get(v, ())) == 4:
            self.deg4.add(v)
        else:
            self.deg4.discard(v)

    def _touch_edge(self, e):
        if self.edeg[e] == 3:
            self.edge3.add(e)
        else:
            self.edge3.discard(e)

    def _add(self, f):
        self.fpos[f] = len(self.flist)
        self.flist.append(f)
        for v in f:
            self.vstar.setdefault(v, set()).add(f)
            self._touch_vertex(v)
        for e in combinations(f, 2):
            self.edeg[e] += 1
            self._touch_edge(e)

    def _remove(self, f):
        i = self.fpos.pop(f)
        last = self.flist.pop()
        if last != f:
            self.flist[i] = last
            self.fpos[last] = i
        for v in f:
            s = self.vstar[v]
            s.discard(f)
            if not s:
                del self.vstar[v]
                self.deg4.discard(v)
            else:
                self._touch_vertex(v)
        for e in combinations(f, 2):
            self.edeg[e] -= 1
            if not self.edeg[e]:
                del self.edeg[e]
            self._touch_edge(e)

    # queries
    @property
    def n_vertices(self) -> int:
        return len(self.vstar)

    @property
    def n_facets(self) -> int:
        return len(self.flist)

    def star(self, F) -> set:
        stars = sorted((self.vstar.get(v, set()) for v in F), key=len)
        out = set(stars[0])
        for s in stars[1:]:
            out &= s
        return out

    def is_face(self, B) -> bool:
        if len(B) == 2:
            return tuple(sorted(B)) in self.edeg
        return bool(self.star(B))

    def move_for(self, F) -> BistellarMove | None:
        F = tuple(sorted(F))
        if len(F) == 4:
            return BistellarMove(F, (self.next_label,)) if F in self.fpos else None
        star = self.star(F)
        if not star:
            return None
        B = set().union(*star) - set(F)
        if len(B) != 5 - len(F) or len(star) != len(B) or self.is_face(B):
            return None
        return BistellarMove(F, tuple(B))

    def apply(self, m: BistellarMove) -> None:
        F, B = set(m.face), set(m.coface)
        for b in B:
            self._remove(tuple(sorted(F | (B - {b}))))
        for f in F:
            self._add(tuple(sorted((F - {f}) | B)))
        if len(B) == 1:
            self.next_label = max(self.next_label, m.coface[0] + 1)

    def complex(self) -> SimplicialComplex:
        return build_complex(self.flist)

    def f_vector(self) -> tuple[int, int, int, int]:
        n3 = len(self.flist)
        n0 = len(self.vstar)
        n1 = len(self.edeg)
        return (n0, n1, 2 * n3, n3)

    # random picks
    def random_23(self, rng: random.Random, tries: int = 50) -> BistellarMove | None:
        for _ in range(tries):
            f = self.flist[rng.randrange(len(self.flist))]
            a = f[rng.randrange(4)]
            T = tuple(v for v in f if v != a)
            other = [g for g in self.star(T) if g != f]
            if len(other) != 1:
                continue
            (b,) = set(other[0]) - set(T)
            if (min(a, b), max(a, b)) in self.edeg:
                continue
            return BistellarMove(T, (a, b))
        return None


# --------------------------------------------------------------- reducer

@dataclass(frozen=True)
class ReduceParams:
    seed: int = 0
    max_rounds: int = 3000
    heat: Fraction = Fraction(1, 2)
    stall_limit: int = 40
    check: bool = False

    def __post_init__(self):
        if self.max_rounds <= 0 or self.stall_limit <= 0:
            raise ValueError("round limits must be positive")
        if not 0 <= Fraction(self.heat) < 1:
            raise ValueError("heat must lie in [0, 1)")


@dataclass
class RoundRecord:
    round: int
    f_vector: tuple[int, ...]
    moves: dict[str, int]
    heat_moves: int
    reheat: bool

    def as_record(self) -> dict:
        return {"round": self.round, "f_vector": list(self.f_vector), "moves": dict(self.moves),
                "heat_moves": self.heat_moves, "reheat": self.reheat}


@dataclass
class ReduceResult:
    complex: SimplicialComplex
    log: list[RoundRecord] = field(default_factory=list)
    rounds: int = 0


def _greedy(st: FlipState, rng: random.Random, counts: Counter) -> None:
    while True:
        applied = False
        if st.deg4:
            for v in sorted(st.deg4, key=lambda _: rng.random()):
                m = st.move_for((v,))
                if m is not None:
                    st.apply(m)
                    counts[m.kind] += 1
                    applied = True
                    break
        if applied:
            continue
        if st.edge3:
            for e in sorted(st.edge3, key=lambda _: rng.random()):
                m = st.move_for(e)
                if m is not None:
                    st.apply(m)
                    counts[m.kind] += 1
                    applied = True
                    break
        if not applied:
            return


def reduce_with_log(K: SimplicialComplex, params: ReduceParams = ReduceParams()) -> ReduceResult:
    """Greedy 4-1 / 3-2 moves, with bursts of random 2-3 moves when stuck.

    The smallest complex seen (fewest vertices, then fewest facets) is
    returned, relabeled to 1..f0.  Deterministic for a given seed.
    """
    st = FlipState(K)
    rng = random.Random(params.seed)
    heat = Fraction(params.heat)
    best_key = (st.n_vertices, st.n_facets)
    best = sorted(st.flist)
    stall = 0
    extra = 0
    log = []
    if params.check:
        from .homology import homology
        h0 = homology(K)
    rnd = 0
    for rnd in range(1, params.max_rounds + 1):
        counts: Counter = Counter()
        _greedy(st, rng, counts)
        key = (st.n_vertices, st.n_facets)
        reheat = False
        if key < best_key:
            best_key, best = key, sorted(st.flist)
            stall = extra = 0
        else:
            stall += 1
            if stall >= params.stall_limit:
                stall = 0
                extra += 1
                reheat = True
        if params.check:
            C = st.complex()
            if not verify_closed_3_manifold(C).ok or homology(C) != h0:
                raise AssertionError(f"round {rnd}: flip changed the topology")
        if best_key[0] <= 5:
            log.append(RoundRecord(rnd, st.f_vector(), dict(counts), 0, reheat))
            break
        burst = 1 + extra
        while rng.random() < heat:
            burst += 1
        done = 0
        for _ in range(burst):
            m = st.random_23(rng)
            if m is None:
                break
            st.apply(m)
            done += 1
        counts["2-3"] += done
        log.append(RoundRecord(rnd, st.f_vector(), dict(counts), done, reheat))
    return ReduceResult(build_complex(best).compact(), log, rnd)


def reduce(K: SimplicialComplex, params: ReduceParams = ReduceParams()) -> SimplicialComplex:
    return reduce_with_log(K, params).complex
