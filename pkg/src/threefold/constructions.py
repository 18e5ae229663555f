"""Surfaces, staircase products, mapping tori, joins and connected sums."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .complex import (
    ComplexError,
    SimplicialComplex,
    build_complex,
    is_orientable,
    orientation,
    parse_tri,
)


# ---------------------------------------------------------------- products

def staircase_paths(m: int, n: int) -> list[tuple[tuple[int, int], ...]]:
    """Monotone lattice paths from (0,0) to (m,n), as tuples of lattice points."""
    paths = []
    for up in combinations(range(m + n), n):
        i = j = 0
        pts = [(0, 0)]
        ups = set(up)
        for step in range(m + n):
            if step in ups:
                j += 1
            else:
                i += 1
            pts.append((i, j))
        paths.append(tuple(pts))
    return paths


def staircase_product(A: Sequence, B: Sequence) -> list[tuple[tuple, ...]]:
    """Staircase triangulation of the simplex product A x B.

    Vertices of the result are pairs ``(a, b)``; the vertex orders are the
    given sequence orders.  There are C(m+n, m) facets.
    """
    m, n = len(A) - 1, len(B) - 1
    return [tuple((A[i], B[j]) for i, j in path) for path in staircase_paths(m, n)]


def product_labels(K: SimplicialComplex, L: SimplicialComplex) -> dict[tuple[int, int], int]:
    t = len(L.vertices)
    iL = {v: k for k, v in enumerate(L.vertices)}
    return {(a, b): i * t + iL[b] + 1 for i, a in enumerate(K.vertices) for b in L.vertices}


def product(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Product triangulation: staircases over every facet pair, label order as vertex order."""
    lab = product_labels(K, L)
    paths = staircase_paths(K.dim, L.dim)
    facets = []
    for f in K.facets:
        for g in L.facets:
            for path in paths:
                facets.append(tuple(lab[f[i], g[j]] for i, j in path))
    return build_complex(facets)


# ------------------------------------------------------------ automorphisms

@dataclass(frozen=True)
class VertexAutomorphism:
    """A vertex permutation of K that maps facets to facets."""

    complex: SimplicialComplex
    mapping: tuple[tuple[int, int], ...]

    def __init__(self, K: SimplicialComplex, mapping: Mapping[int, int]):
        full = {v: mapping.get(v, v) for v in K.vertices}
        if sorted(full.values()) != list(K.vertices):
            raise ComplexError("vertex map is not a permutation of the vertex set")
        for f in K.facets:
            image = tuple(sorted(full[v] for v in f))
            if image not in K.facets:
                raise ComplexError(f"not an automorphism: facet {f} maps to non-facet {image}")
        object.__setattr__(self, "complex", K)
        object.__setattr__(self, "mapping", tuple(sorted(full.items())))

    @classmethod
    def from_cycles(cls, K: SimplicialComplex, cycles: Iterable[Sequence[int]]) -> "VertexAutomorphism":
        return cls(K, cycles_to_map(cycles))

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "VertexAutomorphism":
        return cls(K, {})

    def as_dict(self) -> dict[int, int]:
        return dict(self.mapping)

    def __call__(self, v: int) -> int:
        return self.as_dict()[v]

    def order(self) -> int:
        m = self.as_dict()
        cur = dict(m)
        k = 1
        while any(cur[v] != v for v in cur):
            cur = {v: m[cur[v]] for v in cur}
            k += 1
        return k

    def cycles(self) -> list[tuple[int, ...]]:
        return map_to_cycles(self.as_dict())

    def preserves_orientation(self) -> bool | None:
        """None when the complex is non-orientable."""
        orient = orientation(self.complex)
        if orient is None:
            return None
        m = self.as_dict()
        f = min(self.complex.facets)
        image = [m[v] for v in f]
        return orient[f] * _perm_sign(image) == orient[tuple(sorted(image))]


def _perm_sign(seq: Sequence[int]) -> int:
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


def cycles_to_map(cycles: Iterable[Sequence[int]]) -> dict[int, int]:
    m: dict[int, int] = {}
    for cyc in cycles:
        for i, v in enumerate(cyc):
            if v in m:
                raise ComplexError(f"vertex {v} appears in two cycles")
            m[v] = cyc[(i + 1) % len(cyc)]
    return m


def map_to_cycles(m: Mapping[int, int]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for v in sorted(m):
        if v in seen or m[v] == v:
            continue
        cyc = [v]
        seen.add(v)
        w = m[v]
        while w != v:
            cyc.append(w)
            seen.add(w)
            w = m[w]
        out.append(tuple(cyc))
    return out


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    """Parse cycle notation such as ``"(1,5,2,6)(3,8)(4,7)"`` or ``"()"``."""
    text = text.replace(" ", "")
    out = []
    for chunk in text.split(")"):
        chunk = chunk.lstrip("(")
        if chunk:
            out.append(tuple(int(x) for x in chunk.split(",")))
    return out


def automorphism_group(K: SimplicialComplex) -> list[dict[int, int]]:
    """All automorphisms of a strongly connected pseudomanifold.

    An automorphism is fixed by the image of one ordered facet, then
    propagated across ridges, so the search is |facets| * (d+1)! trials.
    """
    ridges: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for f in K.facets:
        for i in range(len(f)):
            ridges.setdefault(f[:i] + f[i + 1:], []).append(f)
    if any(len(v) > 2 for v in ridges.values()):
        raise ComplexError("automorphism search needs a pseudomanifold")
    start = min(K.facets)
    found = []
    for target in sorted(K.facets):
        for perm in permutations(target):
            m = dict(zip(start, perm))
            if _propagate(K, ridges, start, m):
                found.append(m)
    return found


def _propagate(K, ridges, start, m) -> bool:
    stack = [start]
    done = {start}
    while stack:
        f = stack.pop()
        img = tuple(sorted(m[v] for v in f))
        if img not in K.facets:
            return False
        for i in range(len(f)):
            r = f[:i] + f[i + 1:]
            others = [g for g in ridges[r] if g != f]
            rimg = tuple(sorted(m[v] for v in r))
            iothers = [g for g in ridges.get(rimg, ()) if g != img]
            if len(others) != len(iothers):
                return False
            if not others:
                continue
            g, gi = others[0], iothers[0]
            (x,) = set(g) - set(r)
            (y,) = set(gi) - set(rimg)
            if x in m:
                if m[x] != y:
                    return False
            else:
                if y in m.values():
                    return False
                m[x] = y
            if g not in done:
                done.add(g)
                stack.append(g)
    return len(m) == len(K.vertices)


# ------------------------------------------------------------ mapping tori

def mapping_torus(K: SimplicialComplex, phi: VertexAutomorphism | None = None, layers: int = 3) -> SimplicialComplex:
    """K x [0, layers] with the top copy glued to the bottom through phi.

    Level-i copy of vertex v gets label ``i*f0 + rank(v) + 1``; the top level
    is identified with level 0 via ``(v, layers) ~ (phi(v), 0)``.
    """
    if layers < 3:
        raise ComplexError("mapping_torus needs at least 3 layers")
    if phi is None:
        phi = VertexAutomorphism.identity(K)
    elif phi.complex != K:
        raise ComplexError("automorphism belongs to a different complex")
    pm = phi.as_dict()
    n = len(K.vertices)
    idx = {v: k for k, v in enumerate(K.vertices)}

    def lab(v: int, level: int) -> int:
        if level == layers:
            v, level = pm[v], 0
        return level * n + idx[v] + 1

    paths = staircase_paths(K.dim, 1)
    facets = []
    for f in K.facets:
        for level in range(layers):
            for path in paths:
                facets.append(tuple(lab(f[i], level + j) for i, j in path))
    return build_complex(facets)


# ---------------------------------------------------------------- surfaces

def polygon(n: int) -> SimplicialComplex:
    if n < 3:
        raise ComplexError("polygon needs n >= 3")
    return build_complex((i + 1, (i + 1) % n + 1) for i in range(n))


def simplex_boundary(n: int) -> SimplicialComplex:
    """Boundary of the n-simplex on labels 1..n+1."""
    if n < 2:
        raise ComplexError("simplex_boundary needs n >= 2")
    return build_complex(combinations(range(1, n + 2), n))


def moebius_torus() -> SimplicialComplex:
    """The 7-vertex torus: triangles {i,i+1,i+3} and {i,i+2,i+3} mod 7, labels shifted by one."""
    facets = []
    for i in range(7):
        facets.append(tuple((i + d) % 7 + 1 for d in (0, 1, 3)))
        facets.append(tuple((i + d) % 7 + 1 for d in (0, 2, 3)))
    return build_complex(facets)


# The three gluings of the 7-vertex torus giving G5, G3, G2.  They act as
# x -> 3x, x -> 2x and x -> -x on Z/7 (label = x + 1).
MOEBIUS_GLUINGS = {
    "G5": [(2, 4, 3, 7, 5, 6)],
    "G3": [(2, 3, 5), (4, 7, 6)],
    "G2": [(2, 7), (3, 6), (4, 5)],
}


def rp2_6() -> SimplicialComplex:
    """The 6-vertex real projective plane."""
    return build_complex([
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
        (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
    ])


def _fixture(name: str) -> SimplicialComplex:
    text = resources.files("threefold.data").joinpath(name).read_text(encoding="utf-8")
    return parse_tri(text, source=name)


def klein_bottle_8_20() -> SimplicialComplex:
    """8-vertex Klein bottle whose automorphism group is the Table-8 group of order 8."""
    return _fixture("klein_bottle_8_20.tri")


# Gluing transformations of the 8-vertex Klein bottle, two per twisted product.
KLEIN_GLUINGS = {
    "B1": ["()", "(1,2)(5,6)"],
    "B2": ["(1,5,2,6)(3,8)(4,7)", "(1,6,2,5)(3,8)(4,7)"],
    "B3": ["(1,2)(3,4)(7,8)", "(3,4)(5,6)(7,8)"],
    "B4": ["(1,5)(2,6)(3,7)(4,8)", "(1,6)(2,5)(3,7)(4,8)"],
}

TORUS_10_ROTATION = [(3, 4, 5, 6), (7, 8, 9, 10)]


def torus_10_rot4() -> tuple[SimplicialComplex, VertexAutomorphism]:
    """10-vertex torus with a quarter-turn automorphism (vertices 1, 2 fixed)."""
    K = _fixture("torus_10_rot4.tri")
    return K, VertexAutomorphism.from_cycles(K, TORUS_10_ROTATION)


# ----------------------------------------------------------- joins, sums

def _shifted(L: SimplicialComplex, offset: int) -> SimplicialComplex:
    return L.relabel({v: v + offset for v in L.vertices})


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Join with L relabeled above the labels of K."""
    L2 = _shifted(L, max(K.vertices))
    return build_complex(f + g for f in K.facets for g in L2.facets)


def cone(K: SimplicialComplex, apex: int | None = None) -> SimplicialComplex:
    if apex is None:
        apex = max(K.vertices) + 1
    elif apex in K.vertices:
        raise ComplexError(f"apex {apex} already a vertex")
    return build_complex(f + (apex,) for f in K.facets)


def points(*labels: int) -> SimplicialComplex:
    return build_complex((v,) for v in labels)


def connected_sum(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    """Remove one facet from each summand and glue along the boundaries.

    Facet boundaries of closed manifolds are always induced, so the
    lexicographically first facet is used.  Orientable summands are glued
    orientation-reversingly (one transposition is tried if the identity
    gluing gives a non-orientable result).
    """
    if K1.dim != K2.dim:
        raise ComplexError("summands have different dimensions")
    s1 = min(K1.facets)
    s2 = min(K2.facets)
    offset = max(K1.vertices)
    want_orientable = is_orientable(K1) and is_orientable(K2)
    for swap in (False, True):
        target = list(s1)
        if swap:
            target[0], target[1] = target[1], target[0]
        m = {v: v + offset for v in K2.vertices}
        m.update(zip(s2, target))
        facets = [f for f in K1.facets if f != s1]
        facets += [tuple(m[v] for v in f) for f in K2.facets if f != s2]
        K = build_complex(facets).compact()
        if not want_orientable or is_orientable(K):
            return K
    raise ComplexError("could not find an orientation-coherent gluing")


def orientable_surface(g: int) -> SimplicialComplex:
    if g < 0:
        raise ComplexError("genus must be non-negative")
    if g == 0:
        return simplex_boundary(3)
    K = moebius_torus()
    for _ in range(g - 1):
        K = connected_sum(K, moebius_torus())
    return K


def nonorientable_surface(g: int) -> SimplicialComplex:
    if g < 1:
        raise ComplexError("non-orientable genus must be at least 1")
    K = rp2_6()
    for _ in range(g - 1):
        K = connected_sum(K, rp2_6())
    return K


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    """First derived subdivision; face labels are ranks in (dim, lex) order."""
    faces = [s for k in range(K.dim + 1) for s in K.faces(k)]
    lab = {s: i + 1 for i, s in enumerate(faces)}
    facets = []
    for f in K.facets:
        for order in permutations(f):
            chain = [tuple(sorted(order[: k + 1])) for k in range(len(order))]
            facets.append(tuple(lab[c] for c in chain))
    return build_complex(facets)
