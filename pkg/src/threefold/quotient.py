"""Polyhedra (or polygons) with face pairings, their quotients, and triangulations.

A scheme is a disjoint union of top cells (polyhedra given by outward
face cycles, or polygons in the 2-dimensional case) together with
pairings of codimension-one faces by explicit vertex bijections.  The
quotient is computed by union-find on vertices, edges and faces, keeping
track of orientations so that a cellular chain complex can be written
down.  ``simplicialize`` turns the quotient into a simplicial complex by
derived subdivision of the face flags.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .complex import ComplexError, SimplicialComplex, build_complex
from .homology import HomologyGroups, IntegerMatrix, chain_homology


class IdentificationError(ComplexError):
    """Malformed scheme: bad maps, faces paired twice, and so on."""


class DegenerateQuotient(IdentificationError):
    """The pairings fold a cell onto itself."""

    def __init__(self, message: str, orbit: Sequence = ()):
        super().__init__(f"{message}: orbit {list(orbit)}")
        self.orbit = list(orbit)


@dataclass(frozen=True)
class Pairing:
    """Glue face ``a`` onto face ``b`` by the vertex bijection ``vmap``.

    In a 3-dimensional scheme faces are polygon names; in a 2-dimensional
    scheme they are edges written as ``(u, v)`` tuples.
    """

    a: Hashable
    b: Hashable
    vmap: tuple[tuple[int, int], ...]

    @classmethod
    def make(cls, a, b, vmap: Mapping[int, int]) -> "Pairing":
        return cls(a, b, tuple(sorted(vmap.items())))

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.vmap)


@dataclass
class IdentificationScheme:
    """Top cells plus face pairings.

    ``polygons`` maps a name to a vertex cycle.  In dimension 3, ``cells``
    lists the polygons bounding each polyhedron; in dimension 2 ``cells`` is
    empty and every polygon is a top cell.
    """

    polygons: dict[str, tuple[int, ...]]
    cells: dict[str, tuple[str, ...]] = field(default_factory=dict)
    pairings: list[Pairing] = field(default_factory=list)
    name: str = ""

    @property
    def dim(self) -> int:
        return 3 if self.cells else 2

    def edges_of(self, poly: str) -> list[tuple[int, int]]:
        cyc = self.polygons[poly]
        return [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]


# ------------------------------------------------------------ union-find

class _UF:
    """Union-find with a Z/2 parity on each element relative to its root."""

    def __init__(self):
        self.parent: dict = {}
        self.parity: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # compress, accumulating parity from the far end
        acc = 0
        for y in reversed(path):
            acc ^= self.parity[y]
            self.parity[y] = acc
            self.parent[y] = root
        return root

    def rel(self, x) -> int:
        self.find(x)
        return self.parity[x] if self.parent[x] != x else 0

    def union(self, x, y, par: int = 0) -> bool:
        """Declare parity(x) xor parity(y) == par; False on contradiction."""
        self.add(x)
        self.add(y)
        rx, ry = self.find(x), self.find(y)
        px, py = self.rel(x), self.rel(y)
        if rx == ry:
            return (px ^ py) == par
        self.parent[ry] = rx
        self.parity[ry] = px ^ py ^ par
        return True

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _ekey(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _cyclic_direction(image: Sequence[int], target: Sequence[int]) -> int | None:
    """0 if image runs along target's cyclic order, 1 if against, None otherwise."""
    n = len(target)
    if sorted(image) != sorted(target):
        return None
    start = target.index(image[0])
    if all(image[i] == target[(start + i) % n] for i in range(n)):
        return 0
    if all(image[i] == target[(start - i) % n] for i in range(n)):
        return 1
    return None


# ------------------------------------------------------------ quotient

@dataclass
class Quotient:
    scheme: IdentificationScheme
    vertex_class: dict[int, int]
    edge_class: dict[tuple[int, int], tuple[int, int]]      # canonical edge -> (class, sign)
    face_class: dict[Hashable, tuple[int, int]]             # polygon (3d) -> (class, sign)
    counts: tuple[int, ...]
    orbits: dict[str, list[list]]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts))

    def boundary_matrices(self) -> list[IntegerMatrix]:
        S = self.scheme
        nv, ne = self.counts[0], self.counts[1]
        d1 = [dict() for _ in range(ne)]
        rep_edge: dict[int, tuple[int, int]] = {}
        for e, (c, s) in sorted(self.edge_class.items()):
            if c not in rep_edge:
                rep_edge[c] = e if s == 1 else (e[1], e[0])
        for c, (u, v) in rep_edge.items():
            col = d1[c]
            hu, hv = self.vertex_class[u], self.vertex_class[v]
            col[hv] = col.get(hv, 0) + 1
            col[hu] = col.get(hu, 0) - 1
            d1[c] = {k: x for k, x in col.items() if x}
        mats = [IntegerMatrix(nv, ne, d1)]

        def polygon_column(poly: str) -> dict[int, int]:
            col: dict[int, int] = {}
            for u, v in S.edges_of(poly):
                c, s = self.edge_class[_ekey(u, v)]
                sign = s if u < v else -s
                col[c] = col.get(c, 0) + sign
            return {k: x for k, x in col.items() if x}

        if S.dim == 2:
            tops = sorted(S.polygons)
            mats.append(IntegerMatrix(ne, len(tops), [polygon_column(p) for p in tops]))
            return mats
        nf = self.counts[2]
        rep_face: dict[int, tuple[str, int]] = {}
        for p, (c, s) in sorted(self.face_class.items()):
            rep_face.setdefault(c, (p, s))
        d2 = [dict() for _ in range(nf)]
        for c, (p, s) in rep_face.items():
            d2[c] = {k: s * x for k, x in polygon_column(p).items()}
        mats.append(IntegerMatrix(ne, nf, d2))
        d3 = []
        for cell in sorted(S.cells):
            col: dict[int, int] = {}
            for p in S.cells[cell]:
                c, s = self.face_class[p]
                col[c] = col.get(c, 0) + s
            d3.append({k: x for k, x in col.items() if x})
        mats.append(IntegerMatrix(nf, len(d3), d3))
        return mats

    def homology(self) -> HomologyGroups:
        return chain_homology(list(self.counts), self.boundary_matrices())

    def describe(self) -> str:
        names = ("vertices", "edges", "faces", "cells")
        parts = [f"{c} {names[k]}" for k, c in enumerate(self.counts)]
        return ", ".join(parts) + f"; chi = {self.euler_characteristic()}"


def _orient_cell(S: IdentificationScheme, cell: str) -> None:
    """Flip polygon cycles of a cell so adjacent faces induce opposite edge directions."""
    faces = list(S.cells[cell])
    by_edge: dict[tuple[int, int], list[str]] = {}
    for p in faces:
        for u, v in S.edges_of(p):
            by_edge.setdefault(_ekey(u, v), []).append(p)
    for e, ps in by_edge.items():
        if len(ps) != 2:
            raise IdentificationError(f"cell {cell}: edge {e} lies in {len(ps)} faces")
    done = {faces[0]}
    stack = [faces[0]]
    while stack:
        p = stack.pop()
        for u, v in S.edges_of(p):
            (q,) = [x for x in by_edge[_ekey(u, v)] if x != p]
            if (u, v) in S.edges_of(q):
                if q in done:
                    raise IdentificationError(f"cell {cell} boundary is not orientable")
                S.polygons[q] = tuple(reversed(S.polygons[q]))
            if q not in done:
                done.add(q)
                stack.append(q)
    if len(done) != len(faces):
        raise IdentificationError(f"cell {cell} boundary is disconnected")


def validate(S: IdentificationScheme) -> None:
    owner: dict[int, str] = {}
    if S.dim == 3:
        seen_poly: dict[str, str] = {}
        for cell, polys in S.cells.items():
            for p in polys:
                if p not in S.polygons:
                    raise IdentificationError(f"cell {cell} references unknown face {p}")
                if p in seen_poly:
                    raise IdentificationError(f"face {p} bounds two cells")
                seen_poly[p] = cell
                for v in S.polygons[p]:
                    if owner.setdefault(v, cell) != cell:
                        raise IdentificationError(f"vertex {v} used by two cells")
        for cell in S.cells:
            _orient_cell(S, cell)
    else:
        for p, cyc in S.polygons.items():
            for v in cyc:
                if owner.setdefault(v, p) != p:
                    raise IdentificationError(f"vertex {v} used by two polygons")
    for p, cyc in S.polygons.items():
        if len(cyc) < (3 if S.dim == 3 else 2) or len(set(cyc)) != len(cyc):
            raise IdentificationError(f"polygon {p} has a bad vertex cycle {cyc}")
    used = set()
    for pr in S.pairings:
        for x in (pr.a, pr.b):
            if x in used:
                raise IdentificationError(f"face {x} appears in two pairings")
            used.add(x)


def quotient(S: IdentificationScheme) -> Quotient:
    # validation re-orients face cycles, so work on a copy
    S = IdentificationScheme(dict(S.polygons), dict(S.cells), list(S.pairings), S.name)
    validate(S)
    V, E, F = _UF(), _UF(), _UF()
    for p in S.polygons:
        for u, v in S.edges_of(p):
            V.add(u)
            E.add(_ekey(u, v))
        if S.dim == 3:
            F.add(p)
    all_edges = {_ekey(u, v) for p in S.polygons for u, v in S.edges_of(p)}
    for pr in S.pairings:
        m = pr.mapping
        if S.dim == 3:
            if pr.a not in S.polygons or pr.b not in S.polygons:
                raise IdentificationError(f"pairing references unknown face {pr.a} or {pr.b}")
            src, dst = S.polygons[pr.a], S.polygons[pr.b]
            if set(m) != set(src):
                raise IdentificationError(f"pairing {pr.a}->{pr.b} does not cover the face vertices")
            image = [m[v] for v in src]
            direction = _cyclic_direction(image, dst)
            if direction is None:
                raise IdentificationError(f"pairing {pr.a}->{pr.b} does not respect the polygon")
            if pr.a == pr.b and image != list(src):
                raise DegenerateQuotient("face identified with itself", [pr.a])
            # a map along b's cycle makes the two faces the same oriented
            # cell; against it (the orientable case) they differ by a sign
            if not F.union(pr.a, pr.b, direction):
                raise DegenerateQuotient("face orientation conflict", [pr.a, pr.b])
            edges = [(src[i], src[(i + 1) % len(src)]) for i in range(len(src))]
        else:
            a, b = tuple(pr.a), tuple(pr.b)
            if _ekey(*a) not in all_edges or _ekey(*b) not in all_edges:
                raise IdentificationError(f"pairing references unknown edge {a} or {b}")
            if set(m) != set(a) or {m[a[0]], m[a[1]]} != set(b):
                raise IdentificationError(f"pairing {a}->{b} is not a bijection of endpoints")
            edges = [a]
        for u, v in edges:
            x, y = m[u], m[v]
            if _ekey(x, y) not in all_edges:
                raise IdentificationError(f"edge {(u, v)} maps to non-edge {(x, y)}")
            par = (u > v) ^ (x > y)
            if not E.union(_ekey(u, v), _ekey(x, y), int(par)):
                orbit = [e for es in E.classes().values() if _ekey(u, v) in es for e in es]
                raise DegenerateQuotient("edge identified with itself reversed", sorted(orbit))
            V.union(u, x)
            V.union(v, y)

    def index(uf: _UF, keyfn=lambda x: x):
        roots = sorted(uf.classes().items(), key=lambda kv: min(map(keyfn, kv[1])))
        return {root: i for i, (root, _) in enumerate(roots)}, [sorted(m, key=keyfn) for _, m in roots]

    vi, vorb = index(V)
    vertex_class = {v: vi[V.find(v)] for v in V.parent}
    ei, eorb = index(E)
    edge_class = {e: (ei[E.find(e)], -1 if E.rel(e) else 1) for e in E.parent}
    counts = [len(vi), len(ei)]
    orbits = {"vertices": vorb, "edges": eorb}
    face_class: dict = {}
    if S.dim == 3:
        fi, forb = index(F, keyfn=str)
        face_class = {p: (fi[F.find(p)], -1 if F.rel(p) else 1) for p in F.parent}
        counts += [len(fi), len(S.cells)]
        orbits["faces"] = forb
    else:
        counts.append(len(S.polygons))
    return Quotient(S, vertex_class, edge_class, face_class, tuple(counts), orbits)


# ------------------------------------------------------------ subdivision

def _flags(S: IdentificationScheme):
    """Maximal flags of the unglued cells as tuples of poset keys."""
    if S.dim == 3:
        for cell in sorted(S.cells):
            for p in S.cells[cell]:
                for u, v in S.edges_of(p):
                    for w in (u, v):
                        yield (("v", w), ("e", _ekey(u, v)), ("f", p), ("c", cell))
    else:
        for p in sorted(S.polygons):
            for u, v in S.edges_of(p):
                for w in (u, v):
                    yield (("v", w), ("e", _ekey(u, v)), ("f", p))


def _chain_classes(S: IdentificationScheme, Q: Quotient) -> _UF:
    """Union-find over chains (frozensets of poset keys) lying in paired faces."""
    uf = _UF()
    for pr in S.pairings:
        m = pr.mapping
        if S.dim == 3:
            src = S.polygons[pr.a]
            top_a, top_b = ("f", pr.a), ("f", pr.b)
            edges = [(src[i], src[(i + 1) % len(src)]) for i in range(len(src))]
        else:
            a = tuple(pr.a)
            top_a, top_b = ("e", _ekey(*a)), ("e", _ekey(*pr.b))
            edges = [a]

        def img(k):
            kind, x = k
            if kind == "v":
                return ("v", m[x])
            if kind == "e":
                return ("e", _ekey(m[x[0]], m[x[1]]))
            return top_b

        for u, v in edges:
            e = ("e", _ekey(u, v))
            for w in (u, v):
                vk = ("v", w)
                chains = [(vk,), (e,), (vk, e)]
                if S.dim == 3:
                    chains += [(top_a,), (vk, top_a), (e, top_a), (vk, e, top_a)]
                for ch in chains:
                    uf.union(frozenset(ch), frozenset(img(k) for k in ch))
    return uf


def _sort_key(chain: frozenset) -> tuple:
    return tuple(sorted((k[0], repr(k[1])) for k in chain))


def simplicialize(Q: Quotient, rounds: int = 2) -> SimplicialComplex:
    """Triangulate the quotient by one or two derived subdivisions.

    rounds=2 is always simplicial.  rounds=1 (the barycentric subdivision
    of the cell structure) is simplicial only for sufficiently fine cell
    structures; a ComplexError is raised when it is not.
    """
    if rounds not in (1, 2):
        raise ValueError("rounds must be 1 or 2")
    S = Q.scheme
    uf = _chain_classes(S, Q)
    labels: dict = {}

    def label(chain: frozenset) -> int:
        root = uf.find(chain) if chain in uf.parent else chain
        if root not in labels:
            labels[root] = None
        return root

    raw = []
    for flag in _flags(S):
        if rounds == 1:
            raw.append(tuple(label(frozenset([k])) for k in flag))
        else:
            for order in permutations(range(len(flag))):
                raw.append(tuple(label(frozenset(flag[i] for i in order[: j + 1]))
                                 for j in range(len(flag))))
    reps = {}
    if uf.parent:
        for members in uf.classes().values():
            root = uf.find(members[0])
            reps[root] = min(_sort_key(c) for c in members)
    keyed = sorted(labels, key=lambda r: reps.get(r, _sort_key(r)))
    lab = {r: i + 1 for i, r in enumerate(keyed)}
    facets = [tuple(lab[r] for r in t) for t in raw]
    if rounds == 1:
        bad = [t for t in facets if len(set(t)) != len(t)]
        if bad or len(set(map(frozenset, facets))) != len(facets):
            raise ComplexError("single derived subdivision of this cell structure is not simplicial")
    return build_complex(facets)


# ------------------------------------------------------------ .ids format

def format_ids(S: IdentificationScheme, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"dim {S.dim}")
    for p in S.polygons:
        lines.append(f"face {p} " + " ".join(map(str, S.polygons[p])))
    for c, polys in S.cells.items():
        lines.append(f"cell {c} " + " ".join(polys))
    for pr in S.pairings:
        if S.dim == 3:
            a, b = pr.a, pr.b
        else:
            a, b = "-".join(map(str, pr.a)), "-".join(map(str, pr.b))
        maps = " ".join(f"{u}>{v}" for u, v in pr.vmap)
        lines.append(f"pair {a} {b} : {maps}")
    return "\n".join(lines) + "\n"


def parse_ids(text: str, source: str = "<string>") -> IdentificationScheme:
    dim = None
    polygons: dict[str, tuple[int, ...]] = {}
    cells: dict[str, tuple[str, ...]] = {}
    edges: dict[str, tuple[int, int]] = {}
    pairings = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        tok = line.split()
        try:
            if tok[0] == "dim":
                dim = int(tok[1])
                if dim not in (2, 3):
                    raise IdentificationError(f"{where}: dim must be 2 or 3")
            elif tok[0] == "vertex":
                [int(t) for t in tok[1:]]
            elif tok[0] == "edge":
                edges[tok[1]] = (int(tok[2]), int(tok[3]))
            elif tok[0] == "face":
                polygons[tok[1]] = tuple(int(t) for t in tok[2:])
            elif tok[0] == "cell":
                cells[tok[1]] = tuple(tok[2:])
            elif tok[0] == "pair":
                head, _, body = line.partition(":")
                _, a, b = head.split()
                vmap = {}
                for item in body.split():
                    u, _, v = item.partition(">")
                    vmap[int(u)] = int(v)
                if dim == 2:
                    a = edges.get(a) or tuple(int(x) for x in a.split("-"))
                    b = edges.get(b) or tuple(int(x) for x in b.split("-"))
                pairings.append(Pairing.make(a, b, vmap))
            else:
                raise IdentificationError(f"{where}: unknown keyword {tok[0]!r}")
        except (ValueError, IndexError) as exc:
            raise IdentificationError(f"{where}: cannot parse {line!r} ({exc})") from None
    if dim is None:
        raise IdentificationError(f"{source}: missing 'dim' line")
    if (dim == 3) != bool(cells):
        raise IdentificationError(f"{source}: dim {dim} does not match cell declarations")
    return IdentificationScheme(polygons, cells, pairings, name=source)


def read_ids(path: str | Path) -> IdentificationScheme:
    return parse_ids(Path(path).read_text(encoding="utf-8"), str(path))


def write_ids(S: IdentificationScheme, path: str | Path, comments: Sequence[str] = ()) -> None:
    Path(path).write_text(format_ids(S, comments), encoding="utf-8")
