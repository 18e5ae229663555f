"""Builders for lens, prism, platonic and flat spaces from face pairings.

Every builder goes through an :class:`IdentificationScheme`.  The generic
route is ``simplicialize`` (double derived subdivision); a smaller
"shell" triangulation is tried first where one is available and is only
accepted when it verifies as a closed 3-manifold.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from importlib import resources
from math import gcd
from typing import Callable, Sequence

from .complex import ComplexError, SimplicialComplex, build_complex, verify_closed_3_manifold
from .quotient import (
    IdentificationScheme,
    Pairing,
    Quotient,
    _ekey,
    parse_ids,
    quotient,
    simplicialize,
)

log = logging.getLogger(__name__)

Vec = tuple[float, float, float]


# ---------------------------------------------------------------- geometry

def _sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _dot(a: Vec, b: Vec) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a: Vec, b: Vec) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _scale(a: Vec, t: float) -> Vec:
    return (a[0] * t, a[1] * t, a[2] * t)


def _unit(a: Vec) -> Vec:
    return _scale(a, 1 / math.sqrt(_dot(a, a)))


def _rotate(x: Vec, axis: Vec, theta: float) -> Vec:
    k = _unit(axis)
    c, s = math.cos(theta), math.sin(theta)
    return _add(_add(_scale(x, c), _scale(_cross(k, x), s)), _scale(k, _dot(k, x) * (1 - c)))


def _centroid(pts: Sequence[Vec]) -> Vec:
    n = len(pts)
    return (sum(p[0] for p in pts) / n, sum(p[1] for p in pts) / n, sum(p[2] for p in pts) / n)


@dataclass
class Polytope:
    """A centrally symmetric convex polytope centred at the origin.

    ``faces`` are outward (counter-clockwise seen from outside) vertex cycles
    over vertex labels 1..n.
    """

    coords: dict[int, Vec]
    faces: list[tuple[int, ...]]

    def centre(self, face: Sequence[int]) -> Vec:
        return _centroid([self.coords[v] for v in face])

    def opposite(self, i: int) -> int:
        c = self.centre(self.faces[i])
        for j, g in enumerate(self.faces):
            d = _add(self.centre(g), c)
            if _dot(d, d) < 1e-12:
                return j
        raise ValueError("polytope is not centrally symmetric")

    def twist_map(self, i: int, j: int, theta: float) -> dict[int, int] | None:
        """Translate face i onto face j, then rotate by theta about j's outward normal."""
        F, G = self.faces[i], self.faces[j]
        cF, cG = self.centre(F), self.centre(G)
        out = {}
        for v in F:
            y = _add(_rotate(_sub(self.coords[v], cF), cG, theta), cG)
            hit = [w for w in G if _dot(_sub(self.coords[w], y), _sub(self.coords[w], y)) < 1e-9]
            if len(hit) != 1:
                return None
            out[v] = hit[0]
        return out


def hull_faces(coords: dict[int, Vec]) -> list[tuple[int, ...]]:
    """Facets of a convex polytope given by its vertices, as outward cycles."""
    labels = sorted(coords)
    planes = {}
    for a in labels:
        for b in labels:
            for c in labels:
                if not (a < b < c):
                    continue
                n = _cross(_sub(coords[b], coords[a]), _sub(coords[c], coords[a]))
                if _dot(n, n) < 1e-12:
                    continue
                n = _unit(n)
                d = _dot(n, coords[a])
                sides = [_dot(n, coords[v]) - d for v in labels]
                if all(s <= 1e-9 for s in sides) or all(s >= -1e-9 for s in sides):
                    if any(s > 1e-9 for s in sides):
                        n, d = _scale(n, -1), -d
                    on = tuple(v for v in labels if abs(_dot(n, coords[v]) - d) < 1e-9)
                    planes[on] = n
    faces = []
    for on, n in sorted(planes.items()):
        c = _centroid([coords[v] for v in on])
        e1 = _unit(_sub(coords[on[0]], c))
        e2 = _cross(n, e1)
        ang = {v: math.atan2(_dot(_sub(coords[v], c), e2), _dot(_sub(coords[v], c), e1)) for v in on}
        faces.append(tuple(sorted(on, key=lambda v: ang[v])))
    return faces


def octahedron() -> Polytope:
    pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    coords = {i + 1: tuple(map(float, p)) for i, p in enumerate(pts)}
    return Polytope(coords, hull_faces(coords))


def truncated_cube() -> Polytope:
    xi = math.sqrt(2) - 1
    pts = set()
    for sx in (1, -1):
        for sy in (1, -1):
            for sz in (1, -1):
                for k in range(3):
                    p = [sx * 1.0, sy * 1.0, sz * 1.0]
                    p[k] *= xi
                    pts.add(tuple(p))
    coords = {i + 1: p for i, p in enumerate(sorted(pts))}
    return Polytope(coords, hull_faces(coords))


def prism(r: int) -> Polytope:
    """Prism over a regular 2r-gon with square sides; bottom 1..2r, top 2r+1..4r."""
    n = 2 * r
    h = math.sin(math.pi / n)
    coords = {}
    for i in range(n):
        a = 2 * math.pi * i / n
        coords[i + 1] = (math.cos(a), math.sin(a), -h)
        coords[n + i + 1] = (math.cos(a), math.sin(a), h)
    return Polytope(coords, hull_faces(coords))


def twisted_scheme(P: Polytope, twist: Callable[[tuple[int, ...]], float], name: str) -> IdentificationScheme:
    """Single-cell scheme gluing each face to its opposite by ``twist(face)``."""
    polygons = {f"F{i}": f for i, f in enumerate(P.faces)}
    pairings = []
    done = set()
    for i, f in enumerate(P.faces):
        if i in done:
            continue
        j = P.opposite(i)
        done |= {i, j}
        m = P.twist_map(i, j, twist(f))
        if m is None:
            raise ComplexError(f"{name}: twist does not map face {f} onto its opposite")
        pairings.append(Pairing.make(f"F{i}", f"F{j}", m))
    return IdentificationScheme(polygons, {"C": tuple(polygons)}, pairings, name=name)


# --------------------------------------------------------------- schemes

def lens_scheme(p: int, q: int) -> IdentificationScheme:
    """Solid lens with poles 1 (top) and 2 (bottom) and a rim of n = k*p vertices.

    Top triangle i is glued to bottom triangle i + k*q; k > 1 only when p < 3,
    so that faces and edges stay determined by their vertices.
    """
    if p < 1:
        raise ComplexError("lens scheme needs p >= 1")
    k = 1 if p >= 3 else (3 if p == 1 else 2)
    n = k * p
    rim = [3 + i for i in range(n)]
    polygons = {}
    for i in range(n):
        polygons[f"T{i}"] = (1, rim[i], rim[(i + 1) % n])
        polygons[f"B{i}"] = (2, rim[(i + 1) % n], rim[i])
    pairings = []
    s = k * q
    for i in range(n):
        j = (i + s) % n
        pairings.append(Pairing.make(f"T{i}", f"B{j}", {
            1: 2, rim[i]: rim[j], rim[(i + 1) % n]: rim[(j + 1) % n]}))
    return IdentificationScheme(polygons, {"C": tuple(polygons)}, pairings, name=f"lens({p},{q})")


# Twist angles, fixed by the homology search in threefold.search.
OCTAHEDRON_TWIST = math.pi / 3
TRUNCATED_CUBE_TWISTS = {8: math.pi / 4, 3: math.pi / 3}
PRISM_TWISTS = {"ends": 1, "sides": 1}   # multiples of pi/r and pi/2


def octahedral_scheme(theta: float = OCTAHEDRON_TWIST) -> IdentificationScheme:
    return twisted_scheme(octahedron(), lambda f: theta, "octahedral")


def truncated_cube_scheme(twists: dict[int, float] | None = None) -> IdentificationScheme:
    tw = TRUNCATED_CUBE_TWISTS if twists is None else twists
    return twisted_scheme(truncated_cube(), lambda f: tw[len(f)], "truncated_cube")


def prism_scheme(r: int, ends: int | None = None, sides: int | None = None) -> IdentificationScheme:
    if r < 2:
        raise ComplexError("prism space needs r >= 2")
    ends = PRISM_TWISTS["ends"] if ends is None else ends
    sides = PRISM_TWISTS["sides"] if sides is None else sides
    P = prism(r)
    end_angle = ends * math.pi / r
    side_angle = sides * math.pi / 2
    return twisted_scheme(P, lambda f: end_angle if len(f) == 2 * r else side_angle, f"prism({r})")


# ------------------------------------------------------------ flat G6

# Hantzsche-Wendt group: x -> A x + t with A diagonal; translations in units
# of the unit lattice.  Coset representatives modulo Z^3.
HW_COSETS = [
    ((1, 1, 1), (0.0, 0.0, 0.0)),
    ((1, -1, -1), (0.5, 0.5, 0.0)),
    ((-1, 1, -1), (0.0, 0.5, 0.5)),
    ((-1, -1, 1), (0.5, 0.0, 0.5)),
]


def g6_scheme(n: int = 2) -> IdentificationScheme:
    """Cube scheme for the Hantzsche-Wendt space on a grid of spacing 1/n.

    The n^3 grid cubes of the unit torus fall into n^3/4 orbits; one
    representative cube per orbit is kept, and each face is paired with the
    face of a representative that the group element carries it to.
    """
    if n % 2:
        raise ComplexError("grid must have even resolution")
    half = n // 2
    cosets = [(A, tuple(int(round(x * n)) for x in t)) for A, t in HW_COSETS]

    def act(g, p):
        A, t = g
        return tuple(A[i] * p[i] + t[i] for i in range(3))

    def cube_image(g, c):
        corners = [act(g, (c[0] + a, c[1] + b, c[2] + d)) for a in (0, 1) for b in (0, 1) for d in (0, 1)]
        return tuple(min(x[i] for x in corners) for i in range(3))

    def reduce_cube(c):
        """Representative cube and an element (coset, lattice shift) taking c to it."""
        best = None
        for g in cosets:
            img = cube_image(g, c)
            shift = tuple(-(img[i] // n) * n for i in range(3))
            red = tuple(img[i] + shift[i] for i in range(3))
            if best is None or red < best[0]:
                best = (red, g, shift)
        return best

    reps = sorted({reduce_cube((i, j, k))[0] for i in range(n) for j in range(n) for k in range(n)})
    assert len(reps) * 4 == n ** 3
    index = {c: i for i, c in enumerate(reps)}

    def label(ci: int, corner: tuple[int, int, int]) -> int:
        return ci * 8 + corner[0] * 4 + corner[1] * 2 + corner[2] + 1

    # faces as (axis, side) with an outward cycle of corner offsets
    def face_corners(axis, side):
        o = [0, 0, 0]
        o[axis] = side
        b1, b2 = [(a) for a in range(3) if a != axis]
        cyc = []
        for u, v in ((0, 0), (1, 0), (1, 1), (0, 1)):
            c = list(o)
            c[b1], c[b2] = u, v
            cyc.append(tuple(c))
        return cyc

    polygons, cells = {}, {}
    for ci, c in enumerate(reps):
        names = []
        for axis in range(3):
            for side in (0, 1):
                nm = f"Q{ci}{'xyz'[axis]}{side}"
                polygons[nm] = tuple(label(ci, k) for k in face_corners(axis, side))
                names.append(nm)
        cells[f"Q{ci}"] = tuple(names)

    pairings = []
    seen = set()
    for ci, c in enumerate(reps):
        for axis in range(3):
            for side in (0, 1):
                here = f"Q{ci}{'xyz'[axis]}{side}"
                if here in seen:
                    continue
                nb = list(c)
                nb[axis] += 1 if side else -1
                red, g, shift = reduce_cube(tuple(nb))
                cj = index[red]
                vmap = {}
                for k in face_corners(axis, side):
                    p = (c[0] + k[0], c[1] + k[1], c[2] + k[2])
                    q = act(g, p)
                    q = tuple(q[i] + shift[i] for i in range(3))
                    off = tuple(q[i] - red[i] for i in range(3))
                    vmap[label(ci, k)] = label(cj, off)
                img = set(vmap.values())
                there = next(nm for nm, cyc in polygons.items() if set(cyc) == img)
                seen |= {here, there}
                pairings.append(Pairing.make(here, there, vmap))
    return IdentificationScheme(polygons, cells, pairings, name=f"G6(n={n})")


# ----------------------------------------------------- shell triangulation

def shell_triangulation(Q: Quotient) -> SimplicialComplex:
    """Small triangulation of a one-cell quotient.

    Each boundary edge class gets two interior points and each face class a
    midpoint; every polyhedron corner is cut off by a new vertex; the dual
    polytope (one vertex per face) sits inside and the layer between the
    truncated boundary and the dual is coned region by region.
    """
    S = Q.scheme
    if len(S.cells) != 1:
        raise ComplexError("shell triangulation needs a single 3-cell")
    (cell,) = S.cells
    faces = list(S.cells[cell])
    labels: dict = {}

    def L(key) -> int:
        if key not in labels:
            labels[key] = len(labels) + 1
        return labels[key]

    def near(u: int, v: int) -> int:
        """Subdivision point on edge uv next to u."""
        c, s = Q.edge_class[_ekey(u, v)]
        tail_is_u = (u < v) == (s == 1)
        return L(("x", c, 0 if tail_is_u else 1))

    def qv(u: int) -> int:
        return L(("q", Q.vertex_class[u]))

    tets = []
    faces_at: dict[int, list[str]] = {}
    edge_faces: dict[tuple[int, int], list[str]] = {}
    for X in faces:
        cyc = S.polygons[X]
        k = len(cyc)
        m = L(("m", Q.face_class[X][0]))
        dX = L(("d", X))
        for j in range(k):
            u, v, w0 = cyc[j], cyc[(j + 1) % k], cyc[j - 1]
            faces_at.setdefault(u, []).append(X)
            edge_faces.setdefault(_ekey(u, v), []).append(X)
            a, b = near(u, v), near(v, u)
            b_prev = near(u, w0)
            cu = L(("c", u))
            tets.append((cu, qv(u), b_prev, a))           # truncation
            tets.append((dX, cu, b_prev, a))               # truncated corner, region X
            tets.append((dX, m, a, b))                     # central part, region X
            nxt = near(v, cyc[(j + 2) % k])
            tets.append((dX, m, b, nxt))
    for (u, v), XY in edge_faces.items():
        dX, dY = L(("d", XY[0])), L(("d", XY[1]))
        x, y = near(u, v), near(v, u)
        for seg in ((L(("c", u)), x), (x, y), (y, L(("c", v)))):
            tets.append(seg + (dX, dY))
    w = L(("d", faces[0]))
    for u, around in faces_at.items():
        ring = _ring(S, u, around)
        dring = [L(("d", X)) for X in ring]
        if w in dring:
            i = dring.index(w)
            dring = dring[i:] + dring[:i]
        tris = [(dring[0], dring[t], dring[t + 1]) for t in range(1, len(dring) - 1)]
        cu = L(("c", u))
        for t in tris:
            tets.append((cu,) + t)
            if w not in t:
                tets.append((w,) + t)
    K = build_complex(tets)
    if len(K.facets) != len(tets):
        raise ComplexError("shell triangulation produced repeated tetrahedra")
    return K


def _ring(S: IdentificationScheme, u: int, around: list[str]) -> list[str]:
    """Faces at corner u in cyclic order."""
    nbr = {}
    for X in around:
        cyc = S.polygons[X]
        i = cyc.index(u)
        nbr[X] = (_ekey(u, cyc[i - 1]), _ekey(u, cyc[(i + 1) % len(cyc)]))
    ring = [around[0]]
    prev_edge = nbr[around[0]][1]
    while len(ring) < len(around):
        X = next(Y for Y in around if Y not in ring and prev_edge in nbr[Y])
        e1, e2 = nbr[X]
        prev_edge = e2 if e1 == prev_edge else e1
        ring.append(X)
    return ring


# ---------------------------------------------------------------- builders

@dataclass
class BuildResult:
    complex: SimplicialComplex
    method: str          # "shell", "derived2", "derived1"
    quotient: Quotient
    notes: list[str]


def build_from_scheme(S: IdentificationScheme, prefer: Sequence[str] = ("shell", "derived2")) -> BuildResult:
    Q = quotient(S)
    notes = [Q.describe()]
    if Q.euler_characteristic() != 0:
        raise ComplexError(f"{S.name}: quotient has Euler characteristic {Q.euler_characteristic()}, not a manifold")
    for method in prefer:
        try:
            if method == "shell":
                K = shell_triangulation(Q)
            elif method == "derived1":
                K = simplicialize(Q, rounds=1)
            else:
                K = simplicialize(Q, rounds=2)
            report = verify_closed_3_manifold(K)
            if not report.ok:
                raise ComplexError(str(report))
            return BuildResult(K, method, Q, notes)
        except ComplexError as exc:
            msg = f"{S.name}: {method} triangulation failed ({exc}); falling back"
            log.warning(msg)
            notes.append(msg)
    raise ComplexError(f"{S.name}: no triangulation method succeeded")


def lens_space(p: int, q: int, **kw) -> SimplicialComplex:
    return build_lens(p, q, **kw).complex


def build_lens(p: int, q: int, prefer=("shell", "derived2")) -> BuildResult:
    if p < 2 or not 0 < q < p or gcd(p, q) != 1:
        raise ComplexError(f"lens space needs p >= 2, 0 < q < p, gcd(p,q) = 1; got ({p},{q})")
    return build_from_scheme(lens_scheme(p, q), prefer)


def build_prism(r: int, prefer=("shell", "derived2")) -> BuildResult:
    return build_from_scheme(prism_scheme(r), prefer)


def prism_space(r: int, **kw) -> SimplicialComplex:
    return build_prism(r, **kw).complex


def build_octahedral(prefer=("shell", "derived2")) -> BuildResult:
    return build_from_scheme(octahedral_scheme(), prefer)


def octahedral_space(**kw) -> SimplicialComplex:
    return build_octahedral(**kw).complex


def build_truncated_cube(prefer=("shell", "derived2")) -> BuildResult:
    return build_from_scheme(truncated_cube_scheme(), prefer)


def truncated_cube_space(**kw) -> SimplicialComplex:
    return build_truncated_cube(**kw).complex


def load_scheme(name: str) -> IdentificationScheme:
    text = resources.files("threefold.data").joinpath(name).read_text(encoding="utf-8")
    return parse_ids(text, source=name)


def build_g6(pipeline: str = "subdivided") -> BuildResult:
    """G6 either from the shipped two-cube scheme (double derived) or from the
    grid refined to eight cubes per cube followed by one barycentric subdivision."""
    if pipeline == "subdivided":
        try:
            return build_from_scheme(g6_scheme(4), prefer=("derived1",))
        except ComplexError as exc:
            log.warning("G6 subdivided pipeline failed (%s); using the two-cube scheme", exc)
    return build_from_scheme(load_scheme("g6.ids"), prefer=("derived2",))


def flat_G6(**kw) -> SimplicialComplex:
    return build_g6(**kw).complex
