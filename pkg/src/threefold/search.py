"""Exhaustive searches that produce the frozen surface fixtures.

These are offline oracles: the results live in ``threefold/data`` and the
tests re-run the searches to confirm the fixtures are what the search
finds.  Surfaces are assembled from orbits of triangles under a given
permutation group, so the prescribed symmetry holds by construction.
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Callable, Iterator, Sequence

from .complex import SimplicialComplex, build_complex, classify_closed_surface, VerificationError
from .constructions import (
    KLEIN_GLUINGS,
    TORUS_10_ROTATION,
    VertexAutomorphism,
    automorphism_group,
    cycles_to_map,
    mapping_torus,
    parse_cycles,
)
from .homology import homology, parse_homology

Perm = tuple[int, ...]  # images of 1..n at positions 0..n-1


def perm_from_cycles(cycles, n: int) -> Perm:
    m = cycles_to_map(cycles)
    return tuple(m.get(v, v) for v in range(1, n + 1))


def group_closure(generators: Sequence[Perm]) -> set[Perm]:
    n = len(generators[0])
    ident = tuple(range(1, n + 1))
    group = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for g in frontier:
            for h in generators:
                gh = tuple(h[g[i] - 1] for i in range(n))
                if gh not in group:
                    group.add(gh)
                    new.append(gh)
        frontier = new
    return group


def triangle_orbits(group: set[Perm], n: int) -> list[tuple[tuple[int, ...], ...]]:
    seen = set()
    orbits = []
    for t in combinations(range(1, n + 1), 3):
        if t in seen:
            continue
        orb = {tuple(sorted(g[v - 1] for v in t)) for g in group}
        seen |= orb
        orbits.append(tuple(sorted(orb)))
    return orbits


def orbit_surfaces(group: set[Perm], n: int, n_triangles: int) -> Iterator[SimplicialComplex]:
    """Closed surfaces on exactly n vertices that are unions of triangle orbits."""
    orbits = [o for o in triangle_orbits(group, n) if len(o) <= n_triangles]

    def rec(start: int, chosen: list, count: int, degree: dict):
        if count == n_triangles:
            if all(d == 2 for d in degree.values()):
                facets = [t for o in chosen for t in o]
                if len({v for t in facets for v in t}) == n:
                    yield build_complex(facets)
            return
        for k in range(start, len(orbits)):
            o = orbits[k]
            if count + len(o) > n_triangles:
                continue
            deg = dict(degree)
            ok = True
            for t in o:
                for e in combinations(t, 2):
                    deg[e] = deg.get(e, 0) + 1
                    if deg[e] > 2:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                chosen.append(o)
                yield from rec(k + 1, chosen, count + len(o), deg)
                chosen.pop()

    yield from rec(0, [], 0, {})


def _surface_type(K: SimplicialComplex):
    try:
        return classify_closed_surface(K)
    except VerificationError:
        return None


def find_surfaces(group_cycles: Sequence[str], n: int, n_triangles: int,
                  orientable: bool, genus: int,
                  accept: Callable[[SimplicialComplex], bool] = lambda K: True) -> list[SimplicialComplex]:
    gens = [perm_from_cycles(parse_cycles(c), n) for c in group_cycles]
    group = group_closure(gens)
    out = []
    for K in orbit_surfaces(group, n, n_triangles):
        st = _surface_type(K)
        if st is None or st.orientable != orientable or st.genus != genus:
            continue
        if accept(K):
            out.append(K)
    return out


B_HOMOLOGY = {
    "B1": "Z, Z^2+Z_2, Z+Z_2, 0",
    "B2": "Z, Z^2, Z+Z_2, 0",
    "B3": "Z, Z+Z_2^2, Z_2, 0",
    "B4": "Z, Z+Z_4, Z_2, 0",
}


def _klein_ok(K: SimplicialComplex) -> bool:
    table = {perm for perms in KLEIN_GLUINGS.values() for perm in perms}
    aut = automorphism_group(K)
    if len(aut) != len(table):
        return False
    for name, perms in KLEIN_GLUINGS.items():
        for p in perms:
            phi = VertexAutomorphism.from_cycles(K, parse_cycles(p))
            if homology(mapping_torus(K, phi)) != parse_homology(B_HOMOLOGY[name]):
                return False
    return True


def find_klein_bottle_8_20() -> list[SimplicialComplex]:
    """8-vertex Klein bottles invariant under the Table-8 group, with exactly
    that automorphism group and the four twisted-product homologies."""
    gens = [p for perms in KLEIN_GLUINGS.values() for p in perms if p != "()"]
    return find_surfaces(gens, 8, 16, orientable=False, genus=2, accept=_klein_ok)


G4_HOMOLOGY = "Z, Z+Z_2, Z, Z"


def _torus10_ok(K: SimplicialComplex) -> bool:
    phi = VertexAutomorphism.from_cycles(K, TORUS_10_ROTATION)
    return homology(mapping_torus(K, phi)) == parse_homology(G4_HOMOLOGY)


def find_torus_10_rot4(first_only: bool = True) -> list[SimplicialComplex]:
    rot = "".join(str(c).replace(" ", "") for c in TORUS_10_ROTATION)
    gens = [perm_from_cycles(parse_cycles(rot), 10)]
    group = group_closure(gens)
    out = []
    for K in orbit_surfaces(group, 10, 20):
        st = _surface_type(K)
        if st is None or not st.orientable or st.genus != 1:
            continue
        if _torus10_ok(K):
            out.append(K)
            if first_only:
                break
    return out


def twist_candidates(steps: int = 24) -> list[float]:
    """Angles k*2pi/steps; callers keep those mapping vertices to vertices."""
    return [2 * math.pi * k / steps for k in range(steps)]


def search_polytope_twists(P, target: str, classes, steps: int = 24) -> list[dict]:
    """Assignments of one twist angle per face size that give a manifold
    quotient (Euler characteristic 0) with the target homology.

    ``classes`` maps a face size to a label; faces of the same size get the
    same twist.
    """
    from itertools import product as iproduct

    from .quotient import quotient
    from .spaces import twisted_scheme

    goal = parse_homology(target)
    angles = twist_candidates(steps)
    sizes = sorted(classes)
    usable = {}
    for size in sizes:
        f = next(i for i, face in enumerate(P.faces) if len(face) == size)
        usable[size] = [a for a in angles if P.twist_map(f, P.opposite(f), a) is not None]
    hits = []
    for choice in iproduct(*(usable[s] for s in sizes)):
        tw = dict(zip(sizes, choice))
        S = twisted_scheme(P, lambda face: tw[len(face)], "search")
        try:
            Q = quotient(S)
        except Exception:
            continue
        if Q.euler_characteristic() == 0 and Q.homology() == goal:
            hits.append(tw)
    return hits
