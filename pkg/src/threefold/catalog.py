"""Named manifolds and the pipelines that build them."""
from __future__ import annotations

import difflib
import math
import re
from dataclasses import dataclass, field
from typing import Callable

from .complex import ComplexError, SimplicialComplex
from .constructions import (
    KLEIN_GLUINGS,
    MOEBIUS_GLUINGS,
    VertexAutomorphism,
    _fixture,
    barycentric_subdivision,
    connected_sum,
    klein_bottle_8_20,
    mapping_torus,
    moebius_torus,
    nonorientable_surface,
    orientable_surface,
    parse_cycles,
    polygon,
    product,
    rp2_6,
    simplex_boundary,
    torus_10_rot4,
)


class UnknownName(KeyError):
    def __init__(self, name: str, suggestions: list[str]):
        self.name = name
        self.suggestions = suggestions
        super().__init__(name)

    def __str__(self):
        hint = f"; did you mean {', '.join(self.suggestions)}?" if self.suggestions else ""
        return f"unknown manifold {self.name!r}{hint}"


@dataclass
class Built:
    name: str
    complex: SimplicialComplex
    homology: str | None
    orientable: bool | None
    notes: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Entry:
    name: str
    builder: Callable[[], tuple[SimplicialComplex, list[str]]]
    homology: str | None
    orientable: bool | None


def _plain(fn):
    return lambda: (fn(), [])


def _circle() -> SimplicialComplex:
    return polygon(3)


def rp3() -> SimplicialComplex:
    return _fixture("rp3_11.tri")


def _twisted_sphere():
    K = simplex_boundary(3)
    return mapping_torus(K, VertexAutomorphism.from_cycles(K, [(1, 2)]))


def _moebius_twist(name):
    def build():
        K = moebius_torus()
        return mapping_torus(K, VertexAutomorphism.from_cycles(K, MOEBIUS_GLUINGS[name])), []
    return build


def _g4():
    K, phi = torus_10_rot4()
    return mapping_torus(K, phi), []


def _klein_twist(name, which=0):
    def build():
        K = klein_bottle_8_20()
        phi = VertexAutomorphism.from_cycles(K, parse_cycles(KLEIN_GLUINGS[name][which]))
        return mapping_torus(K, phi), []
    return build


def _from_result(fn):
    def build():
        res = fn()
        notes = [f"pipeline: {res.method}"] + list(res.notes)
        return res.complex, notes
    return build


def _spaces():
    from . import spaces
    return spaces


_FLAT = {
    "G1": "Z, Z^3, Z^3, Z", "G2": "Z, Z+Z_2^2, Z, Z", "G3": "Z, Z+Z_3, Z, Z",
    "G4": "Z, Z+Z_2, Z, Z", "G5": "Z, Z, Z, Z", "G6": "Z, Z_4^2, 0, Z",
    "B1": "Z, Z^2+Z_2, Z+Z_2, 0", "B2": "Z, Z^2, Z+Z_2, 0",
    "B3": "Z, Z+Z_2^2, Z_2, 0", "B4": "Z, Z+Z_4, Z_2, 0",
}


def _fixed_entries() -> dict[str, Entry]:
    sp = _spaces()
    T3 = _plain(lambda: product(moebius_torus(), _circle()))
    e = [
        Entry("S3", _plain(lambda: simplex_boundary(4)), "Z, 0, 0, Z", True),
        Entry("S3_bary", _plain(lambda: barycentric_subdivision(simplex_boundary(4))), "Z, 0, 0, Z", True),
        Entry("S2xS1", _plain(lambda: product(simplex_boundary(3), _circle())), "Z, Z, Z, Z", True),
        Entry("S2~S1", _plain(_twisted_sphere), "Z, Z, Z_2, 0", False),
        Entry("RP2xS1", _plain(lambda: product(rp2_6(), _circle())), "Z, Z+Z_2, Z_2, 0", False),
        Entry("RP3", _plain(rp3), "Z, Z_2, 0, Z", True),
        Entry("RP3#RP3", _plain(lambda: connected_sum(rp3(), rp3())), "Z, Z_2^2, 0, Z", True),
        Entry("T3", T3, _FLAT["G1"], True),
        Entry("G1", T3, _FLAT["G1"], True),
        Entry("G2", _moebius_twist("G2"), _FLAT["G2"], True),
        Entry("G3", _moebius_twist("G3"), _FLAT["G3"], True),
        Entry("G4", _g4, _FLAT["G4"], True),
        Entry("G5", _moebius_twist("G5"), _FLAT["G5"], True),
        Entry("G6", _from_result(sp.build_g6), _FLAT["G6"], True),
        Entry("octahedral", _from_result(sp.build_octahedral), "Z, Z_3, 0, Z", True),
        Entry("truncated_cube", _from_result(sp.build_truncated_cube), "Z, Z_2, 0, Z", True),
    ]
    for b in ("B1", "B2", "B3", "B4"):
        e.append(Entry(b, _klein_twist(b), _FLAT[b], False))
    e.append(Entry("KleinBottle_x_S1", _plain(lambda: product(klein_bottle_8_20(), _circle())), _FLAT["B1"], False))
    return {x.name: x for x in e}


_PATTERNS = [
    (re.compile(r"L\((\d+),(\d+)\)"), "lens"),
    (re.compile(r"P\((\d+)\)"), "prism"),
    (re.compile(r"Sigma(\d+)_x_S1"), "sigma"),
    (re.compile(r"N(\d+)_x_S1"), "nsurf"),
]

EXAMPLE_NAMES = ["L(p,q)", "P(r)", "Sigma<g>_x_S1", "N<g>_x_S1"]


def names() -> list[str]:
    return list(_fixed_entries()) + EXAMPLE_NAMES


def _pattern_entry(name: str) -> Entry | None:
    sp = _spaces()
    for pat, kind in _PATTERNS:
        m = pat.fullmatch(name)
        if not m:
            continue
        args = [int(x) for x in m.groups()]
        if kind == "lens":
            p, q = args
            if p < 2 or not 0 < q < p or math.gcd(p, q) != 1:
                raise ValueError(f"L(p,q) needs p >= 2, 0 < q < p and gcd(p,q) = 1, got {name}")
            return Entry(name, _from_result(lambda: sp.build_lens(p, q)), f"Z, Z_{p}, 0, Z", True)
        if kind == "prism":
            (r,) = args
            if r < 2:
                raise ValueError("P(r) needs r >= 2")
            h = "Z, Z_2^2, 0, Z" if r % 2 == 0 else "Z, Z_4, 0, Z"
            return Entry(name, _from_result(lambda: sp.build_prism(r)), h, True)
        if kind == "sigma":
            (g,) = args
            h = "Z, Z, Z, Z" if g == 0 else f"Z, Z^{2 * g + 1}, Z^{2 * g + 1}, Z"
            return Entry(name, _plain(lambda: product(orientable_surface(g), _circle())), h, True)
        if kind == "nsurf":
            (g,) = args
            if g < 1:
                raise ValueError("N<g>_x_S1 needs g >= 1")
            h1 = "Z+Z_2" if g == 1 else f"Z^{g}+Z_2"
            h2 = "Z_2" if g == 1 else ("Z+Z_2" if g == 2 else f"Z^{g - 1}+Z_2")
            return Entry(name, _plain(lambda: product(nonorientable_surface(g), _circle())),
                         f"Z, {h1}, {h2}, 0", False)
    return None


def lookup(name: str) -> Entry:
    fixed = _fixed_entries()
    if name in fixed:
        return fixed[name]
    e = _pattern_entry(name)
    if e is not None:
        return e
    pool = list(fixed) + EXAMPLE_NAMES + ["L(2,1)", "L(3,1)", "P(2)", "Sigma2_x_S1", "N3_x_S1"]
    lowered = {x.lower(): x for x in pool}
    close = difflib.get_close_matches(name.lower(), list(lowered), n=4, cutoff=0.3)
    exact = [lowered[name.lower()]] if name.lower() in lowered else []
    prefix = [x for x in pool if x.lower()[:1] == name.lower()[:1] and x not in exact]
    ranked = exact + prefix + [lowered[c] for c in close if lowered[c] not in prefix + exact]
    raise UnknownName(name, ranked[:4])


def build(name: str) -> Built:
    e = lookup(name)
    K, notes = e.builder()
    if K.dim != 3:
        raise ComplexError(f"{name} did not produce a 3-manifold")
    return Built(name, K, e.homology, e.orientable, notes)
