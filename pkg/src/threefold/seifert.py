"""Seifert invariants: parsing, normal forms and exact arithmetic.

A fibration is written ``{Oo,g|b;(a1,b1),...,(ar,br)}``.  The first class
letter says whether the total space is orientable, the second whether the
orbit surface is.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable

log = logging.getLogger(__name__)

CLASSES = ("Oo", "On", "No", "NnI", "NnII", "NnIII")
ORIENTABLE_CLASSES = ("Oo", "On")
_MIN_GENUS = {"Oo": 0, "On": 1, "No": 1, "NnI": 1, "NnII": 2, "NnIII": 3}


class SeifertError(ValueError):
    pass


class SeifertSyntaxError(SeifertError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}")

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.pos}^"


class InvalidFiber(SeifertError):
    pass


class Geometry(Enum):
    S2xR = "S2xR"
    E3 = "E3"
    H2xR = "H2xR"
    S3 = "S3"
    NIL = "Nil"
    SL2 = "SL2~"
    SOL = "Sol"
    H3 = "H3"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SeifertInvariants:
    cls: str
    g: int
    b: int
    fibers: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise SeifertError(f"unknown class {self.cls!r}")
        if self.g < 0:
            raise SeifertError("genus must be non-negative")
        if self.g < _MIN_GENUS[self.cls]:
            raise SeifertError(f"class {self.cls} needs genus >= {_MIN_GENUS[self.cls]}, got {self.g}")
        object.__setattr__(self, "fibers", tuple((int(a), int(c)) for a, c in self.fibers))

    @property
    def orientable(self) -> bool:
        return self.cls in ORIENTABLE_CLASSES

    @property
    def r(self) -> int:
        return len(self.fibers)

    def __str__(self):
        return render(self)


# ----------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>[-+]?\d+)|(?P<word>[A-Za-z]+)|(?P<sym>[{}(),;|]))")
_ALIASES = {"∣": "|", "−": "-", "｜": "|", "–": "-"}


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            return
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise SeifertSyntaxError(f"unexpected character {text[pos + stripped]!r}", text, pos + stripped)
        kind = m.lastgroup
        start = m.start(kind)
        yield kind, m.group(kind), start
        pos = m.end()


def parse(text: str) -> SeifertInvariants:
    """Parse a fibration symbol; the result is not normalized."""
    src = "".join(_ALIASES.get(ch, ch) for ch in text)
    toks = list(_tokens(src))
    toks.append(("end", "", len(src)))
    i = 0

    def take(kind, value=None, what=None):
        nonlocal i
        k, v, p = toks[i]
        if k != kind or (value is not None and v != value):
            want = what or repr(value) or kind
            got = "end of input" if k == "end" else repr(v)
            raise SeifertSyntaxError(f"expected {want}, got {got}", src, p)
        i += 1
        return v, p

    take("sym", "{")
    word, wpos = take("word", what="class")
    if word == "OnI":
        log.info("class OnI read as On")
        word = "On"
    if word not in CLASSES:
        raise SeifertSyntaxError(f"unknown class {word!r}", src, wpos)
    take("sym", ",")
    g, gpos = take("int", what="genus")
    take("sym", "|")
    b, _ = take("int", what="integer b")
    fibers = []
    sep = None
    while toks[i][0] == "sym" and toks[i][1] in ";,":
        s = toks[i][1]
        if sep is None and s != ";":
            raise SeifertSyntaxError("expected ';' before the first fiber", src, toks[i][2])
        sep = s
        i += 1
        take("sym", "(")
        a, apos = take("int", what="alpha")
        take("sym", ",")
        c, _ = take("int", what="beta")
        take("sym", ")")
        if int(a) == 0:
            raise SeifertSyntaxError("alpha must be non-zero", src, apos)
        fibers.append((int(a), int(c)))
    take("sym", "}")
    take("end", what="end of input")
    try:
        return SeifertInvariants(word, int(g), int(b), tuple(fibers))
    except SeifertError as exc:
        raise SeifertSyntaxError(str(exc), src, gpos) from None


def render(si: SeifertInvariants) -> str:
    body = f"{{{si.cls},{si.g}|{si.b}"
    if si.fibers:
        body += ";" + ",".join(f"({a},{c})" for a, c in si.fibers)
    return body + "}"


# ----------------------------------------------------------- normal forms

def _check_fiber(a: int, c: int) -> None:
    if a == 0:
        raise InvalidFiber("alpha must be non-zero")
    if a < 0:
        raise InvalidFiber(f"alpha must be positive, got ({a},{c})")
    if math.gcd(a, c) != 1:
        raise InvalidFiber(f"fiber ({a},{c}) has gcd {math.gcd(a, c)}")


def normalize(si: SeifertInvariants) -> SeifertInvariants:
    b = si.b
    fibers = []
    for a, c in si.fibers:
        _check_fiber(a, c)
        k, c = divmod(c, a)
        b += k
        if a > 1:
            fibers.append((a, c))
    if not si.orientable:
        folded = []
        for a, c in fibers:
            if 2 * c > a:
                c = a - c
                b += 1
            folded.append((a, c))
        fibers = folded
        b %= 2
        if any(a == 2 for a, _ in fibers):
            b = 0
    return SeifertInvariants(si.cls, si.g, b, tuple(sorted(fibers)))


def reverse_orientation(si: SeifertInvariants) -> SeifertInvariants:
    if not si.orientable:
        log.warning("class %s is nonorientable; orientation reversal is a no-op", si.cls)
        return si
    si = normalize(si)
    rev = SeifertInvariants(si.cls, si.g, -si.r - si.b, tuple((a, a - c) for a, c in si.fibers))
    return normalize(rev)


def as_invariants(x) -> SeifertInvariants:
    return parse(x) if isinstance(x, str) else x


# ---------------------------------------------------------- rational data

def euler_number(si: SeifertInvariants) -> Fraction:
    si = as_invariants(si)
    if not si.orientable:
        return Fraction(0)
    return -(si.b + sum((Fraction(c, a) for a, c in si.fibers), Fraction(0)))


def surface_euler_characteristic(si: SeifertInvariants) -> int:
    if si.cls in ("Oo", "No"):
        return 2 - 2 * si.g
    return 2 - si.g


def orbifold_euler_characteristic(si: SeifertInvariants) -> Fraction:
    si = as_invariants(si)
    return surface_euler_characteristic(si) - sum((1 - Fraction(1, a) for a, _ in si.fibers), Fraction(0))


_TABLE = {
    (1, True): Geometry.S2xR, (0, True): Geometry.E3, (-1, True): Geometry.H2xR,
    (1, False): Geometry.S3, (0, False): Geometry.NIL, (-1, False): Geometry.SL2,
}


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def geometry(si: SeifertInvariants) -> Geometry:
    si = normalize(as_invariants(si))
    chi = orbifold_euler_characteristic(si)
    return _TABLE[(_sign(chi), euler_number(si) == 0)]


def platonic_triple(a1: int, a2: int, a3: int) -> str:
    t = tuple(sorted((a1, a2, a3)))
    if min(t) < 2:
        raise SeifertError("multiplicities must be at least 2")
    if Fraction(1, t[0]) + Fraction(1, t[1]) + Fraction(1, t[2]) <= 1:
        return "none"
    if t[:2] == (2, 2):
        return "(2,2,a)"
    return "({},{},{})".format(*t)


def is_small(si: SeifertInvariants) -> bool:
    si = normalize(as_invariants(si))
    alphas = [a for a, _ in si.fibers]
    r = si.r
    if si.cls == "Oo" and si.g == 0:
        if r <= 2:
            return True
        if r == 3:
            return platonic_triple(*alphas) != "none"
        return si.b == -2 and si.fibers == ((2, 1),) * 4
    if si.g == 1 and si.cls in ("Oo", "No"):
        return r == 0
    if si.g == 1 and si.cls in ("On", "NnI"):
        return r <= 1
    if si.g == 2 and si.cls in ("On", "NnI", "NnII"):
        return r == 0
    return False


def same_fibration(x, y) -> bool:
    """Equality of normalized invariants up to orientation reversal."""
    x, y = normalize(as_invariants(x)), normalize(as_invariants(y))
    return x == y or (x.orientable and reverse_orientation(x) == y)


# ------------------------------------------------------------ lens spaces

def _check_lens(p: int, *qs: int) -> None:
    if p < 2:
        raise SeifertError(f"lens space needs p >= 2, got {p}")
    for q in qs:
        if math.gcd(p, q) != 1:
            raise SeifertError(f"gcd({p},{q}) != 1")


def lens_homotopy_equivalent(p: int, q: int, q2: int) -> bool:
    _check_lens(p, q, q2)
    target = (q * q2) % p
    return any((n * n) % p in (target, (-target) % p) for n in range(p))


def lens_homeomorphic(p: int, q: int, q2: int) -> bool:
    _check_lens(p, q, q2)
    return (q2 - q) % p == 0 or (q2 + q) % p == 0 or (q * q2) % p in (1, p - 1)


def canonical_lens_q(p: int, q: int) -> int:
    """Smallest q' in 1..p-1 with L(p,q') homeomorphic to L(p,q)."""
    _check_lens(p, q)
    if p == 2:
        return 1
    inv = pow(q, -1, p)
    return min(x % p for x in (q, -q, inv, -inv))


def _lens_label(p: int, q: int) -> str:
    p = abs(p)
    if p == 0:
        return "S2xS1"
    if p == 1:
        return "S3"
    return f"L({p},{q % p})"


def canonical_name(name: str) -> str:
    """Lens labels rewritten with the smallest equivalent q; others unchanged."""
    m = re.fullmatch(r"L\((\d+),(\d+)\)", name)
    if not m:
        return name
    p, q = int(m.group(1)), int(m.group(2))
    return f"L({p},{canonical_lens_q(p, q)})"


def bezout_pair(alpha: int, c: int) -> tuple[int, int]:
    """(m, n) with m*alpha - n*c = 1 and the smallest non-negative n."""
    if math.gcd(alpha, c) != 1:
        raise SeifertError(f"gcd({alpha},{c}) != 1")
    if alpha == 1:
        return 1, 0
    n = (-pow(c, -1, alpha)) % alpha
    m, rem = divmod(1 + n * c, alpha)
    assert rem == 0
    return m, n


# ------------------------------------------------------------ recognition

_NAMED_TRIPLES = {
    ((2, 1), (3, 1), (3, 1)): "S3/T*",
    ((2, 1), (3, 1), (4, 1)): "S3/O*",
    ((2, 1), (3, 1), (5, 1)): "S3/I* (Poincare)",
}
_FAMILY = {"(2,3,3)": "generalized octahedral space", "(2,3,4)": "generalized truncated cube space",
           "(2,3,5)": "generalized dodecahedral space", "(2,2,a)": "generalized prism space"}


def _poincare(name: str) -> str:
    return name.replace("(Poincare)", "(Poincaré)")


def _oo_sphere_name(si: SeifertInvariants) -> str | None:
    b, f = si.b, si.fibers
    if si.r == 0:
        return _lens_label(b, 1)
    if si.r == 1:
        (a, c), = f
        return _lens_label(b * a + c, a)
    if si.r == 2:
        (a1, c1), (a2, c2) = f
        p = b * a1 * a2 + a1 * c2 + a2 * c1
        if abs(p) <= 1:
            return _lens_label(p, 1)
        m, n = bezout_pair(a1, b * a1 + c1)
        return _lens_label(p, m * a2 - n * c2)
    if si.r == 3:
        cls = platonic_triple(*(a for a, _ in f))
        if cls == "none":
            return None
        if b == -1 and f in _NAMED_TRIPLES:
            return _poincare(_NAMED_TRIPLES[f])
        if cls == "(2,2,a)" and b == -1 and f[0] == f[1] == (2, 1) and f[2][1] == 1:
            return f"P({f[2][0]})"
        return None
    return None


def _family_label(si: SeifertInvariants, geo: Geometry) -> str:
    fibers = ",".join(f"({a},{c})" for a, c in si.fibers) or "none"
    if si.cls == "Oo" and si.g == 0 and si.r == 3:
        cls = platonic_triple(*(a for a, _ in si.fibers))
        if cls in _FAMILY:
            return f"{_FAMILY[cls]} [fibers {fibers}]"
    if si.cls == "On" and si.g == 1 and geo is Geometry.S3:
        return f"generalized prism space [class On, fibers {fibers}]"
    return f"{geo} family [class {si.cls}, g={si.g}, fibers {fibers}]"


def recognize_spherical(si) -> str:
    """Name of a spherical (or S2xR relative) fibration, following the spherical rows of the ledger.

    Lens labels keep the table's parameters, e.g. L(5,3); use
    :func:`canonical_name` for the smallest equivalent q.
    """
    si = normalize(as_invariants(si))
    geo = geometry(si)
    if si.cls == "Oo" and si.g == 0:
        for cand in (si, reverse_orientation(si)):
            name = _oo_sphere_name(cand)
            if name is not None:
                return name
    if si.cls == "NnI" and si.g == 1 and si.r <= 1:
        odd = (si.b * si.fibers[0][0] + si.fibers[0][1]) % 2 if si.fibers else si.b % 2
        return "S2~S1" if odd else "RP2xS1"
    if si.cls == "On" and si.g == 1 and si.r == 0 and si.b == 0:
        return "RP3#RP3"
    return _family_label(si, geo)


# -------------------------------------------------------- homology spheres

def homology_sphere_identity(si: SeifertInvariants) -> int:
    """b*a1*...*ar + sum_i beta_i * prod_{j != i} a_j."""
    A = math.prod(a for a, _ in si.fibers)
    return si.b * A + sum(c * (A // a) for a, c in si.fibers)


def homology_sphere_invariants(*alphas: int) -> SeifertInvariants:
    if len(alphas) == 1 and isinstance(alphas[0], (tuple, list)):
        alphas = tuple(alphas[0])
    if len(alphas) < 3:
        raise SeifertError("need at least three multiplicities")
    if min(alphas) < 2:
        raise SeifertError("multiplicities must be at least 2")
    for x, y in combinations(alphas, 2):
        if math.gcd(x, y) != 1:
            raise SeifertError(f"{x} and {y} are not coprime")
    A = math.prod(alphas)
    betas = [pow(A // a, -1, a) for a in alphas]
    total = sum(c * (A // a) for a, c in zip(alphas, betas))
    b, rem = divmod(1 - total, A)
    assert rem == 0
    si = normalize(SeifertInvariants("Oo", 0, b, tuple(zip(alphas, betas))))
    assert homology_sphere_identity(si) == 1
    return si


# --------------------------------------------------------------- Brieskorn

@dataclass(frozen=True)
class BrieskornRecord:
    triple: tuple[int, int, int]
    geometry: Geometry
    order: int | None = None
    name: str | None = None
    notes: tuple[str, ...] = ()


_BRIESKORN_NAMES = {(2, 3, 3): "P(2)", (2, 3, 4): "S3/T*", (2, 3, 5): "S3/I*"}
_NIL_TORUS_BUNDLES = {(2, 3, 6), (2, 4, 4), (3, 3, 3)}
_COINCIDENCES = {(2, 9, 18): (3, 5, 15), (3, 5, 15): (2, 9, 18)}


def brieskorn_geometry(p: int, q: int, r: int) -> BrieskornRecord:
    t = tuple(sorted((p, q, r)))
    if t[0] < 2:
        raise SeifertError("Brieskorn exponents must be at least 2")
    s = Fraction(1, t[0]) + Fraction(1, t[1]) + Fraction(1, t[2]) - 1
    notes = []
    if s > 0:
        order = Fraction(4, t[0] * t[1] * t[2]) / (s * s)
        assert order.denominator == 1
        name = f"L({t[2]},1)" if t[:2] == (2, 2) else _BRIESKORN_NAMES.get(t)
        return BrieskornRecord(t, Geometry.S3, int(order), name)
    if s == 0:
        if t in _NIL_TORUS_BUNDLES:
            notes.append("torus bundle over the circle")
        return BrieskornRecord(t, Geometry.NIL, notes=tuple(notes))
    if t in _COINCIDENCES:
        other = _COINCIDENCES[t]
        notes.append("M({},{},{}) is homeomorphic to M({},{},{})".format(*t, *other))
    return BrieskornRecord(t, Geometry.SL2, notes=tuple(notes))


def sweep(max_alpha: int = 6, max_b: int = 3, max_g: int = 2, max_r: int = 3) -> Iterable[SeifertInvariants]:
    """All normalized fibrations inside the given bounds."""
    from itertools import combinations_with_replacement

    seen = set()
    pairs = [(a, c) for a in range(2, max_alpha + 1) for c in range(1, a) if math.gcd(a, c) == 1]
    for cls in CLASSES:
        for g in range(_MIN_GENUS[cls], max_g + 1):
            for b in range(-max_b, max_b + 1):
                for r in range(max_r + 1):
                    for fib in combinations_with_replacement(pairs, r):
                        si = normalize(SeifertInvariants(cls, g, b, fib))
                        if si not in seen:
                            seen.add(si)
                            yield si

