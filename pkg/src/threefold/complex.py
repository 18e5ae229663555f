"""Pure simplicial complexes given by their facets.

A complex is an immutable value: a dimension plus a set of sorted vertex
tuples of equal length.  Everything else (faces, links, f-vector,
manifold checks) is derived on demand.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Raised for malformed complexes and bad arguments to complex operations."""


class DimensionMismatch(ComplexError):
    pass


class DegenerateSimplex(ComplexError):
    pass


class NotAFace(ComplexError):
    pass


class VerificationError(ComplexError):
    """A complex failed a combinatorial manifold/surface check."""

    def __init__(self, message: str, witness: Sequence[int] | None = None):
        super().__init__(message if witness is None else f"{message} (witness {tuple(witness)})")
        self.witness = tuple(witness) if witness is not None else None


class FVector(tuple):
    """Face counts (f0, f1, ..., fd)."""

    def __new__(cls, counts: Iterable[int]):
        return super().__new__(cls, tuple(int(c) for c in counts))

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self))

    def __repr__(self) -> str:
        return f"FVector({tuple(self)})"


@dataclass(frozen=True)
class SurfaceClass:
    orientable: bool
    genus: int

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus if self.orientable else 2 - self.genus

    def __str__(self) -> str:
        kind = "orientable" if self.orientable else "non-orientable"
        return f"{kind} genus {self.genus}"


@dataclass(frozen=True)
class SimplicialComplex:
    """A pure simplicial complex stored as its facet set.

    Build instances with :func:`build_complex`; the constructor trusts its
    input.
    """

    dim: int
    facets: frozenset[Simplex]
    _faces: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def vertices(self) -> tuple[int, ...]:
        if "v" not in self._faces:
            self._faces["v"] = tuple(sorted({v for f in self.facets for v in f}))
        return self._faces["v"]

    def sorted_facets(self) -> list[Simplex]:
        return sorted(self.facets)

    def faces(self, k: int) -> list[Simplex]:
        """All k-dimensional faces, sorted lexicographically (cached)."""
        if k < 0 or k > self.dim:
            return []
        if k not in self._faces:
            if k == self.dim:
                out = set(self.facets)
            else:
                out = {s for f in self.facets for s in combinations(f, k + 1)}
            self._faces[k] = sorted(out)
        return self._faces[k]

    def has_face(self, face: Sequence[int]) -> bool:
        s = tuple(sorted(face))
        if len(s) == self.dim + 1:
            return s in self.facets
        if not s or len(s) > self.dim + 1:
            return False
        return s in set(self.faces(len(s) - 1))

    def relabel(self, mapping: dict[int, int]) -> "SimplicialComplex":
        return build_complex([[mapping[v] for v in f] for f in self.facets])

    def compact(self) -> "SimplicialComplex":
        """Relabel vertices to 1..f0 preserving their order."""
        return self.relabel({v: i for i, v in enumerate(self.vertices, start=1)})

    def __len__(self) -> int:
        return len(self.facets)

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f={tuple(f_vector(self))})"


def build_complex(facets: Iterable[Sequence[int]]) -> SimplicialComplex:
    normalized = set()
    length = None
    for raw in facets:
        f = tuple(sorted(int(v) for v in raw))
        if not f:
            raise DimensionMismatch("empty facet")
        if length is None:
            length = len(f)
        elif len(f) != length:
            raise DimensionMismatch(f"facet {f} has {len(f)} vertices, expected {length}")
        if len(set(f)) != len(f):
            raise DegenerateSimplex(f"repeated label in facet {f}")
        if f[0] < 1:
            raise ComplexError(f"vertex labels must be positive, got {f}")
        normalized.add(f)
    if length is None:
        raise ComplexError("a complex needs at least one facet")
    return SimplicialComplex(length - 1, frozenset(normalized))


def f_vector(K: SimplicialComplex) -> FVector:
    return FVector(len(K.faces(k)) for k in range(K.dim + 1))


def euler_characteristic(K: SimplicialComplex) -> int:
    return f_vector(K).euler_characteristic


def link(K: SimplicialComplex, face: Sequence[int]) -> SimplicialComplex | None:
    """Link of ``face``; ``None`` when the link is empty (face is a facet)."""
    s = set(face)
    containing = [f for f in K.facets if s.issubset(f)]
    if not containing:
        raise NotAFace(f"{tuple(face)} is not a face")
    rest = [tuple(v for v in f if v not in s) for f in containing]
    if not rest[0]:
        return None
    return build_complex(rest)


def star_facets(K: SimplicialComplex, face: Sequence[int]) -> list[Simplex]:
    s = set(face)
    return [f for f in K.facets if s.issubset(f)]


def _ridge_map(K: SimplicialComplex) -> dict[Simplex, list[Simplex]]:
    ridges: dict[Simplex, list[Simplex]] = defaultdict(list)
    for f in K.facets:
        for i in range(len(f)):
            ridges[f[:i] + f[i + 1:]].append(f)
    return ridges


def is_connected(K: SimplicialComplex) -> bool:
    """Connectivity through shared vertices (the 1-skeleton)."""
    adj: dict[int, set[int]] = defaultdict(set)
    for f in K.facets:
        for v in f:
            adj[v].update(f)
    verts = list(adj)
    seen = {verts[0]}
    todo = [verts[0]]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(verts)


def facet_graph_components(K: SimplicialComplex) -> int:
    """Number of components of the graph of facets adjacent across ridges."""
    ridges = _ridge_map(K)
    adj: dict[Simplex, list[Simplex]] = defaultdict(list)
    for fs in ridges.values():
        for a, b in combinations(fs, 2):
            adj[a].append(b)
            adj[b].append(a)
    seen: set[Simplex] = set()
    comps = 0
    for start in K.facets:
        if start in seen:
            continue
        comps += 1
        seen.add(start)
        todo = [start]
        while todo:
            f = todo.pop()
            for g in adj[f]:
                if g not in seen:
                    seen.add(g)
                    todo.append(g)
    return comps


def orientation(K: SimplicialComplex) -> dict[Simplex, int] | None:
    """Coherent orientation signs for the facets of a pseudomanifold.

    Each facet is taken with its sorted vertex order times the returned
    sign.  Returns ``None`` when no coherent choice exists.  Requires every
    ridge to lie in at most two facets.
    """
    ridges = _ridge_map(K)
    sign: dict[Simplex, int] = {}
    # position of each ridge inside each of its facets
    for start in sorted(K.facets):
        if start in sign:
            continue
        sign[start] = 1
        todo = deque([start])
        while todo:
            f = todo.popleft()
            for i in range(len(f)):
                r = f[:i] + f[i + 1:]
                others = ridges[r]
                if len(others) > 2:
                    raise VerificationError("ridge in more than two facets", r)
                for g in others:
                    if g == f:
                        continue
                    j = next(k for k in range(len(g)) if g[k] not in r)
                    want = -sign[f] * (-1) ** (i + j)
                    if g in sign:
                        if sign[g] != want:
                            return None
                    else:
                        sign[g] = want
                        todo.append(g)
    return sign


def is_orientable(K: SimplicialComplex) -> bool:
    return orientation(K) is not None


def _check_cycle(L: SimplicialComplex | None) -> bool:
    """True when L is a single cycle (a connected 1-manifold without boundary)."""
    if L is None or L.dim != 1:
        return False
    deg: dict[int, int] = defaultdict(int)
    for a, b in L.facets:
        deg[a] += 1
        deg[b] += 1
    return all(d == 2 for d in deg.values()) and is_connected(L)


def classify_closed_surface(K: SimplicialComplex) -> SurfaceClass:
    if K.dim != 2:
        raise VerificationError(f"expected a 2-dimensional complex, got dim {K.dim}")
    for r, fs in _ridge_map(K).items():
        if len(fs) != 2:
            raise VerificationError(f"edge lies in {len(fs)} triangles", r)
    for v in K.vertices:
        if not _check_cycle(link(K, (v,))):
            raise VerificationError("vertex link is not a single cycle", (v,))
    if not is_connected(K):
        raise VerificationError("surface is not connected")
    chi = euler_characteristic(K)
    if is_orientable(K):
        return SurfaceClass(True, (2 - chi) // 2)
    return SurfaceClass(False, 2 - chi)


@dataclass
class ManifoldReport:
    ok: bool
    orientable: bool | None
    failures: list[tuple[str, Simplex]]

    def raise_if_failed(self) -> None:
        if not self.ok:
            what, witness = self.failures[0]
            raise VerificationError(what, witness)

    def __str__(self) -> str:
        if self.ok:
            return "closed 3-manifold, " + ("orientable" if self.orientable else "non-orientable")
        lines = [f"not a closed 3-manifold ({len(self.failures)} failure(s))"]
        lines += [f"  {what}: {w}" for what, w in self.failures[:10]]
        return "\n".join(lines)


def _is_2_sphere(L: SimplicialComplex | None) -> bool:
    if L is None or L.dim != 2:
        return False
    try:
        s = classify_closed_surface(L)
    except VerificationError:
        return False
    return s.orientable and s.genus == 0


def verify_closed_3_manifold(K: SimplicialComplex, max_failures: int = 20) -> ManifoldReport:
    """Combinatorial check that K triangulates a closed connected 3-manifold."""
    failures: list[tuple[str, Simplex]] = []
    if K.dim != 3:
        return ManifoldReport(False, None, [(f"dimension is {K.dim}, not 3", ())])
    ridges = _ridge_map(K)
    for r, fs in sorted(ridges.items()):
        if len(fs) != 2:
            failures.append((f"triangle lies in {len(fs)} tetrahedra", r))
    if facet_graph_components(K) != 1:
        failures.append(("complex is not connected", ()))
    if failures:
        return ManifoldReport(False, None, failures[:max_failures])

    edge_links: dict[Simplex, list[Simplex]] = defaultdict(list)
    vertex_links: dict[int, list[Simplex]] = defaultdict(list)
    for f in K.facets:
        for i, j in combinations(range(4), 2):
            edge_links[(f[i], f[j])].append(tuple(f[k] for k in range(4) if k not in (i, j)))
        for i in range(4):
            vertex_links[f[i]].append(f[:i] + f[i + 1:])
    for e, ls in sorted(edge_links.items()):
        if not _check_cycle(build_complex(ls)):
            failures.append(("edge link is not a single cycle", e))
            if len(failures) >= max_failures:
                break
    for v, ls in sorted(vertex_links.items()):
        if len(failures) >= max_failures:
            break
        if not _is_2_sphere(build_complex(ls)):
            failures.append(("vertex link is not a 2-sphere", (v,)))
    orientable = is_orientable(K) if not failures else None
    return ManifoldReport(not failures, orientable, failures)


# --- .tri facet-list files -------------------------------------------------

def format_tri(K: SimplicialComplex, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"dim {K.dim}")
    lines += [" ".join(map(str, f)) for f in K.sorted_facets()]
    return "\n".join(lines) + "\n"


def write_tri(K: SimplicialComplex, path: str | Path, comments: Sequence[str] = ()) -> None:
    Path(path).write_text(format_tri(K, comments), encoding="utf-8")


def parse_tri(text: str, source: str = "<string>") -> SimplicialComplex:
    dim = None
    facets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if dim is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dim" or not parts[1].isdigit():
                raise ComplexError(f"{source}:{lineno}: expected 'dim D', got {line!r}")
            dim = int(parts[1])
            continue
        try:
            labels = [int(tok) for tok in line.split()]
        except ValueError:
            raise ComplexError(f"{source}:{lineno}: non-integer label in {line!r}") from None
        if len(labels) != dim + 1:
            raise ComplexError(f"{source}:{lineno}: expected {dim + 1} labels, got {len(labels)}")
        if any(v < 1 for v in labels):
            raise ComplexError(f"{source}:{lineno}: labels must be positive")
        if len(set(labels)) != len(labels):
            raise ComplexError(f"{source}:{lineno}: repeated label in facet")
        facets.append(labels)
    if dim is None:
        raise ComplexError(f"{source}: missing 'dim' line")
    if not facets:
        raise ComplexError(f"{source}: no facets")
    return build_complex(facets)


def read_tri(path: str | Path) -> SimplicialComplex:
    return parse_tri(Path(path).read_text(encoding="utf-8"), str(path))


def read_tri_comments(path: str | Path) -> list[str]:
    return [line[1:].strip() for line in Path(path).read_text(encoding="utf-8").splitlines()
            if line.startswith("#")]
